#pragma once

#include "cutplane/cut.hpp"
#include "cutplane/oracle.hpp"
#include "cutplane/runresult.hpp"
#include "cutplane/schedule.hpp"

namespace cutplane {

enum class JointVariant { M3_1, M3_2, M3_3 };

struct JointConfig {
    JointVariant variant = JointVariant::M3_3;
    Schedule eps_schedule = Schedule::geometric(2.0);    // region quality
    Schedule delta_schedule = Schedule::geometric(2.0);  // gap quality
    DropStrategy region_drop = DropStrategy::active_only;  // Q_i, d-codes
    DropStrategy epi_drop = DropStrategy::keep_all;        // S_i, b-codes
    double alpha_lower = 0.0;  // gamma >= alpha; must satisfy alpha <= f*
    double gamma_bar = -1e6;   // M3_3 epi base bound
    long max_iters = 200000;
    double stop_eps = 1e-5;
    double wall_limit_ms = 0.0;
    bool record_trace = true;
    bool trace_points = false;
    InvariantObserver* observer = nullptr;
};

// Chapter 3 runners: simultaneous region + epigraph approximation with a
// single LP per iteration. M3_1 nested, M3_2 two-stage, M3_3 dual eps/delta
// criteria with dropping of both stores.
RunResult run_joint(const ProblemInstance& problem, const JointConfig& cfg);

}  // namespace cutplane
