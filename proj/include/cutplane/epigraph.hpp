#pragma once

#include <functional>

#include "cutplane/cut.hpp"
#include "cutplane/oracle.hpp"
#include "cutplane/runresult.hpp"
#include "cutplane/schedule.hpp"

namespace cutplane {

enum class EpiVariant { M2_1, M2_2, M2_3, M2_4 };

struct EpiConfig {
    EpiVariant variant = EpiVariant::M2_1;
    Schedule schedule = Schedule::geometric(2.0);  // eps_k, or delta_k for M2_4
    DropStrategy drop = DropStrategy::keep_all;
    double gamma0_bar = -1e6;
    double level_lambda = 0.5;   // M2_3, in (0,1)
    double eps_solution = 0.01;  // M2_4, > 0
    long max_iters = 200000;
    double stop_eps = 1e-5;
    double wall_limit_ms = 0.0;
    bool record_trace = true;
    bool trace_points = false;
    // x_k selector subject to f(x_k) <= f(y_{i_k}) (M2_2/M2_4 mixing hook).
    std::function<Point(const Point&)> improver_hook;
    InvariantObserver* observer = nullptr;
};

// Chapter 2 runners: epigraph approximation. M2_1 minimax subgradient cuts,
// M2_2 epi support-vector cuts, M2_3 modified level method, M2_4 epsilon
// solutions with the distance refresh criterion.
RunResult run_epigraph(const ProblemInstance& problem, const EpiConfig& cfg);

}  // namespace cutplane
