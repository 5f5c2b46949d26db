#pragma once

#include <functional>
#include <optional>

#include "cutplane/cut.hpp"
#include "cutplane/oracle.hpp"
#include "cutplane/runresult.hpp"
#include "cutplane/schedule.hpp"

namespace cutplane {

enum class FeasibleVariant { M1_1, M1_2, M1_4 };

// Method 1.2 cut construction: one cut from a subgradient of F at u_i, or
// one cut per violated constraint.
enum class CutMode { aggregate_F, per_constraint };

struct FeasibleConfig {
    FeasibleVariant variant = FeasibleVariant::M1_1;
    Schedule schedule = Schedule::zero();
    DropStrategy drop = DropStrategy::keep_all;
    CutMode cut_mode = CutMode::aggregate_F;  // M1_2 only
    bool deepest_only = false;                // H_i = {j_i} instead of J_i
    long max_iters = 200000;
    double stop_eps = 1e-5;
    double wall_limit_ms = 0.0;  // 0 = no wall cap
    bool record_trace = true;
    bool trace_points = false;
    // M1_2 improver: z_k with f(x_k) <= f(z_k) <= f*; defaults to z_k = x_k.
    std::function<Point(const Point&)> improver_hook;
    InvariantObserver* observer = nullptr;
};

// Chapter 1 runners: feasible-region approximation (Methods 1.1, 1.2, 1.4).
// Requires a linear objective (problem.objective_linear); nonlinear
// objectives go through the joint family.
RunResult run_feasible(const ProblemInstance& problem, const FeasibleConfig& cfg);

struct ProjectionOptions {
    long max_iters = 200000;
    double wall_limit_ms = 0.0;
    bool record_trace = true;
    bool trace_points = false;
    InvariantObserver* observer = nullptr;
};

// Method 1.3: projection of y onto D = D' ∩ D'' via single deepest cuts and
// full store resets at refresh events.
RunResult run_projection(const ProblemInstance& problem, const Point& y,
                         Schedule schedule, double stop_eps,
                         const ProjectionOptions& opts = {});

}  // namespace cutplane
