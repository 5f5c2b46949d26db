#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cutplane/types.hpp"

namespace cutplane {

class CutStore;
struct Cut;

enum class RunStatus { Converged, IterLimit, Aborted };

struct IterRecord {
    long iter = 0;
    double f_y = 0.0;
    double F_y = 0.0;
    double gamma = 0.0;  // model lower value (LP objective)
    int cuts_region = 0;
    int cuts_epi = 0;
    bool refresh = false;
};

struct RefreshRecord {
    long iter = 0;
    int k = 0;
    double eps_k = std::numeric_limits<double>::infinity();
    double delta_k = std::numeric_limits<double>::infinity();
    Point point;
    double sigma = 0.0;
};

struct RunResult {
    Point final_point;
    double final_value = std::numeric_limits<double>::quiet_NaN();
    double final_gamma = std::numeric_limits<double>::quiet_NaN();
    double feasibility_residual = std::numeric_limits<double>::quiet_NaN();
    long iterations = 0;
    int refresh_count = 0;
    RunStatus status = RunStatus::Aborted;
    std::string abort_reason;
    std::optional<double> certified_eps;  // set by Method 2.4's certificate
    std::vector<IterRecord> trace;
    std::vector<Point> trace_points;  // filled when cfg.trace_points
    std::vector<RefreshRecord> refreshes;
};

// Hooks for invariant checking during acceptance runs; default is no-op.
// Callbacks fire on every LP iterate, store mutation, boundary hit and
// refresh event.
struct InvariantObserver {
    virtual ~InvariantObserver() = default;
    virtual void on_iterate(long /*iter*/, const std::vector<double>& /*coords*/,
                            double /*f_y*/, double /*F_y*/, double /*gamma*/) {}
    virtual void on_cut_added(const CutStore& /*store*/, const Cut& /*cut*/) {}
    virtual void on_store_drop(const CutStore& /*store*/) {}
    virtual void on_boundary_hit(double /*membership_z*/, double /*q*/, double /*tol*/) {}
    virtual void on_refresh(long /*iter*/, double /*eps_k*/, double /*delta_k*/,
                            const std::vector<double>& /*point*/, double /*sigma*/) {}
    virtual void on_level_values(long /*iter*/, double /*gamma*/, double /*beta*/) {}
};

}  // namespace cutplane
