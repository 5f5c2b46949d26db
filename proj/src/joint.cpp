#include "cutplane/joint.hpp"

#include <cmath>

#include "cutplane/boundary.hpp"
#include "methods_common.hpp"

namespace cutplane {

namespace {

using detail::LpDriver;
using detail::Stopwatch;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct JointLoop {
    RunResult rr;
    Stopwatch sw;
    const JointConfig* cfg;
    InvariantObserver* obs = nullptr;

    bool out_of_time() const {
        return cfg->wall_limit_ms > 0.0 && sw.ms() > cfg->wall_limit_ms;
    }
    void record(long i, double f_y, double F_y, double gamma, int creg, int cepi, bool refresh,
                const Point* pt) {
        if (!cfg->record_trace) return;
        rr.trace.push_back({i, f_y, F_y, gamma, creg, cepi, refresh});
        if (cfg->trace_points && pt) rr.trace_points.push_back(*pt);
    }
    void finish(RunStatus st, const Point& pt, double f, double F, double gamma) {
        rr.status = st;
        rr.final_point = pt;
        rr.final_value = f;
        rr.final_gamma = gamma;
        rr.feasibility_residual = std::max(F, 0.0);
    }
};

std::vector<double> gamma_cost(int n) {
    std::vector<double> c(n + 1, 0.0);
    c.back() = 1.0;
    return c;
}

// Method 3.1: nested variant; every iteration cuts the epigraph store at a
// boundary hit toward v_epi and, when infeasible, the region store at a
// boundary hit toward v_reg. No refresh events.
RunResult run_m31(const ProblemInstance& pr, const JointConfig& cfg) {
    if (!pr.interior || !pr.epi_interior)
        throw ContractViolation("run_joint: M3_1 requires interior anchors v' and v''");
    const Point& v_reg = *pr.interior;
    const std::vector<double> v_epi = flatten(*pr.epi_interior);
    const FunctionOracle Fagg = detail::aggregate_constraint_oracle(pr);

    CutStore region = CutStore::make_region(pr.box_lo, pr.box_hi);
    CutStore epi = CutStore::make_epi(pr.box_lo, pr.box_hi, cfg.alpha_lower,
                                      pr.objective_upper_bound + 1.0);
    LpDriver driver(pr, &region, &epi);
    const auto cost = gamma_cost(pr.dim);

    auto epi_membership = [&pr](std::span<const double> u) {
        return pr.objective.value(Point(u.begin(), u.end() - 1)) - u.back();
    };
    auto region_membership = [&Fagg](std::span<const double> x) {
        return Fagg.value(Point(x.begin(), x.end()));
    };

    JointLoop L{.cfg = &cfg, .obs = cfg.observer};
    Point y;
    double f_y = 0.0, gamma = 0.0, F = 0.0;
    for (long i = 0; i < cfg.max_iters; ++i) {
        const LpOutcome out = driver.minimize(cost);
        y.assign(out.point.begin(), out.point.end() - 1);
        gamma = out.point.back();
        f_y = pr.objective.value(y);
        F = detail::region_residual(pr, y);
        const double gap = f_y - gamma;
        if (L.obs) L.obs->on_iterate(i, out.point, f_y, F, gamma);
        L.rr.iterations = i + 1;

        if (F <= cfg.stop_eps && gap <= cfg.stop_eps) {
            L.record(i, f_y, F, gamma, static_cast<int>(region.size()),
                     static_cast<int>(epi.size()), false, &y);
            L.finish(RunStatus::Converged, y, f_y, F, gamma);
            return L.rr;
        }
        if (gap > 1e-12) {
            const BoundaryHit hit = segment_boundary_point(epi_membership, v_epi, out.point);
            if (L.obs) L.obs->on_boundary_hit(hit.membership_at_z, hit.q, hit.tol);
            const auto c_unit = epi_support_vector(pr.objective, to_epi(hit.z));
            const Cut cut = detail::make_epi_support_cut(c_unit, hit.z, static_cast<int>(i));
            if (epi.add(cut) && L.obs) L.obs->on_cut_added(epi, epi.cuts().back());
        }
        if (F > 0.0) {
            const BoundaryHit hit = segment_boundary_point(region_membership, v_reg, y);
            if (L.obs) L.obs->on_boundary_hit(hit.membership_at_z, hit.q, hit.tol);
            const Point a =
                region_support_vector(Fagg, Point(hit.z.begin(), hit.z.end()));
            const Cut cut = detail::make_region_support_cut(a, hit.z, static_cast<int>(i));
            if (region.add(cut) && L.obs) L.obs->on_cut_added(region, region.cuts().back());
        }
        L.record(i, f_y, F, gamma, static_cast<int>(region.size()), static_cast<int>(epi.size()),
                 false, &y);
        if (L.out_of_time()) break;
    }
    L.finish(RunStatus::IterLimit, y, f_y, F, gamma);
    return L.rr;
}

// Method 3.2: two-stage. Stage 1 accumulates epigraph cuts until the
// boundary distance test fires; stage 2 fixes x_k, may drop the epi store
// and cuts the region store once at the segment toward v'.
RunResult run_m32(const ProblemInstance& pr, const JointConfig& cfg) {
    if (!pr.interior || !pr.epi_interior)
        throw ContractViolation("run_joint: M3_2 requires interior anchors v' and v''");
    const Point& v_reg = *pr.interior;
    const std::vector<double> v_epi = flatten(*pr.epi_interior);
    const FunctionOracle Fagg = detail::aggregate_constraint_oracle(pr);

    CutStore region = CutStore::make_region(pr.box_lo, pr.box_hi);
    CutStore epi = CutStore::make_epi(pr.box_lo, pr.box_hi, cfg.gamma_bar,
                                      pr.objective_upper_bound + 1.0);
    LpDriver driver(pr, &region, &epi);
    const auto cost = gamma_cost(pr.dim);
    Schedule sched = cfg.eps_schedule;
    double eps_k = sched.current();
    int k = 0;
    const long stage_cap = 10L * pr.dim;
    long stage_len = 0;

    auto epi_membership = [&pr](std::span<const double> u) {
        return pr.objective.value(Point(u.begin(), u.end() - 1)) - u.back();
    };
    auto region_membership = [&Fagg](std::span<const double> x) {
        return Fagg.value(Point(x.begin(), x.end()));
    };

    JointLoop L{.cfg = &cfg, .obs = cfg.observer};
    Point y;
    double f_y = 0.0, gamma = 0.0, F = 0.0;
    for (long i = 0; i < cfg.max_iters; ++i) {
        const LpOutcome out = driver.minimize(cost);
        y.assign(out.point.begin(), out.point.end() - 1);
        gamma = out.point.back();
        f_y = pr.objective.value(y);
        F = detail::region_residual(pr, y);
        const double gap = f_y - gamma;
        if (L.obs) L.obs->on_iterate(i, out.point, f_y, F, gamma);
        L.rr.iterations = i + 1;

        if (F <= cfg.stop_eps && gap <= cfg.stop_eps) {
            L.record(i, f_y, F, gamma, static_cast<int>(region.size()),
                     static_cast<int>(epi.size()), false, &y);
            L.finish(RunStatus::Converged, y, f_y, F, gamma);
            return L.rr;
        }
        BoundaryHit hit;
        double dist = 0.0;
        if (gap > 1e-12) {
            hit = segment_boundary_point(epi_membership, v_epi, out.point);
            if (L.obs) L.obs->on_boundary_hit(hit.membership_at_z, hit.q, hit.tol);
            dist = linalg::dist(hit.z, out.point);
        } else {
            hit = passthrough_hit(out.point);
        }

        bool refreshed = false;
        if (dist > eps_k && stage_len < stage_cap) {
            ++stage_len;  // stage 1 continues
        } else {
            refreshed = true;
            stage_len = 0;
            L.rr.refreshes.push_back({i, k, eps_k, kInf, y, gamma});
            ++L.rr.refresh_count;
            if (L.obs) L.obs->on_refresh(i, eps_k, kInf, y, gamma);
            epi = apply_drop(std::move(epi), cfg.epi_drop, out.point, pr.dim);
            if (L.obs) L.obs->on_store_drop(epi);
            if (F > 0.0) {
                const BoundaryHit rhit = segment_boundary_point(region_membership, v_reg, y);
                if (L.obs) L.obs->on_boundary_hit(rhit.membership_at_z, rhit.q, rhit.tol);
                const Point a = region_support_vector(Fagg, Point(rhit.z.begin(), rhit.z.end()));
                const Cut cut = detail::make_region_support_cut(a, rhit.z, static_cast<int>(i));
                if (region.add(cut) && L.obs) L.obs->on_cut_added(region, region.cuts().back());
            }
            eps_k = sched.next_value(dist);
            ++k;
        }
        const auto c_unit = epi_support_vector(pr.objective, to_epi(hit.z));
        const Cut cut = detail::make_epi_support_cut(c_unit, hit.z, static_cast<int>(i));
        if (epi.add(cut) && L.obs) L.obs->on_cut_added(epi, epi.cuts().back());
        L.record(i, f_y, F, gamma, static_cast<int>(region.size()), static_cast<int>(epi.size()),
                 refreshed, &y);
        if (L.out_of_time()) break;
    }
    L.finish(RunStatus::IterLimit, y, f_y, F, gamma);
    return L.rr;
}

// Method 3.3: subgradient cuts on both stores with the three-way branch on
// region quality eps_k and gap quality delta_k.
RunResult run_m33(const ProblemInstance& pr, const JointConfig& cfg) {
    const FunctionOracle Fagg = detail::aggregate_constraint_oracle(pr);

    CutStore region = CutStore::make_region(pr.box_lo, pr.box_hi);
    CutStore epi = CutStore::make_epi(pr.box_lo, pr.box_hi, cfg.gamma_bar,
                                      pr.objective_upper_bound + 1.0);
    LpDriver driver(pr, &region, &epi);
    const auto cost = gamma_cost(pr.dim);
    Schedule eps_sched = cfg.eps_schedule;
    Schedule delta_sched = cfg.delta_schedule;
    double eps_k = eps_sched.current();
    double delta_k = delta_sched.current();
    int k = 0;

    JointLoop L{.cfg = &cfg, .obs = cfg.observer};
    Point y;
    double f_y = 0.0, gamma = 0.0, F = 0.0;
    for (long i = 0; i < cfg.max_iters; ++i) {
        const LpOutcome out = driver.minimize(cost);
        y.assign(out.point.begin(), out.point.end() - 1);
        gamma = out.point.back();
        f_y = pr.objective.value(y);
        F = detail::region_residual(pr, y);
        const double gap = f_y - gamma;
        if (L.obs) L.obs->on_iterate(i, out.point, f_y, F, gamma);
        L.rr.iterations = i + 1;

        if (F <= cfg.stop_eps && gap <= cfg.stop_eps) {
            L.record(i, f_y, F, gamma, static_cast<int>(region.size()),
                     static_cast<int>(epi.size()), false, &y);
            L.finish(RunStatus::Converged, y, f_y, F, gamma);
            return L.rr;
        }
        bool refreshed = false;
        bool cut_region = false;
        if (F > eps_k) {
            cut_region = true;  // case (a)
        } else if (gap > delta_k) {
            cut_region = F > 0.0;  // case (b): region cut only off D'
        } else {
            // case (c): refresh, drop both stores, advance both schedules
            refreshed = true;
            if (F <= 0.0) L.rr.certified_eps = delta_k;  // y in X*(delta_k)
            L.rr.refreshes.push_back({i, k, eps_k, delta_k, y, gamma});
            ++L.rr.refresh_count;
            if (L.obs) L.obs->on_refresh(i, eps_k, delta_k, y, gamma);
            if (F > 0.0) {
                region = apply_drop(std::move(region), cfg.region_drop, y, pr.dim);
                if (L.obs) L.obs->on_store_drop(region);
                cut_region = true;
            }
            epi = apply_drop(std::move(epi), cfg.epi_drop, out.point, pr.dim);
            if (L.obs) L.obs->on_store_drop(epi);
            eps_k = eps_sched.next_value(std::max(F, 0.0));
            delta_k = delta_sched.next_value(std::max(gap, 0.0));
            ++k;
        }
        if (cut_region) {
            const Cut cut = detail::make_region_subgrad_cut(Fagg.subgradient(y), y, F,
                                                            static_cast<int>(i));
            if (region.add(cut) && L.obs) L.obs->on_cut_added(region, region.cuts().back());
        }
        const Cut ecut = detail::make_epi_subgrad_cut(pr.objective.subgradient(y), y, f_y,
                                                      static_cast<int>(i));
        if (epi.add(ecut) && L.obs) L.obs->on_cut_added(epi, epi.cuts().back());
        L.record(i, f_y, F, gamma, static_cast<int>(region.size()), static_cast<int>(epi.size()),
                 refreshed, &y);
        if (L.out_of_time()) break;
    }
    L.finish(RunStatus::IterLimit, y, f_y, F, gamma);
    return L.rr;
}

}  // namespace

RunResult run_joint(const ProblemInstance& problem, const JointConfig& cfg) {
    try {
        switch (cfg.variant) {
            case JointVariant::M3_1: return run_m31(problem, cfg);
            case JointVariant::M3_2: return run_m32(problem, cfg);
            case JointVariant::M3_3: return run_m33(problem, cfg);
        }
        throw ContractViolation("run_joint: unknown variant");
    } catch (const SolverError& e) {
        RunResult rr;
        rr.status = RunStatus::Aborted;
        rr.abort_reason = e.what();
        if (const auto* inf = dynamic_cast<const InfeasibleError*>(&e))
            rr.abort_reason += "\n" + inf->diagnostics;
        return rr;
    }
}

}  // namespace cutplane
