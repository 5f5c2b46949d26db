#include "cutplane/feasible.hpp"

#include <cmath>

#include "cutplane/boundary.hpp"
#include "methods_common.hpp"

namespace cutplane {

namespace {

using detail::LpDriver;
using detail::Stopwatch;

struct Loop {
    const ProblemInstance* pr;
    RunResult rr;
    Stopwatch sw;
    double wall_limit_ms = 0.0;
    bool record_trace = true;
    bool trace_points = false;
    InvariantObserver* obs = nullptr;

    bool out_of_time() const { return wall_limit_ms > 0.0 && sw.ms() > wall_limit_ms; }

    void record(long i, double f_y, double F_y, double gamma, int creg, int cepi, bool refresh,
                const Point* pt) {
        if (!record_trace) return;
        rr.trace.push_back({i, f_y, F_y, gamma, creg, cepi, refresh});
        if (trace_points && pt) rr.trace_points.push_back(*pt);
    }

    void finish(RunStatus st, const Point& final_pt, double final_value, double F,
                double gamma) {
        rr.status = st;
        rr.final_point = final_pt;
        rr.final_value = final_value;
        rr.final_gamma = gamma;
        rr.feasibility_residual = std::max(F, 0.0);
    }
};

// Boundary hits toward the shared interior anchor for every violated
// constraint; returns the deepest index j_i (largest ||y - z_j||, lowest
// index on ties).
struct RegionHits {
    std::vector<int> indices;          // J_i
    std::vector<BoundaryHit> hits;     // aligned with indices
    int deepest_pos = -1;
};

RegionHits region_hits(const ProblemInstance& pr, const Point& v, const Point& y,
                       const std::vector<int>& violated, InvariantObserver* obs) {
    RegionHits out;
    out.indices = violated;
    double best = -1.0;
    for (std::size_t p = 0; p < violated.size(); ++p) {
        const FunctionOracle& fj = pr.constraints[violated[p]];
        auto membership = [&fj](std::span<const double> x) {
            return fj.value(Point(x.begin(), x.end()));
        };
        BoundaryHit hit = segment_boundary_point(membership, v, y);
        if (obs) obs->on_boundary_hit(hit.membership_at_z, hit.q, hit.tol);
        const double depth = linalg::dist(y, hit.z);
        if (depth > best + 1e-15) {
            best = depth;
            out.deepest_pos = static_cast<int>(p);
        }
        out.hits.push_back(std::move(hit));
    }
    return out;
}

RunResult run_m11(const ProblemInstance& pr, const FeasibleConfig& cfg) {
    if (!pr.objective_linear)
        throw ContractViolation("run_feasible: objective must be linear (use the joint family)");
    if (!pr.interior)
        throw ContractViolation("run_feasible: interior anchor v required");
    const Point& c = *pr.objective_linear;
    const Point& v = *pr.interior;

    CutStore store = CutStore::make_region(pr.box_lo, pr.box_hi);
    LpDriver driver(pr, &store, nullptr);
    Schedule sched = cfg.schedule;
    double eps_k = sched.current();
    int k = 0;

    Loop L{&pr};
    L.wall_limit_ms = cfg.wall_limit_ms;
    L.record_trace = cfg.record_trace;
    L.trace_points = cfg.trace_points;
    L.obs = cfg.observer;

    Point y;
    double f_y = 0.0, F = 0.0;
    for (long i = 0; i < cfg.max_iters; ++i) {
        const LpOutcome out = driver.minimize(c);
        y = out.point;
        f_y = out.value;
        F = detail::region_residual(pr, y);
        if (L.obs) L.obs->on_iterate(i, y, f_y, F, f_y);
        L.rr.iterations = i + 1;

        if (F <= cfg.stop_eps) {
            L.record(i, f_y, F, f_y, static_cast<int>(store.size()), 0, false, &y);
            L.finish(RunStatus::Converged, y, f_y, F, f_y);
            return L.rr;
        }
        bool refreshed = false;
        if (F <= eps_k) {
            refreshed = true;
            L.rr.refreshes.push_back({i, k, eps_k, std::numeric_limits<double>::infinity(), y, f_y});
            ++L.rr.refresh_count;
            if (L.obs) L.obs->on_refresh(i, eps_k, std::numeric_limits<double>::infinity(), y, f_y);
            store = apply_drop(std::move(store), cfg.drop, y, pr.dim);
            if (L.obs) L.obs->on_store_drop(store);
            eps_k = sched.next_value(F);
            ++k;
        }
        const auto J = violated_indices(pr, y, 0.0);
        const RegionHits rh = region_hits(pr, v, y, J, L.obs);
        for (std::size_t p = 0; p < rh.indices.size(); ++p) {
            if (cfg.deepest_only && static_cast<int>(p) != rh.deepest_pos) continue;
            const Point a = region_support_vector(pr.constraints[rh.indices[p]],
                                                  Point(rh.hits[p].z.begin(), rh.hits[p].z.end()));
            const Cut cut = detail::make_region_support_cut(a, rh.hits[p].z, static_cast<int>(i));
            if (store.add(cut) && L.obs) L.obs->on_cut_added(store, store.cuts().back());
        }
        L.record(i, f_y, F, f_y, static_cast<int>(store.size()), 0, refreshed, &y);
        if (L.out_of_time()) break;
    }
    L.finish(RunStatus::IterLimit, y, f_y, F, f_y);
    return L.rr;
}

RunResult run_m12(const ProblemInstance& pr, const FeasibleConfig& cfg) {
    if (!pr.objective_linear)
        throw ContractViolation("run_feasible: objective must be linear (use the joint family)");
    const Point& c = *pr.objective_linear;
    const FunctionOracle Fagg = detail::aggregate_constraint_oracle(pr);

    CutStore store = CutStore::make_region(pr.box_lo, pr.box_hi);
    LpDriver driver(pr, &store, nullptr);
    Schedule sched = cfg.schedule;
    double eps_k = sched.current();
    int k = 0;

    Loop L{&pr};
    L.wall_limit_ms = cfg.wall_limit_ms;
    L.record_trace = cfg.record_trace;
    L.trace_points = cfg.trace_points;
    L.obs = cfg.observer;

    Point y;
    double f_y = 0.0, F = 0.0;
    for (long i = 0; i < cfg.max_iters; ++i) {
        const LpOutcome out = driver.minimize(c);
        y = out.point;
        f_y = out.value;
        F = detail::region_residual(pr, y);
        if (L.obs) L.obs->on_iterate(i, y, f_y, F, f_y);
        L.rr.iterations = i + 1;

        if (F <= cfg.stop_eps) {
            L.record(i, f_y, F, f_y, static_cast<int>(store.size()), 0, false, &y);
            L.finish(RunStatus::Converged, y, f_y, F, f_y);
            return L.rr;
        }
        Point u = y;
        bool refreshed = false;
        if (F <= eps_k) {
            refreshed = true;
            Point z = y;
            if (cfg.improver_hook) {
                z = cfg.improver_hook(y);
                if (pr.objective.value(z) < pr.objective.value(y) - 1e-9)
                    throw ContractViolation("improver hook broke f(x_k) <= f(z_k)");
            }
            const double Fz = detail::region_residual(pr, z);
            L.rr.refreshes.push_back({i, k, eps_k, std::numeric_limits<double>::infinity(), y, f_y});
            ++L.rr.refresh_count;
            if (L.obs) L.obs->on_refresh(i, eps_k, std::numeric_limits<double>::infinity(), y, f_y);
            if (Fz <= cfg.stop_eps) {
                L.record(i, pr.objective.value(z), Fz, f_y, static_cast<int>(store.size()), 0, true,
                         &z);
                L.finish(RunStatus::Converged, z, pr.objective.value(z), Fz, f_y);
                return L.rr;
            }
            u = std::move(z);
            store = apply_drop(std::move(store), cfg.drop, y, pr.dim);
            if (L.obs) L.obs->on_store_drop(store);
            eps_k = sched.next_value(F);
            ++k;
        }
        if (cfg.cut_mode == CutMode::aggregate_F) {
            const double Fu = Fagg.value(u);
            const Cut cut = detail::make_region_subgrad_cut(Fagg.subgradient(u), u, Fu,
                                                            static_cast<int>(i));
            if (store.add(cut) && L.obs) L.obs->on_cut_added(store, store.cuts().back());
        } else {
            const auto J = violated_indices(pr, y, 0.0);
            for (int j : J) {
                const Cut cut = detail::make_region_subgrad_cut(
                    pr.constraints[j].subgradient(u), u, pr.constraints[j].value(u),
                    static_cast<int>(i));
                if (store.add(cut) && L.obs) L.obs->on_cut_added(store, store.cuts().back());
            }
        }
        L.record(i, f_y, F, f_y, static_cast<int>(store.size()), 0, refreshed, &y);
        if (L.out_of_time()) break;
    }
    L.finish(RunStatus::IterLimit, y, f_y, F, f_y);
    return L.rr;
}

RunResult run_m14(const ProblemInstance& pr, const FeasibleConfig& cfg) {
    if (!pr.objective_linear)
        throw ContractViolation("run_feasible: objective must be linear (use the joint family)");
    if (!pr.interior)
        throw ContractViolation("run_feasible: interior anchor v required");
    const Point& c = *pr.objective_linear;
    const Point& v = *pr.interior;

    CutStore store = CutStore::make_region(pr.box_lo, pr.box_hi);
    LpDriver driver(pr, &store, nullptr);
    Schedule sched = cfg.schedule;
    double eps_k = sched.current();
    int k = 0;

    Loop L{&pr};
    L.wall_limit_ms = cfg.wall_limit_ms;
    L.record_trace = cfg.record_trace;
    L.trace_points = cfg.trace_points;
    L.obs = cfg.observer;

    LpOutcome out = driver.minimize(c);
    Point x = out.point;
    double f_x = out.value, F = 0.0;
    for (long i = 0; i < cfg.max_iters; ++i) {
        F = detail::region_residual(pr, x);
        if (L.obs) L.obs->on_iterate(i, x, f_x, F, f_x);
        L.rr.iterations = i + 1;

        if (F <= cfg.stop_eps) {
            L.record(i, f_x, F, f_x, static_cast<int>(store.size()), 0, false, &x);
            L.finish(RunStatus::Converged, x, f_x, F, f_x);
            return L.rr;
        }
        bool refreshed = false;
        if (F <= eps_k) {
            refreshed = true;
            L.rr.refreshes.push_back({i, k, eps_k, std::numeric_limits<double>::infinity(), x, f_x});
            ++L.rr.refresh_count;
            if (L.obs) L.obs->on_refresh(i, eps_k, std::numeric_limits<double>::infinity(), x, f_x);
            store = apply_drop(std::move(store), cfg.drop, x, pr.dim);
            if (L.obs) L.obs->on_store_drop(store);
            eps_k = sched.next_value(F);
            ++k;
        }
        const auto J = violated_indices(pr, x, 0.0);
        const RegionHits rh = region_hits(pr, v, x, J, L.obs);

        // candidate generation: one relaxed LP per violated constraint
        // (a parallelizable map; kept sequential for bit determinism)
        std::vector<Cut> cand_cuts(rh.indices.size());
        std::vector<Point> cand_pts(rh.indices.size());
        std::vector<double> cand_vals(rh.indices.size());
        for (std::size_t p = 0; p < rh.indices.size(); ++p) {
            const Point a = region_support_vector(pr.constraints[rh.indices[p]],
                                                  Point(rh.hits[p].z.begin(), rh.hits[p].z.end()));
            cand_cuts[p] = detail::make_region_support_cut(a, rh.hits[p].z, static_cast<int>(i));
            lp::Row row;
            row.a = cand_cuts[p].normal;
            row.rhs = cand_cuts[p].rhs;
            const LpOutcome cand = driver.minimize_with_extra(c, std::span(&row, 1));
            cand_pts[p] = cand.point;
            cand_vals[p] = cand.value;
        }
        // keep candidates that satisfy the deepest cut, pick the record one
        const Cut& deep = cand_cuts[rh.deepest_pos];
        int l_pos = -1;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < rh.indices.size(); ++p) {
            const double val = linalg::dot(deep.normal, cand_pts[p]) - deep.rhs;
            if (val > 1e-9 * (1.0 + std::fabs(deep.rhs))) continue;
            if (cand_vals[p] > best + 1e-15) {
                best = cand_vals[p];
                l_pos = static_cast<int>(p);
            }
        }
        if (l_pos < 0) l_pos = rh.deepest_pos;  // j_k itself always qualifies
        if (store.add(deep) && L.obs) L.obs->on_cut_added(store, store.cuts().back());
        if (l_pos != rh.deepest_pos) {
            if (store.add(cand_cuts[l_pos]) && L.obs) L.obs->on_cut_added(store, store.cuts().back());
        }
        x = cand_pts[l_pos];
        f_x = cand_vals[l_pos];
        L.record(i, f_x, detail::region_residual(pr, x), f_x, static_cast<int>(store.size()), 0,
                 refreshed, &x);
        if (L.out_of_time()) break;
    }
    F = detail::region_residual(pr, x);
    L.finish(RunStatus::IterLimit, x, f_x, F, f_x);
    return L.rr;
}

}  // namespace

RunResult run_feasible(const ProblemInstance& problem, const FeasibleConfig& cfg) {
    try {
        switch (cfg.variant) {
            case FeasibleVariant::M1_1: return run_m11(problem, cfg);
            case FeasibleVariant::M1_2: return run_m12(problem, cfg);
            case FeasibleVariant::M1_4: return run_m14(problem, cfg);
        }
        throw ContractViolation("run_feasible: unknown variant");
    } catch (const SolverError& e) {
        RunResult rr;
        rr.status = RunStatus::Aborted;
        rr.abort_reason = e.what();
        if (const auto* inf = dynamic_cast<const InfeasibleError*>(&e))
            rr.abort_reason += "\n" + inf->diagnostics;
        return rr;
    }
}

RunResult run_projection(const ProblemInstance& problem, const Point& y, Schedule schedule,
                         double stop_eps, const ProjectionOptions& opts) {
    try {
        if (!problem.interior)
            throw ContractViolation("run_projection: interior anchor v required");
        const Point& v = *problem.interior;

        CutStore store = CutStore::make_region(problem.box_lo, problem.box_hi);
        std::vector<lp::Row> simple;
        for (const auto& li : problem.simple_linear) simple.push_back({li.a, li.rhs});

        double eps_k = schedule.current();
        int k = 0;

        Loop L{&problem};
        L.wall_limit_ms = opts.wall_limit_ms;
        L.record_trace = opts.record_trace;
        L.trace_points = opts.trace_points;
        L.obs = opts.observer;

        Point yi = qp_project(store, y, simple);
        double F = 0.0;
        for (long i = 0; i < opts.max_iters; ++i) {
            const double dist_y = linalg::dist(yi, y);
            F = detail::region_residual(problem, yi);
            if (L.obs) L.obs->on_iterate(i, yi, dist_y, F, dist_y);
            L.rr.iterations = i + 1;

            const auto J = violated_indices(problem, yi, 0.0);
            if (J.empty() || F <= stop_eps) {
                L.record(i, dist_y, F, dist_y, static_cast<int>(store.size()), 0, false, &yi);
                L.finish(RunStatus::Converged, yi, dist_y, F, dist_y);
                return L.rr;
            }
            bool refreshed = false;
            if (F <= eps_k) {
                refreshed = true;
                L.rr.refreshes.push_back(
                    {i, k, eps_k, std::numeric_limits<double>::infinity(), yi, dist_y});
                ++L.rr.refresh_count;
                if (L.obs)
                    L.obs->on_refresh(i, eps_k, std::numeric_limits<double>::infinity(), yi, dist_y);
                store.clear_cuts();  // Q_i = R_n: the next plane stands alone
                if (L.obs) L.obs->on_store_drop(store);
                eps_k = schedule.next_value(F);
                ++k;
            }
            const RegionHits rh = region_hits(problem, v, yi, J, L.obs);
            const auto& hit = rh.hits[rh.deepest_pos];
            const Point a = region_support_vector(problem.constraints[rh.indices[rh.deepest_pos]],
                                                  Point(hit.z.begin(), hit.z.end()));
            const Cut cut = detail::make_region_support_cut(a, hit.z, static_cast<int>(i));
            if (store.add(cut) && L.obs) L.obs->on_cut_added(store, store.cuts().back());
            L.record(i, dist_y, F, dist_y, static_cast<int>(store.size()), 0, refreshed, &yi);

            yi = qp_project(store, y, simple);
            if (L.out_of_time()) break;
        }
        const double dist_y = linalg::dist(yi, y);
        F = detail::region_residual(problem, yi);
        L.finish(RunStatus::IterLimit, yi, dist_y, F, dist_y);
        return L.rr;
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
