#include "cutplane/epigraph.hpp"

#include <cmath>

#include "cutplane/boundary.hpp"
#include "cutplane/qp.hpp"
#include "methods_common.hpp"

namespace cutplane {

namespace {

using detail::LpDriver;
using detail::Stopwatch;

constexpr double kInf = std::numeric_limits<double>::infinity();

struct EpiLoop {
    RunResult rr;
    Stopwatch sw;
    const EpiConfig* cfg;
    InvariantObserver* obs = nullptr;

    bool out_of_time() const {
        return cfg->wall_limit_ms > 0.0 && sw.ms() > cfg->wall_limit_ms;
    }
    void record(long i, double f_y, double F_y, double gamma, int cepi, bool refresh,
                const Point* pt) {
        if (!cfg->record_trace) return;
        rr.trace.push_back({i, f_y, F_y, gamma, 0, cepi, refresh});
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

// Method 2.1: epigraph cuts from subgradients of the active minimax
// components at y_i.
RunResult run_m21(const ProblemInstance& pr, const EpiConfig& cfg) {
    CutStore store = CutStore::make_epi(pr.box_lo, pr.box_hi, cfg.gamma0_bar,
                                        pr.objective_upper_bound + 1.0);
    LpDriver driver(pr, nullptr, &store);
    const auto cost = gamma_cost(pr.dim);
    Schedule sched = cfg.schedule;
    double eps_k = sched.current();
    int k = 0;

    EpiLoop L{.cfg = &cfg, .obs = cfg.observer};
    Point y;
    double f_y = 0.0, gamma = 0.0;
    for (long i = 0; i < cfg.max_iters; ++i) {
        const LpOutcome out = driver.minimize(cost);
        y.assign(out.point.begin(), out.point.end() - 1);
        gamma = out.point.back();
        f_y = pr.objective.value(y);
        const double F = detail::region_residual(pr, y);
        const double gap = f_y - gamma;
        if (L.obs) L.obs->on_iterate(i, out.point, f_y, F, gamma);
        L.rr.iterations = i + 1;

        if (gap <= cfg.stop_eps) {
            L.record(i, f_y, F, gamma, static_cast<int>(store.size()), false, &y);
            L.finish(RunStatus::Converged, y, f_y, F, gamma);
            return L.rr;
        }
        bool refreshed = false;
        if (gap <= eps_k) {
            refreshed = true;
            L.rr.refreshes.push_back({i, k, eps_k, kInf, y, gamma});
            ++L.rr.refresh_count;
            if (L.obs) L.obs->on_refresh(i, eps_k, kInf, y, gamma);
            store = apply_drop(std::move(store), cfg.drop, out.point, pr.dim);
            if (L.obs) L.obs->on_store_drop(store);
            eps_k = sched.next_value(gap);
            ++k;
        }
        for (int j : objective_active_set(pr, y)) {
            const FunctionOracle& fj =
                pr.objective_components.empty() ? pr.objective : pr.objective_components[j];
            const Cut cut =
                detail::make_epi_subgrad_cut(fj.subgradient(y), y, fj.value(y), static_cast<int>(i));
            if (store.add(cut) && L.obs) L.obs->on_cut_added(store, store.cuts().back());
        }
        store.set_gamma_lower(gamma);
        L.record(i, f_y, F, gamma, static_cast<int>(store.size()), refreshed, &y);
        if (L.out_of_time()) break;
    }
    L.finish(RunStatus::IterLimit, y, f_y, detail::region_residual(pr, y), gamma);
    return L.rr;
}

// Method 2.2: support cuts at boundary hits on segments toward the
// epigraph anchor v''.
RunResult run_m22(const ProblemInstance& pr, const EpiConfig& cfg) {
    if (!pr.epi_interior)
        throw ContractViolation("run_epigraph: M2_2 requires the epigraph anchor v''");
    const std::vector<double> anchor = flatten(*pr.epi_interior);
    CutStore store = CutStore::make_epi(pr.box_lo, pr.box_hi, cfg.gamma0_bar,
                                        pr.objective_upper_bound + 1.0);
    LpDriver driver(pr, nullptr, &store);
    const auto cost = gamma_cost(pr.dim);
    Schedule sched = cfg.schedule;
    double eps_k = sched.current();
    int k = 0;

    auto membership = [&pr](std::span<const double> u) {
        return pr.objective.value(Point(u.begin(), u.end() - 1)) - u.back();
    };

    EpiLoop L{.cfg = &cfg, .obs = cfg.observer};
    Point y;
    double f_y = 0.0, gamma = 0.0;
    for (long i = 0; i < cfg.max_iters; ++i) {
        const LpOutcome out = driver.minimize(cost);
        y.assign(out.point.begin(), out.point.end() - 1);
        gamma = out.point.back();
        f_y = pr.objective.value(y);
        const double F = detail::region_residual(pr, y);
        const double gap = f_y - gamma;
        if (L.obs) L.obs->on_iterate(i, out.point, f_y, F, gamma);
        L.rr.iterations = i + 1;

        if (gap <= cfg.stop_eps) {
            L.record(i, f_y, F, gamma, static_cast<int>(store.size()), false, &y);
            L.finish(RunStatus::Converged, y, f_y, F, gamma);
            return L.rr;
        }
        Point u = y;
        bool refreshed = false;
        if (gap <= eps_k) {
            refreshed = true;
            if (cfg.improver_hook) {
                Point xk = cfg.improver_hook(y);
                if (pr.objective.value(xk) > f_y + 1e-9)
                    throw ContractViolation("improver hook broke f(x_k) <= f(y_i)");
                // the cut anchor must stay outside the epigraph
                if (pr.objective.value(xk) > gamma) u = std::move(xk);
            }
            L.rr.refreshes.push_back({i, k, eps_k, kInf, u, gamma});
            ++L.rr.refresh_count;
            if (L.obs) L.obs->on_refresh(i, eps_k, kInf, u, gamma);
            store = apply_drop(std::move(store), cfg.drop, out.point, pr.dim);
            if (L.obs) L.obs->on_store_drop(store);
            eps_k = sched.next_value(gap);
            ++k;
        }
        std::vector<double> outside = u;
        outside.push_back(gamma);
        const BoundaryHit hit = segment_boundary_point(membership, anchor, outside);
        if (L.obs) L.obs->on_boundary_hit(hit.membership_at_z, hit.q, hit.tol);
        const auto c_unit = epi_support_vector(pr.objective, to_epi(hit.z));
        const Cut cut = detail::make_epi_support_cut(c_unit, hit.z, static_cast<int>(i));
        if (store.add(cut) && L.obs) L.obs->on_cut_added(store, store.cuts().back());
        store.set_gamma_lower(gamma);
        L.record(i, f_y, F, gamma, static_cast<int>(store.size()), refreshed, &y);
        if (L.out_of_time()) break;
    }
    L.finish(RunStatus::IterLimit, y, f_y, detail::region_residual(pr, y), gamma);
    return L.rr;
}

// Method 2.3: modified level method. x_i is the Euclidean projection of
// the previous iterate onto the level polyhedron U_i.
RunResult run_m23(const ProblemInstance& pr, const EpiConfig& cfg) {
    if (!(cfg.level_lambda > 0.0 && cfg.level_lambda < 1.0))
        throw ContractViolation("run_epigraph: level_lambda must lie in (0,1)");
    CutStore store = CutStore::make_epi(pr.box_lo, pr.box_hi, cfg.gamma0_bar,
                                        pr.objective_upper_bound + 1.0);
    LpDriver driver(pr, nullptr, &store);
    const auto cost = gamma_cost(pr.dim);
    Schedule sched = cfg.schedule;
    double eps_k = sched.current();
    int k = 0;

    EpiLoop L{.cfg = &cfg, .obs = cfg.observer};
    double beta = kInf;     // beta_{i-1}
    double delta_i = kInf;  // delta_i = f(x_{i-1}), +inf at i = 0
    Point x_prev;           // projection seed; y_0 at i = 0
    Point y;
    double f_y = 0.0, gamma = 0.0;
    for (long i = 0; i < cfg.max_iters; ++i) {
        const LpOutcome out = driver.minimize(cost);
        y.assign(out.point.begin(), out.point.end() - 1);
        gamma = out.point.back();
        f_y = pr.objective.value(y);
        const double F = detail::region_residual(pr, y);
        const double gap_y = f_y - gamma;
        if (L.obs) L.obs->on_iterate(i, out.point, f_y, F, gamma);
        L.rr.iterations = i + 1;

        if (gap_y <= cfg.stop_eps) {
            L.record(i, f_y, F, gamma, static_cast<int>(store.size()), false, &y);
            L.finish(RunStatus::Converged, y, f_y, F, gamma);
            return L.rr;
        }
        beta = std::min(beta, delta_i);
        const double level =
            beta == kInf ? kInf : (1.0 - cfg.level_lambda) * gamma + cfg.level_lambda * beta;
        if (L.obs) L.obs->on_level_values(i, gamma, beta);

        Point xi;
        if (level == kInf) {
            xi = y;
        } else {
            // U_i: x in D with some gamma_x <= l_i admissible in M_i
            lp::Problem up;
            up.lo.assign(store.lo().begin(), store.lo().end() - 1);
            up.hi.assign(store.hi().begin(), store.hi().end() - 1);
            for (const auto& li : pr.simple_linear) up.rows.push_back({li.a, li.rhs});
            for (const Cut& c : store.cuts())
                up.rows.push_back({c.normal, c.rhs - c.gamma_coeff * level});
            try {
                xi = qp::project(up, x_prev.empty() ? y : x_prev);
            } catch (const InfeasibleError&) {
                throw ContractViolation("run_epigraph: empty level set U_i");
            }
        }
        const double f_xi = pr.objective.value(xi);

        bool refreshed = false;
        if (f_xi - gamma <= eps_k) {
            refreshed = true;
            L.rr.refreshes.push_back({i, k, eps_k, kInf, xi, gamma});
            ++L.rr.refresh_count;
            if (L.obs) L.obs->on_refresh(i, eps_k, kInf, xi, gamma);
            std::vector<double> at = xi;
            at.push_back(level == kInf ? gamma : level);
            store = apply_drop(std::move(store), cfg.drop, at, pr.dim);
            if (L.obs) L.obs->on_store_drop(store);
            eps_k = sched.next_value(f_xi - gamma);
            ++k;
        }
        const Cut cut = detail::make_epi_subgrad_cut(pr.objective.subgradient(xi), xi, f_xi,
                                                     static_cast<int>(i));
        if (store.add(cut) && L.obs) L.obs->on_cut_added(store, store.cuts().back());
        store.set_gamma_lower(gamma);  // alpha_{i+1} = gamma_i
        delta_i = f_xi;                // delta_{i+1} = f(x_i)
        x_prev = std::move(xi);
        L.record(i, f_y, F, gamma, static_cast<int>(store.size()), refreshed, &y);
        if (L.out_of_time()) break;
    }
    L.finish(RunStatus::IterLimit, y, f_y, detail::region_residual(pr, y), gamma);
    return L.rr;
}

// Method 2.4: works on g = f + eps; the refresh criterion is the distance
// from the iterate to its boundary hit, and gamma_i >= f(y_i) certifies an
// eps-solution.
RunResult run_m24(const ProblemInstance& pr, const EpiConfig& cfg) {
    if (!(cfg.eps_solution > 0.0))
        throw ContractViolation("run_epigraph: eps_solution must be positive");
    if (!pr.epi_interior)
        throw ContractViolation("run_epigraph: M2_4 requires the epigraph anchor v''");
    const double eps_sol = cfg.eps_solution;
    FunctionOracle g;
    g.value = [&pr, eps_sol](const Point& x) { return pr.objective.value(x) + eps_sol; };
    g.subgradient = pr.objective.subgradient;

    std::vector<double> anchor = flatten(*pr.epi_interior);
    anchor.back() += eps_sol;  // interior of epi(f) lifted into epi(g)

    CutStore store = CutStore::make_epi(pr.box_lo, pr.box_hi, cfg.gamma0_bar,
                                        pr.objective_upper_bound + eps_sol + 1.0);
    LpDriver driver(pr, nullptr, &store);
    const auto cost = gamma_cost(pr.dim);
    Schedule sched = cfg.schedule;  // delta_k
    double delta_k = sched.current();
    int k = 0;

    auto membership = [&g](std::span<const double> u) {
        return g.value(Point(u.begin(), u.end() - 1)) - u.back();
    };

    EpiLoop L{.cfg = &cfg, .obs = cfg.observer};
    Point y;
    double f_y = 0.0, gamma = 0.0;
    for (long i = 0; i < cfg.max_iters; ++i) {
        const LpOutcome out = driver.minimize(cost);
        y.assign(out.point.begin(), out.point.end() - 1);
        gamma = out.point.back();
        f_y = pr.objective.value(y);
        const double F = detail::region_residual(pr, y);
        if (L.obs) L.obs->on_iterate(i, out.point, f_y, F, gamma);
        L.rr.iterations = i + 1;

        if (gamma >= f_y) {  // eps-certificate
            L.record(i, f_y, F, gamma, static_cast<int>(store.size()), false, &y);
            L.finish(RunStatus::Converged, y, f_y, F, gamma);
            L.rr.certified_eps = eps_sol;
            return L.rr;
        }
        const BoundaryHit hit = segment_boundary_point(membership, anchor, out.point);
        if (L.obs) L.obs->on_boundary_hit(hit.membership_at_z, hit.q, hit.tol);
        const double dist = linalg::dist(hit.z, out.point);

        bool refreshed = false;
        if (dist <= delta_k) {
            refreshed = true;
            Point xk = y;
            if (cfg.improver_hook) {
                xk = cfg.improver_hook(y);
                if (pr.objective.value(xk) > f_y + 1e-9)
                    throw ContractViolation("improver hook broke g(x_k) <= g(y_i)");
            }
            L.rr.refreshes.push_back({i, k, kInf, delta_k, xk, gamma});
            ++L.rr.refresh_count;
            if (L.obs) L.obs->on_refresh(i, kInf, delta_k, xk, gamma);
            store = apply_drop(std::move(store), cfg.drop, out.point, pr.dim);
            if (L.obs) L.obs->on_store_drop(store);
            delta_k = sched.next_value(g.value(xk) - gamma);
            ++k;
        }
        const auto c_unit = epi_support_vector(g, to_epi(hit.z));
        const Cut cut = detail::make_epi_support_cut(c_unit, hit.z, static_cast<int>(i));
        if (store.add(cut) && L.obs) L.obs->on_cut_added(store, store.cuts().back());
        store.set_gamma_lower(gamma);
        L.record(i, f_y, F, gamma, static_cast<int>(store.size()), refreshed, &y);
        if (L.out_of_time()) break;
    }
    L.finish(RunStatus::IterLimit, y, f_y, detail::region_residual(pr, y), gamma);
    return L.rr;
}

}  // namespace

RunResult run_epigraph(const ProblemInstance& problem, const EpiConfig& cfg) {
    try {
        switch (cfg.variant) {
            case EpiVariant::M2_1: return run_m21(problem, cfg);
            case EpiVariant::M2_2: return run_m22(problem, cfg);
            case EpiVariant::M2_3: return run_m23(problem, cfg);
            case EpiVariant::M2_4: return run_m24(problem, cfg);
        }
        throw ContractViolation("run_epigraph: unknown variant");
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
