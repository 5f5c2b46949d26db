#include "cutplane/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "cutplane/epigraph.hpp"
#include "cutplane/errors.hpp"
#include "cutplane/feasible.hpp"
#include "cutplane/joint.hpp"
#include "cutplane/linalg.hpp"
#include "methods_common.hpp"

namespace cutplane::bench {

namespace {

double tri(int n) { return 0.5 * n * (n + 1.0); }

}  // namespace

std::optional<BenchId> parse_bench_id(const std::string& token) {
    if (token == "p15") return BenchId::p15;
    if (token == "p25") return BenchId::p25;
    if (token == "p34") return BenchId::p34;
    return std::nullopt;
}

std::string bench_id_name(BenchId id) {
    switch (id) {
        case BenchId::p15: return "p15";
        case BenchId::p25: return "p25";
        case BenchId::p34: return "p34";
    }
    return "?";
}

ProblemInstance make_problem(const BenchProblemId& id) {
    if (id.n < 1 || id.n > 64)
        throw ContractViolation("make_problem: n out of the desk-scale range [1, 64]");
    const int n = id.n;
    ProblemInstance pr;
    pr.dim = n;

    switch (id.id) {
        case BenchId::p15: {
            Point c(n, -1.0);
            pr.objective.value = [](const Point& x) {
                double s = 0.0;
                for (double v : x) s -= v;
                return s;
            };
            pr.objective.subgradient = [n](const Point&) { return Point(n, -1.0); };
            pr.objective_linear = c;
            for (int j = 1; j <= n; ++j) {
                FunctionOracle f;
                f.value = [j](const Point& x) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < x.size(); ++i)
                        s += x[i] * x[i] / ((i + 1.0) * j);
                    return s - 1.0;
                };
                f.subgradient = [j](const Point& x) {
                    Point g(x.size());
                    for (std::size_t i = 0; i < x.size(); ++i)
                        g[i] = 2.0 * x[i] / ((i + 1.0) * j);
                    return g;
                };
                f.mu = 1.0 / (n * static_cast<double>(j));
                pr.constraints.push_back(std::move(f));
            }
            const double side = 2.0 * std::sqrt(static_cast<double>(n));
            pr.box_lo.assign(n, -side);
            pr.box_hi.assign(n, side);
            pr.interior = Point(n, 0.0);
            pr.mu = 1.0 / (static_cast<double>(n) * n);
            pr.objective_upper_bound = side * n;
            pr.objective.lipschitz = std::sqrt(static_cast<double>(n));
            break;
        }
        case BenchId::p25: {
            pr.objective.value = [](const Point& x) {
                double s = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    const double w = (i + 1.0) * (i + 1.0);
                    s += w * x[i] * x[i];
                }
                return s;
            };
            pr.objective.subgradient = [](const Point& x) {
                Point g(x.size());
                for (std::size_t i = 0; i < x.size(); ++i)
                    g[i] = 2.0 * (i + 1.0) * (i + 1.0) * x[i];
                return g;
            };
            pr.box_lo.assign(n, -50.0);
            pr.box_hi.assign(n, 50.0);
            EpiPoint anchor;
            anchor.x.assign(n, 0.0);
            anchor.gamma = 100.0;
            pr.epi_interior = anchor;
            pr.mu = 1.0;
            double ub = 0.0;
            for (int i = 1; i <= n; ++i) ub += static_cast<double>(i) * i * 2500.0;
            pr.objective_upper_bound = ub;
            break;
        }
        case BenchId::p34: {
            pr.objective.value = [](const Point& x) {
                double s = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    const double d = x[i] - 10.0;
                    s += (i + 1.0) * d * d;
                }
                return s;
            };
            pr.objective.subgradient = [](const Point& x) {
                Point g(x.size());
                for (std::size_t i = 0; i < x.size(); ++i)
                    g[i] = 2.0 * (i + 1.0) * (x[i] - 10.0);
                return g;
            };
            FunctionOracle f1;
            f1.value = [](const Point& x) {
                double s = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    const double d = x[i] - 5.0;
                    s += (i + 1.0) * d * d;
                }
                return s - 1600.0;
            };
            f1.subgradient = [](const Point& x) {
                Point g(x.size());
                for (std::size_t i = 0; i < x.size(); ++i)
                    g[i] = 2.0 * (i + 1.0) * (x[i] - 5.0);
                return g;
            };
            f1.mu = 1.0;
            pr.constraints.push_back(std::move(f1));
            pr.box_lo.assign(n, -35.0);
            pr.box_hi.assign(n, 45.0);
            pr.interior = Point(n, 5.0);
            EpiPoint anchor;
            anchor.x.assign(n, 5.0);
            anchor.gamma = 25.0 * tri(n) + 100.0;
            pr.epi_interior = anchor;
            pr.mu = 1.0;
            pr.objective_upper_bound = 2025.0 * tri(n);
            break;
        }
    }
    pr.optimum_hint = oracle_optimum(id);
    return pr;
}

Optimum oracle_optimum(const BenchProblemId& id) {
    const int n = id.n;
    const double S = tri(n);
    Optimum opt;
    switch (id.id) {
        case BenchId::p15: {
            // only j = 1 binds: x*_i = i / sqrt(S), f* = -sqrt(S)
            opt.f_star = -std::sqrt(S);
            opt.x_star.resize(n);
            for (int i = 0; i < n; ++i) opt.x_star[i] = (i + 1.0) / std::sqrt(S);
            break;
        }
        case BenchId::p25: {
            opt.f_star = 0.0;
            opt.x_star.assign(n, 0.0);
            break;
        }
        case BenchId::p34: {
            if (25.0 * S <= 1600.0) {
                opt.f_star = 0.0;
                opt.x_star.assign(n, 10.0);
            } else {
                const double xi = 5.0 + 40.0 / std::sqrt(S);
                const double r = 40.0 - 5.0 * std::sqrt(S);
                opt.f_star = r * r;
                opt.x_star.assign(n, xi);
            }
            break;
        }
    }
    return opt;
}

namespace {

// Accelerated projected gradient (box clamp) with adaptive step and
// monotone restart.
Point fista_box(const std::function<double(const Point&)>& value,
                const std::function<Point(const Point&)>& grad, const Point& lo, const Point& hi,
                Point x0, double tol, long max_iters) {
    const auto clamp_box = [&](Point v) {
        for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::clamp(v[j], lo[j], hi[j]);
        return v;
    };
    Point x = clamp_box(std::move(x0));
    Point z = x;
    double t = 1.0;
    double L = 1.0;
    double fx = value(x);
    for (long it = 0; it < max_iters; ++it) {
        const Point gz = grad(z);
        const double fz = value(z);
        Point xn;
        for (;;) {
            xn = z;
            for (std::size_t j = 0; j < xn.size(); ++j) xn[j] -= gz[j] / L;
            xn = clamp_box(std::move(xn));
            double q = fz, d2 = 0.0;
            for (std::size_t j = 0; j < xn.size(); ++j) {
                const double d = xn[j] - z[j];
                q += gz[j] * d;
                d2 += d * d;
            }
            q += 0.5 * L * d2;
            if (value(xn) <= q + 1e-15 * (1.0 + std::fabs(q))) break;
            L *= 2.0;
            if (L > 1e18) break;
        }
        const double fxn = value(xn);
        // monotone restart
        if (fxn > fx) {
            z = x;
            t = 1.0;
            L *= 0.9;
            continue;
        }
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        Point zn = xn;
        for (std::size_t j = 0; j < zn.size(); ++j)
            zn[j] += ((t - 1.0) / tn) * (xn[j] - x[j]);
        // projected-gradient residual at the new point
        const Point gx = grad(xn);
        double res = 0.0;
        for (std::size_t j = 0; j < xn.size(); ++j) {
            const double stepped = std::clamp(xn[j] - gx[j], lo[j], hi[j]);
            res = std::max(res, std::fabs(xn[j] - stepped));
        }
        x = std::move(xn);
        fx = fxn;
        z = clamp_box(std::move(zn));
        t = tn;
        L = std::max(L * 0.5, 1e-8);
        if (res <= tol) break;
    }
    return x;
}

}  // namespace

Optimum projected_descent_optimum(const ProblemInstance& problem, double tol) {
    const int n = problem.dim;
    Point x = problem.interior ? *problem.interior : Point(n, 0.0);
    for (int j = 0; j < n; ++j) x[j] = std::clamp(x[j], problem.box_lo[j], problem.box_hi[j]);

    std::vector<double> lambda(problem.constraints.size(), 0.0);
    double rho = 10.0;
    double prev_viol = std::numeric_limits<double>::infinity();

    for (int outer = 0; outer < 80; ++outer) {
        auto phi = [&](const Point& v) {
            double s = problem.objective.value(v);
            for (std::size_t j = 0; j < problem.constraints.size(); ++j) {
                const double c = problem.constraints[j].value(v) + lambda[j] / rho;
                if (c > 0.0) s += 0.5 * rho * c * c;
            }
            return s;
        };
        auto dphi = [&](const Point& v) {
            Point g = problem.objective.subgradient(v);
            for (std::size_t j = 0; j < problem.constraints.size(); ++j) {
                const double c = problem.constraints[j].value(v) + lambda[j] / rho;
                if (c > 0.0) {
                    const Point gj = problem.constraints[j].subgradient(v);
                    for (int i = 0; i < n; ++i) g[i] += rho * c * gj[i];
                }
            }
            return g;
        };
        x = fista_box(phi, dphi, problem.box_lo, problem.box_hi, x, tol * 1e-2, 50000);

        double viol = 0.0;
        for (std::size_t j = 0; j < problem.constraints.size(); ++j) {
            const double c = problem.constraints[j].value(x);
            lambda[j] = std::max(0.0, lambda[j] + rho * c);
            viol = std::max(viol, c);
        }
        // stationarity of the Lagrangian, projected onto the box
        Point gl = problem.objective.subgradient(x);
        for (std::size_t j = 0; j < problem.constraints.size(); ++j) {
            if (lambda[j] == 0.0) continue;
            const Point gj = problem.constraints[j].subgradient(x);
            for (int i = 0; i < n; ++i) gl[i] += lambda[j] * gj[i];
        }
        double kkt = 0.0;
        for (int i = 0; i < n; ++i) {
            const double stepped = std::clamp(x[i] - gl[i], problem.box_lo[i], problem.box_hi[i]);
            kkt = std::max(kkt, std::fabs(x[i] - stepped));
        }
        if (viol <= tol && kkt <= 10.0 * tol) break;
        if (viol > 0.25 * prev_viol) rho = std::min(rho * 10.0, 1e10);
        prev_viol = std::max(viol, 1e-300);
    }
    return Optimum{problem.objective.value(x), x};
}

void validate_optimum(const BenchProblemId& id, double tol) {
    const ProblemInstance pr = make_problem(id);
    const Optimum closed = oracle_optimum(id);
    const Optimum numeric = projected_descent_optimum(pr, 1e-8);
    if (std::fabs(closed.f_star - numeric.f_star) > tol) {
        std::ostringstream os;
        os << "optimum validation failed for " << bench_id_name(id.id) << " n=" << id.n
           << ": closed=" << closed.f_star << " numeric=" << numeric.f_star;
        throw ContractViolation(os.str());
    }
    for (const auto& f : pr.constraints) {
        if (f.value(closed.x_star) > 1e-8)
            throw ContractViolation("closed-form optimum is infeasible for " +
                                    bench_id_name(id.id));
    }
}

namespace {

bool is_a_code(const std::string& s) {
    return s.size() == 2 && s[0] == 'a' && s[1] >= '1' && s[1] <= '7';
}
bool is_b_code(const std::string& s) {
    return s.size() == 2 && s[0] == 'b' && s[1] >= '1' && s[1] <= '4';
}
bool is_c_code(const std::string& s) {
    return s.size() == 2 && s[0] == 'c' && s[1] >= '1' && s[1] <= '4';
}
bool is_d_code(const std::string& s) {
    return s.size() == 2 && s[0] == 'd' && s[1] >= '1' && s[1] <= '3';
}

DropStrategy parse_b_drop(const std::string& code) {
    switch (code[1]) {
        case '1': return DropStrategy::keep_all;
        case '2': return DropStrategy::active_only;
        case '3': return DropStrategy::last_n_plus_1;
        default: return DropStrategy::full_reset;
    }
}

DropStrategy parse_d_drop(const std::string& code) {
    switch (code[1]) {
        case '1': return DropStrategy::active_only;
        case '2': return DropStrategy::last_n_plus_1;
        default: return DropStrategy::full_reset;
    }
}

}  // namespace

std::optional<std::string> validate_cell(const SuiteCell& cell) {
    const std::string& m = cell.method;
    const bool ch1 = m == "1.1" || m == "1.2" || m == "1.4";
    const bool ch2 = m == "2.1" || m == "2.2" || m == "2.3";
    const bool known = ch1 || ch2 || m == "1.3" || m == "2.4" || m == "3.1" || m == "3.2" ||
                       m == "3.3";
    if (!known) return "unknown method '" + m + "'";
    if (m == "3.1") return std::nullopt;  // nested variant: codes accepted and unused

    if (ch1 || ch2 || m == "1.3" || m == "3.2") {
        if (!is_a_code(cell.eps_code))
            return "method " + m + " needs an a-code eps schedule, got '" + cell.eps_code + "'";
        if (!cell.delta_code.empty())
            return "method " + m + " takes no delta schedule";
    }
    if (m == "2.4") {
        if (!cell.eps_code.empty() && cell.eps_code != "a1")
            return "method 2.4 is driven by the delta schedule; drop --eps";
        if (!cell.delta_code.empty() && !is_c_code(cell.delta_code))
            return "method 2.4 needs a c-code delta schedule";
    }
    if (m == "3.3") {
        if (!is_a_code(cell.eps_code))
            return "method 3.3 needs an a-code eps schedule";
        if (!cell.delta_code.empty() && !is_c_code(cell.delta_code))
            return "method 3.3 needs a c-code delta schedule";
    }
    if (m == "1.3") {
        if (!cell.drop_code.empty() && cell.drop_code != "b1")
            return "method 1.3 has a built-in full reset; drop codes do not apply";
    } else if (!cell.drop_code.empty() && !is_b_code(cell.drop_code)) {
        return "invalid drop code '" + cell.drop_code + "'";
    }
    if (!cell.region_drop_code.empty()) {
        if (!(m == "3.2" || m == "3.3"))
            return "region drop codes apply to the joint methods only";
        if (!is_d_code(cell.region_drop_code))
            return "invalid region drop code '" + cell.region_drop_code + "'";
    }
    return std::nullopt;
}

CellOutcome run_cell_full(const SuiteCell& cell, bool record_trace) {
    CellOutcome out;
    SuiteRow& row = out.row;
    row.method = cell.method;
    row.n = cell.problem.n;
    row.eps_code = cell.eps_code;
    if (!cell.delta_code.empty()) {
        row.eps_code = cell.eps_code.empty() ? cell.delta_code
                                             : cell.eps_code + "+" + cell.delta_code;
    }
    row.drop_code = cell.drop_code.empty() ? "b1" : cell.drop_code;
    if (!cell.region_drop_code.empty())
        row.drop_code = cell.region_drop_code + "+" + row.drop_code;

    const Optimum opt = oracle_optimum(cell.problem);
    row.f_star = opt.f_star;

    if (auto err = validate_cell(cell)) {
        row.status = "Rejected";
        return out;
    }

    const ProblemInstance pr = make_problem(cell.problem);
    const int n = pr.dim;
    detail::Stopwatch sw;
    RunResult rr;
    const std::string& m = cell.method;
    const auto eps_sched = Schedule::parse(cell.eps_code.empty() ? "a1" : cell.eps_code, n);
    const auto delta_sched = Schedule::parse(cell.delta_code.empty() ? "c2" : cell.delta_code, n);

    if (m == "1.1" || m == "1.2" || m == "1.4") {
        FeasibleConfig cfg;
        cfg.variant = m == "1.1"   ? FeasibleVariant::M1_1
                      : m == "1.2" ? FeasibleVariant::M1_2
                                   : FeasibleVariant::M1_4;
        cfg.schedule = *eps_sched;
        cfg.drop = parse_b_drop(cell.drop_code.empty() ? "b1" : cell.drop_code);
        cfg.cut_mode = cell.cut_mode == "per" ? CutMode::per_constraint : CutMode::aggregate_F;
        cfg.max_iters = cell.max_iters;
        cfg.stop_eps = cell.stop_eps;
        cfg.wall_limit_ms = cell.wall_limit_ms;
        cfg.record_trace = record_trace;
        rr = run_feasible(pr, cfg);
    } else if (m == "1.3") {
        ProjectionOptions opts;
        opts.max_iters = cell.max_iters;
        opts.wall_limit_ms = cell.wall_limit_ms;
        opts.record_trace = record_trace;
        const Point y = cell.point.empty() ? pr.box_hi : cell.point;
        rr = run_projection(pr, y, *eps_sched, cell.stop_eps, opts);
    } else if (m == "2.1" || m == "2.2" || m == "2.3" || m == "2.4") {
        EpiConfig cfg;
        cfg.variant = m == "2.1"   ? EpiVariant::M2_1
                      : m == "2.2" ? EpiVariant::M2_2
                      : m == "2.3" ? EpiVariant::M2_3
                                   : EpiVariant::M2_4;
        cfg.schedule = m == "2.4" ? *delta_sched : *eps_sched;
        cfg.drop = parse_b_drop(cell.drop_code.empty() ? "b1" : cell.drop_code);
        cfg.level_lambda = cell.lambda;
        cfg.eps_solution = cell.eps_solution;
        cfg.max_iters = cell.max_iters;
        cfg.stop_eps = cell.stop_eps;
        cfg.wall_limit_ms = cell.wall_limit_ms;
        cfg.record_trace = record_trace;
        rr = run_epigraph(pr, cfg);
    } else {
        JointConfig cfg;
        cfg.variant = m == "3.1" ? JointVariant::M3_1
                      : m == "3.2" ? JointVariant::M3_2
                                   : JointVariant::M3_3;
        cfg.eps_schedule = *eps_sched;
        cfg.delta_schedule = *delta_sched;
        cfg.epi_drop = parse_b_drop(cell.drop_code.empty() ? "b1" : cell.drop_code);
        cfg.region_drop = parse_d_drop(
            cell.region_drop_code.empty() ? "d1" : cell.region_drop_code);
        cfg.max_iters = cell.max_iters;
        cfg.stop_eps = cell.stop_eps;
        cfg.wall_limit_ms = cell.wall_limit_ms;
        cfg.record_trace = record_trace;
        rr = run_joint(pr, cfg);
    }

    row.wall_ms = sw.ms();
    row.iterations = rr.iterations;
    row.final_f = rr.final_value;
    row.final_gap = std::fabs(rr.final_value - opt.f_star);
    switch (rr.status) {
        case RunStatus::Converged: row.status = "Converged"; break;
        case RunStatus::IterLimit: row.status = "IterLimit"; break;
        case RunStatus::Aborted: row.status = "Aborted"; break;
    }
    out.result = std::move(rr);
    return out;
}

SuiteRow run_cell(const SuiteCell& cell) { return run_cell_full(cell, false).row; }

void write_csv(std::ostream& os, const std::vector<SuiteRow>& rows) {
    os << "method,n,eps_code,drop_code,iterations,wall_ms,final_f,final_gap,f_star,status\n";
    os.precision(12);
    for (const auto& r : rows) {
        os << r.method << ',' << r.n << ',' << r.eps_code << ',' << r.drop_code << ','
           << r.iterations << ',' << r.wall_ms << ',' << r.final_f << ',' << r.final_gap << ','
           << r.f_star << ',' << r.status << '\n';
    }
}

std::vector<SuiteRow> run_suite(const std::vector<SuiteCell>& cells, const std::string& out_path,
                                int jobs) {
    std::vector<SuiteRow> rows(cells.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) rows[i] = run_cell(cells[i]);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) return;
                rows[i] = run_cell(cells[i]);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (!out_path.empty()) {
        std::ofstream os(out_path, std::ios::binary);  // LF line endings
        if (!os) throw ContractViolation("run_suite: cannot open " + out_path);
        write_csv(os, rows);
    }
    return rows;
}

std::optional<SuiteCell> parse_cell_tokens(const std::vector<std::string>& tokens,
                                           std::string* error) {
    SuiteCell cell;
    cell.eps_code.clear();
    auto fail = [&](const std::string& msg) {
        if (error) *error = msg;
        return std::nullopt;
    };
    std::string problem_token = "p15";
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& t = tokens[i];
        auto need_value = [&]() -> const std::string* {
            if (i + 1 >= tokens.size()) return nullptr;
            return &tokens[++i];
        };
        const std::string* v = nullptr;
        if (t == "--method") {
            if (!(v = need_value())) return fail("--method needs a value");
            cell.method = *v;
        } else if (t == "--problem") {
            if (!(v = need_value())) return fail("--problem needs a value");
            problem_token = *v;
        } else if (t == "--n") {
            if (!(v = need_value())) return fail("--n needs a value");
            cell.problem.n = std::atoi(v->c_str());
        } else if (t == "--eps") {
            if (!(v = need_value())) return fail("--eps needs a value");
            if (!is_a_code(*v)) return fail("unknown eps code '" + *v + "'");
            cell.eps_code = *v;
        } else if (t == "--delta") {
            if (!(v = need_value())) return fail("--delta needs a value");
            if (!is_c_code(*v)) return fail("unknown delta code '" + *v + "'");
            cell.delta_code = *v;
        } else if (t == "--drop") {
            if (!(v = need_value())) return fail("--drop needs a value");
            if (!is_b_code(*v)) return fail("unknown drop code '" + *v + "'");
            cell.drop_code = *v;
        } else if (t == "--region-drop") {
            if (!(v = need_value())) return fail("--region-drop needs a value");
            if (!is_d_code(*v)) return fail("unknown region drop code '" + *v + "'");
            cell.region_drop_code = *v;
        } else if (t == "--cut-mode") {
            if (!(v = need_value())) return fail("--cut-mode needs a value");
            if (*v != "aggregate" && *v != "per") return fail("cut mode is aggregate|per");
            cell.cut_mode = *v;
        } else if (t == "--lambda") {
            if (!(v = need_value())) return fail("--lambda needs a value");
            cell.lambda = std::atof(v->c_str());
        } else if (t == "--eps-solution") {
            if (!(v = need_value())) return fail("--eps-solution needs a value");
            cell.eps_solution = std::atof(v->c_str());
        } else if (t == "--stop-eps") {
            if (!(v = need_value())) return fail("--stop-eps needs a value");
            cell.stop_eps = std::atof(v->c_str());
        } else if (t == "--max-iters") {
            if (!(v = need_value())) return fail("--max-iters needs a value");
            cell.max_iters = std::atol(v->c_str());
        } else if (t == "--point") {
            if (!(v = need_value())) return fail("--point needs a value");
            cell.point.clear();
            std::stringstream ss(*v);
            std::string part;
            while (std::getline(ss, part, ',')) cell.point.push_back(std::atof(part.c_str()));
        } else {
            return fail("unknown token '" + t + "'");
        }
    }
    if (cell.method.empty()) return fail("--method is required");
    const auto id = parse_bench_id(problem_token);
    if (!id) return fail("unknown problem '" + problem_token + "'");
    cell.problem.id = *id;
    if (cell.eps_code.empty()) cell.eps_code = cell.method == "2.4" ? "" : "a1";
    return cell;
}

}  // namespace cutplane::bench
