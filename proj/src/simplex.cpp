#include "cutplane/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cutplane/errors.hpp"
#include "cutplane/linalg.hpp"

namespace cutplane::lp {

namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kDirTol = 1e-11;
constexpr double kMultTol = 1e-9;

// Uniform view of the constraint system: ids [0,nv) lower bounds,
// [nv,2nv) upper bounds, [2nv,2nv+m) rows, all as <a,v> <= b.
struct ConTable {
    const Problem* p;
    int nv, m;
    explicit ConTable(const Problem& pp)
        : p(&pp), nv(pp.nvar()), m(static_cast<int>(pp.rows.size())) {}
    int count() const { return 2 * nv + m; }
    bool is_lo(int id) const { return id < nv; }
    bool is_hi(int id) const { return id >= nv && id < 2 * nv; }
    double rhs(int id) const {
        if (is_lo(id)) return -p->lo[id];
        if (is_hi(id)) return p->hi[id - nv];
        return p->rows[id - 2 * nv].rhs;
    }
    double dot(int id, std::span<const double> v) const {
        if (is_lo(id)) return -v[id];
        if (is_hi(id)) return v[id - nv];
        return linalg::dot(p->rows[id - 2 * nv].a, v);
    }
    void fill_row(int id, double* out) const {
        std::fill(out, out + nv, 0.0);
        if (is_lo(id)) {
            out[id] = -1.0;
        } else if (is_hi(id)) {
            out[id - nv] = 1.0;
        } else {
            const auto& a = p->rows[id - 2 * nv].a;
            std::copy(a.begin(), a.end(), out);
        }
    }
    double feas_tol(int id) const { return kFeasTol * (1.0 + std::fabs(rhs(id))); }
    double violation(int id, std::span<const double> x) const { return dot(id, x) - rhs(id); }
};

struct Basis {
    std::vector<int> active;  // nv ids, position-aligned with the matrix rows
    std::vector<double> x;
    linalg::Lu lu;

    bool factor(const ConTable& t) {
        const int nv = t.nv;
        std::vector<double> a(static_cast<std::size_t>(nv) * nv);
        for (int i = 0; i < nv; ++i) t.fill_row(active[i], a.data() + static_cast<std::size_t>(i) * nv);
        return lu.factor(std::move(a), nv);
    }

    // Solve A_B x = b_B (polish onto the basis).
    void solve_point(const ConTable& t) {
        std::vector<double> b(t.nv);
        for (int i = 0; i < t.nv; ++i) b[i] = t.rhs(active[i]);
        lu.solve(b, x);
    }
};

// One simplex run: Bland's rule, minimize cost from the vertex in B.
// Returns Optimal or Unbounded; B holds the final vertex.
Status simplex_iterate(const ConTable& t, std::span<const double> cost, Basis& B,
                       std::vector<double>* mult_out = nullptr) {
    const int nv = t.nv;
    const long pivot_cap = 200L * (t.count() + 1) + 10000;
    if (!B.factor(t)) throw SolverError("simplex: singular starting basis");
    std::vector<char> in_basis(t.count(), 0);
    for (int id : B.active) in_basis[id] = 1;
    std::vector<double> lambda, d;
    for (long pivots = 0;; ++pivots) {
        if (pivots > pivot_cap) throw SolverError("simplex: pivot limit exceeded");
        B.lu.solve_transposed(cost, lambda);
        double lmax = 0.0;
        for (int i = 0; i < nv; ++i) lmax = std::max(lmax, std::fabs(lambda[i]));
        const double tol = kMultTol * (1.0 + lmax);
        int leave_pos = -1, leave_id = std::numeric_limits<int>::max();
        for (int i = 0; i < nv; ++i) {
            if (lambda[i] > tol && B.active[i] < leave_id) {
                leave_id = B.active[i];
                leave_pos = i;
            }
        }
        if (leave_pos < 0) {
            if (mult_out) *mult_out = lambda;
            return Status::Optimal;
        }
        std::vector<double> e(nv, 0.0);
        e[leave_pos] = -1.0;
        B.lu.solve(e, d);

        double best_t = std::numeric_limits<double>::infinity();
        int enter = -1;
        for (int id = 0; id < t.count(); ++id) {
            if (in_basis[id]) continue;
            const double s = t.dot(id, d);
            if (s <= kDirTol) continue;
            double step = (t.rhs(id) - t.dot(id, B.x)) / s;
            if (step < 0.0) step = 0.0;
            if (step < best_t - 1e-15) {
                best_t = step;
                enter = id;
            }
        }
        if (enter < 0) return Status::Unbounded;
        in_basis[B.active[leave_pos]] = 0;
        in_basis[enter] = 1;
        B.active[leave_pos] = enter;
        if (!B.factor(t)) throw SolverError("simplex: singular basis after pivot");
        B.solve_point(t);
    }
}

// Reconstructs a vertex basis for `p` at point x: picks nv linearly
// independent constraints active at x, smallest ids first.
Basis recover_basis(const ConTable& t, std::vector<double> x) {
    const int nv = t.nv;
    std::vector<int> cands;
    for (int id = 0; id < t.count(); ++id) {
        const double r = std::fabs(t.violation(id, x));
        if (r <= 1e-7 * (1.0 + std::fabs(t.rhs(id)))) cands.push_back(id);
    }
    // incremental Gram-Schmidt rank filter
    std::vector<std::vector<double>> ortho;
    Basis B;
    std::vector<double> row(nv);
    for (int id : cands) {
        if (static_cast<int>(B.active.size()) == nv) break;
        t.fill_row(id, row.data());
        std::vector<double> w = row;
        for (const auto& u : ortho) {
            const double c = linalg::dot(w, u);
            for (int j = 0; j < nv; ++j) w[j] -= c * u[j];
        }
        const double nrm = linalg::norm(w);
        if (nrm > 1e-9 * (1.0 + linalg::norm(row))) {
            for (double& v : w) v /= nrm;
            ortho.push_back(std::move(w));
            B.active.push_back(id);
        }
    }
    if (static_cast<int>(B.active.size()) != nv)
        throw SolverError("simplex: could not recover a vertex basis");
    B.x = std::move(x);
    if (!B.factor(t)) throw SolverError("simplex: recovered basis singular");
    B.solve_point(t);
    return B;
}

bool vertex_valid(const ConTable& t, const Vertex& v) {
    if (static_cast<int>(v.active.size()) != t.nv) return false;
    if (static_cast<int>(v.x.size()) != t.nv) return false;
    for (int id : v.active) {
        if (id < 0 || id >= t.count()) return false;
        if (std::fabs(t.violation(id, v.x)) > 1e-7 * (1.0 + std::fabs(t.rhs(id)))) return false;
    }
    // bound violations cannot be repaired by the row-space phase 1
    for (int j = 0; j < t.nv; ++j)
        if (v.x[j] < t.p->lo[j] - 1e-9 || v.x[j] > t.p->hi[j] + 1e-9) return false;
    return true;
}

std::vector<int> violated_rows(const ConTable& t, std::span<const double> x) {
    std::vector<int> out;
    for (int id = 0; id < t.count(); ++id)
        if (t.violation(id, x) > t.feas_tol(id)) out.push_back(id);
    return out;
}

Basis corner_basis(const ConTable& t, std::span<const bool> corner_hi) {
    Basis B;
    B.x.resize(t.nv);
    for (int j = 0; j < t.nv; ++j) {
        const bool hi = j < static_cast<int>(corner_hi.size()) && corner_hi[j];
        B.x[j] = hi ? t.p->hi[j] : t.p->lo[j];
        B.active.push_back(hi ? t.nv + j : j);
    }
    return B;
}

// Single-artificial-variable phase 1: vars (x, s) with s in [0,1], rows
// <a_r, x> - viol_r * s <= b_r where viol_r is the row's violation at the
// start vertex. Minimizing s to 0 restores feasibility.
bool phase_one(const Problem& p, const ConTable& t, Basis& B) {
    const int nv = t.nv;
    const auto viol_ids = violated_rows(t, B.x);
    if (viol_ids.empty()) return true;

    Problem aug;
    aug.lo = p.lo;
    aug.lo.push_back(0.0);
    aug.hi = p.hi;
    aug.hi.push_back(1.0);
    aug.rows.reserve(p.rows.size());
    for (const auto& r : p.rows) {
        Row ar;
        ar.a = r.a;
        ar.a.push_back(0.0);
        ar.rhs = r.rhs;
        aug.rows.push_back(std::move(ar));
    }
    for (int id : viol_ids) {
        const double v = t.violation(id, B.x);
        if (t.is_lo(id) || t.is_hi(id))
            throw SolverError("simplex: start corner violates a bound");
        aug.rows[id - 2 * nv].a[nv] = -v;
    }
    ConTable ta(aug);

    auto map_id = [&](int id) {
        if (t.is_lo(id)) return id;                   // lo_j -> lo_j
        if (t.is_hi(id)) return (nv + 1) + (id - nv); // hi_j -> hi block shifted
        return 2 * (nv + 1) + (id - 2 * nv);          // row r
    };
    Basis BA;
    BA.x = B.x;
    BA.x.push_back(1.0);
    for (int id : B.active) BA.active.push_back(map_id(id));
    BA.active.push_back(nv + 1 + nv);  // s at its upper bound (hi_s)

    std::vector<double> cost(nv + 1, 0.0);
    cost[nv] = 1.0;
    const Status st = simplex_iterate(ta, cost, BA);
    if (st != Status::Optimal) throw SolverError("simplex: phase 1 unbounded");
    if (BA.x[nv] > 1e-9) return false;  // infeasible

    std::vector<double> x(BA.x.begin(), BA.x.end() - 1);
    B = recover_basis(t, std::move(x));
    return true;
}

Vertex to_vertex(const Basis& B) {
    Vertex v;
    v.x = B.x;
    v.active = B.active;
    return v;
}

}  // namespace

Result minimize(const Problem& p, std::span<const double> cost, const Vertex* warm,
                std::span<const bool> corner_hi) {
    ConTable t(p);
    const int nv = t.nv;

    Basis B;
    if (warm && vertex_valid(t, *warm)) {
        B.active = warm->active;
        B.x = warm->x;
        if (!B.factor(t)) {
            B = corner_basis(t, corner_hi);
        } else {
            B.solve_point(t);
        }
    } else {
        B = corner_basis(t, corner_hi);
    }
    if (!phase_one(p, t, B)) return Result{Status::Infeasible, {}, 0.0, {}};

    std::vector<double> mult;
    Status st = simplex_iterate(t, cost, B, &mult);
    if (st != Status::Optimal) return Result{st, {}, 0.0, {}};

    // Lexicographic refinement when the optimal face may hold several
    // vertices (some basis multiplier is not strictly negative).
    bool unique = true;
    double lmax = 0.0;
    for (double l : mult) lmax = std::max(lmax, std::fabs(l));
    for (double l : mult)
        if (l > -kMultTol * (1.0 + lmax)) { unique = false; break; }

    if (!unique) {
        Problem ext = p;
        Row level;
        level.a.assign(cost.begin(), cost.end());
        level.rhs = linalg::dot(cost, B.x);
        ext.rows.push_back(level);
        for (int j = 0; j < nv; ++j) {
            ConTable te(ext);
            std::vector<double> ej(nv, 0.0);
            ej[j] = 1.0;
            Basis BE;
            BE.active = B.active;
            BE.x = B.x;
            const Status stj = simplex_iterate(te, ej, BE);
            if (stj != Status::Optimal) throw SolverError("simplex: refinement failed");
            B.active = BE.active;
            B.x = BE.x;
            Row fix;
            fix.a = std::move(ej);
            fix.rhs = B.x[j];
            ext.rows.push_back(std::move(fix));
        }
        B = recover_basis(t, B.x);
    }

    Result r;
    r.status = Status::Optimal;
    r.x = B.x;
    r.value = linalg::dot(cost, B.x);
    r.vertex = to_vertex(B);
    return r;
}

std::optional<Vertex> find_feasible_vertex(const Problem& p, const Vertex* warm,
                                           std::span<const bool> corner_hi) {
    ConTable t(p);
    Basis B;
    if (warm && vertex_valid(t, *warm)) {
        B.active = warm->active;
        B.x = warm->x;
        if (!B.factor(t)) {
            B = corner_basis(t, corner_hi);
        } else {
            B.solve_point(t);
        }
    } else {
        B = corner_basis(t, corner_hi);
    }
    if (!phase_one(p, t, B)) return std::nullopt;
    return to_vertex(B);
}

}  // namespace cutplane::lp
