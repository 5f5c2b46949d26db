#include "cutplane/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cutplane/errors.hpp"
#include "cutplane/linalg.hpp"

namespace cutplane::qp {

namespace {

struct ConTable {
    const lp::Problem* p;
    int nv, m;
    explicit ConTable(const lp::Problem& pp)
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
    bool feasible(std::span<const double> x) const {
        for (int id = 0; id < count(); ++id)
            if (dot(id, x) - rhs(id) > 1e-9 * (1.0 + std::fabs(rhs(id)))) return false;
        return true;
    }
};

// x = y - A_W^T nu with A_W x = b_W; Gram nu = A_W y - b_W.
void eqp_solve(const ConTable& t, const std::vector<int>& W, const std::vector<double>& y,
               std::vector<double>& x_out, std::vector<double>& nu_out) {
    const int nv = t.nv;
    const int k = static_cast<int>(W.size());
    if (k == 0) {
        x_out = y;
        nu_out.clear();
        return;
    }
    std::vector<double> rows(static_cast<std::size_t>(k) * nv);
    for (int i = 0; i < k; ++i) t.fill_row(W[i], rows.data() + static_cast<std::size_t>(i) * nv);
    std::vector<double> gram(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j <= i; ++j) {
            const double g = linalg::dot(
                std::span<const double>(rows.data() + static_cast<std::size_t>(i) * nv, nv),
                std::span<const double>(rows.data() + static_cast<std::size_t>(j) * nv, nv));
            gram[static_cast<std::size_t>(i) * k + j] = g;
            gram[static_cast<std::size_t>(j) * k + i] = g;
        }
    std::vector<double> r(k);
    for (int i = 0; i < k; ++i)
        r[i] = linalg::dot(
                   std::span<const double>(rows.data() + static_cast<std::size_t>(i) * nv, nv), y) -
               t.rhs(W[i]);
    linalg::Cholesky chol;
    if (!chol.factor(std::move(gram), k)) throw SolverError("qp: dependent active set");
    chol.solve(r, nu_out);
    x_out = y;
    for (int i = 0; i < k; ++i) {
        const double* a = rows.data() + static_cast<std::size_t>(i) * nv;
        for (int j = 0; j < nv; ++j) x_out[j] -= nu_out[i] * a[j];
    }
}

}  // namespace

std::vector<double> project(const lp::Problem& p, const std::vector<double>& y) {
    ConTable t(p);
    const int nv = t.nv;

    // feasible start: the input point when possible, else a phase-1 vertex
    std::vector<double> x = y;
    for (int j = 0; j < nv; ++j) x[j] = std::clamp(x[j], p.lo[j], p.hi[j]);
    if (!t.feasible(x)) {
        auto v = lp::find_feasible_vertex(p);
        if (!v) throw InfeasibleError("qp: empty polyhedron");
        x = v->x;
    }

    std::vector<int> W;  // active working set, ids ascending by insertion policy
    std::vector<double> x_eq, nu, pdir(nv);
    const long cap = 100L * (t.count() + 1) + 1000;
    for (long it = 0;; ++it) {
        if (it > cap) throw SolverError("qp: iteration limit exceeded");
        eqp_solve(t, W, y, x_eq, nu);
        double pn = 0.0;
        for (int j = 0; j < nv; ++j) {
            pdir[j] = x_eq[j] - x[j];
            pn = std::max(pn, std::fabs(pdir[j]));
        }
        if (pn <= 1e-11 * (1.0 + linalg::norm(x))) {
            // stationary on W: check multipliers
            double numax = 0.0;
            for (double v : nu) numax = std::max(numax, std::fabs(v));
            const double tol = 1e-9 * (1.0 + numax);
            int drop_pos = -1, drop_id = std::numeric_limits<int>::max();
            for (std::size_t i = 0; i < W.size(); ++i) {
                if (nu[i] < -tol && W[i] < drop_id) {
                    drop_id = W[i];
                    drop_pos = static_cast<int>(i);
                }
            }
            if (drop_pos < 0) break;  // KKT holds
            W.erase(W.begin() + drop_pos);
            continue;
        }
        // step toward x_eq, blocked by the first inactive constraint
        double step = 1.0;
        int blocker = -1;
        for (int id = 0; id < t.count(); ++id) {
            if (std::find(W.begin(), W.end(), id) != W.end()) continue;
            const double s = t.dot(id, pdir);
            if (s <= 1e-12) continue;
            const double room = t.rhs(id) - t.dot(id, x);
            const double tc = room / s;
            if (tc < step - 1e-15) {
                step = std::max(tc, 0.0);
                blocker = id;
            }
        }
        for (int j = 0; j < nv; ++j) x[j] += step * pdir[j];
        if (blocker >= 0)
            W.push_back(blocker);
        // step == 1 without blocker: x == x_eq, next pass checks multipliers
    }

    // verify the KKT residual before returning
    std::vector<double> grad(nv);
    for (int j = 0; j < nv; ++j) grad[j] = x[j] - y[j];
    std::vector<double> row(nv);
    for (std::size_t i = 0; i < W.size(); ++i) {
        t.fill_row(W[i], row.data());
        for (int j = 0; j < nv; ++j) grad[j] += nu[i] * row[j];
    }
    const double scale = 1.0 + linalg::norm(y);
    if (linalg::norm(grad) > 1e-9 * scale) throw SolverError("qp: KKT residual too large");
    for (int id = 0; id < t.count(); ++id)
        if (t.dot(id, x) - t.rhs(id) > 1e-8 * (1.0 + std::fabs(t.rhs(id))))
            throw SolverError("qp: primal feasibility violated");
    return x;
}

}  // namespace cutplane::qp
