#pragma once

// Internal helpers shared by the method runners: incremental LP assembly
// over one or two cut stores with warm-started vertices, wall-clock
// budgeting and the aggregate constraint oracle.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cutplane/cut.hpp"
#include "cutplane/errors.hpp"
#include "cutplane/linalg.hpp"
#include "cutplane/oracle.hpp"
#include "cutplane/simplex.hpp"

namespace cutplane::detail {

class Stopwatch {
  public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point t0_;
};

// LP over [simple rows][region cuts][epi cuts] with variables x (+ gamma
// when an epi store is attached). Appends are synced incrementally and the
// warm vertex's row references are shifted along; a store revision change
// (drop) rebuilds and cold-starts.
class LpDriver {
  public:
    LpDriver(const ProblemInstance& pr, const CutStore* region, const CutStore* epi)
        : pr_(&pr), region_(region), epi_(epi) {
        nx_ = pr.dim;
        has_gamma_ = epi_ != nullptr;
        rebuild();
    }

    void attach_region(const CutStore* region) { region_ = region; region_rev_ = ~0ull; }
    void attach_epi(const CutStore* epi) { epi_ = epi; epi_rev_ = ~0ull; }

    LpOutcome minimize(std::span<const double> cost) {
        sync();
        const lp::Result r =
            lp::minimize(prob_, cost, warm_ ? &*warm_ : nullptr, corner_);
        if (r.status == lp::Status::Infeasible) throw InfeasibleError(dump());
        if (r.status == lp::Status::Unbounded) throw UnboundedError();
        warm_ = r.vertex;
        return LpOutcome{r.x, r.value, r.vertex};
    }

    // Solves with temporary extra rows; the warm state is left untouched.
    LpOutcome minimize_with_extra(std::span<const double> cost,
                                  std::span<const lp::Row> extra) {
        sync();
        const std::size_t base = prob_.rows.size();
        for (const auto& r : extra) prob_.rows.push_back(r);
        lp::Result r = lp::minimize(prob_, cost, warm_ ? &*warm_ : nullptr, corner_);
        prob_.rows.resize(base);
        if (r.status == lp::Status::Infeasible) throw InfeasibleError(dump());
        if (r.status == lp::Status::Unbounded) throw UnboundedError();
        return LpOutcome{r.x, r.value, r.vertex};
    }

    bool point_feasible(std::span<const double> x, double tol = 1e-9) const {
        for (const auto& r : prob_.rows) {
            if (linalg::dot(r.a, x) - r.rhs > tol * (1.0 + std::fabs(r.rhs))) return false;
        }
        for (int j = 0; j < prob_.nvar(); ++j)
            if (x[j] < prob_.lo[j] - tol || x[j] > prob_.hi[j] + tol) return false;
        return true;
    }

    const lp::Problem& problem() const { return prob_; }

  private:
    std::string dump() const {
        std::string s;
        if (region_) {
            std::ostringstream os;
            region_->dump(os);
            s += os.str();
        }
        if (epi_) {
            std::ostringstream os;
            epi_->dump(os);
            s += os.str();
        }
        return s;
    }

    void rebuild() {
        prob_ = lp::Problem{};
        const int nv = nx_ + (has_gamma_ ? 1 : 0);
        if (region_) {
            prob_.lo = region_->lo();
            prob_.hi = region_->hi();
        } else {
            prob_.lo.assign(epi_->lo().begin(), epi_->lo().end() - 1);
            prob_.hi.assign(epi_->hi().begin(), epi_->hi().end() - 1);
        }
        if (has_gamma_) {
            prob_.lo.push_back(epi_->gamma_lower());
            prob_.hi.push_back(epi_->hi().back());
        }
        for (const auto& li : pr_->simple_linear) {
            lp::Row r;
            r.a.assign(nv, 0.0);
            std::copy(li.a.begin(), li.a.end(), r.a.begin());
            r.rhs = li.rhs;
            prob_.rows.push_back(std::move(r));
        }
        fixed_rows_ = prob_.rows.size();
        region_synced_ = epi_synced_ = 0;
        if (region_) {
            region_->append_rows(prob_.rows, nv, 0, -1);
            region_synced_ = region_->size();
            region_rev_ = region_->revision();
        }
        if (epi_) {
            epi_->append_rows(prob_.rows, nv, 0, has_gamma_ ? nv - 1 : -1);
            epi_synced_ = epi_->size();
            epi_rev_ = epi_->revision();
        }
        warm_.reset();
        corner_.assign(nv, false);
        if (has_gamma_) corner_.back() = true;  // start with gamma at its upper bound
    }

    void sync() {
        const bool region_dropped = region_ && region_->revision() != region_rev_;
        const bool epi_dropped = epi_ && epi_->revision() != epi_rev_;
        if (region_dropped || epi_dropped) {
            rebuild();
            return;
        }
        const int nv = prob_.nvar();
        if (has_gamma_) prob_.lo[nv - 1] = epi_->gamma_lower();
        const std::size_t region_new = region_ ? region_->size() : 0;
        if (region_ && region_new > region_synced_) {
            // insert new region rows before the epi block, shifting warm refs
            std::vector<lp::Row> tail(prob_.rows.begin() + fixed_rows_ + region_synced_,
                                      prob_.rows.end());
            prob_.rows.resize(fixed_rows_ + region_synced_);
            for (std::size_t i = region_synced_; i < region_new; ++i) {
                lp::Row r;
                r.a.assign(nv, 0.0);
                const Cut& c = region_->cuts()[i];
                std::copy(c.normal.begin(), c.normal.end(), r.a.begin());
                r.rhs = c.rhs;
                prob_.rows.push_back(std::move(r));
            }
            const int shift = static_cast<int>(region_new - region_synced_);
            for (auto& r : tail) prob_.rows.push_back(std::move(r));
            if (warm_) {
                const int row_base = 2 * nv;
                const int epi_start = static_cast<int>(fixed_rows_ + region_synced_);
                for (int& id : warm_->active) {
                    if (id >= row_base && id - row_base >= epi_start) id += shift;
                }
            }
            region_synced_ = region_new;
        }
        if (epi_ && epi_->size() > epi_synced_) {
            for (std::size_t i = epi_synced_; i < epi_->size(); ++i) {
                lp::Row r;
                r.a.assign(nv, 0.0);
                const Cut& c = epi_->cuts()[i];
                std::copy(c.normal.begin(), c.normal.end(), r.a.begin());
                if (has_gamma_) r.a[nv - 1] = c.gamma_coeff;
                r.rhs = c.rhs;
                prob_.rows.push_back(std::move(r));
            }
            epi_synced_ = epi_->size();
        }
    }

    const ProblemInstance* pr_;
    const CutStore* region_ = nullptr;
    const CutStore* epi_ = nullptr;
    int nx_ = 0;
    bool has_gamma_ = false;
    lp::Problem prob_;
    std::size_t fixed_rows_ = 0;
    std::size_t region_synced_ = 0, epi_synced_ = 0;
    std::uint64_t region_rev_ = 0, epi_rev_ = 0;
    std::optional<lp::Vertex> warm_;
    std::vector<bool> corner_;
};

// max_j f_j with the lowest-index maximizer as subgradient selector.
inline FunctionOracle aggregate_constraint_oracle(const ProblemInstance& pr) {
    const ProblemInstance* p = &pr;
    FunctionOracle F;
    F.value = [p](const Point& x) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& f : p->constraints) best = std::max(best, f.value(x));
        return best;
    };
    F.subgradient = [p](const Point& x) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t arg = 0;
        for (std::size_t j = 0; j < p->constraints.size(); ++j) {
            const double v = p->constraints[j].value(x);
            if (v > best) { best = v; arg = j; }
        }
        return p->constraints[arg].subgradient(x);
    };
    return F;
}

inline double region_residual(const ProblemInstance& pr, const Point& x) {
    if (pr.constraints.empty()) return 0.0;
    return eval_max(pr, x).value;
}

// Region support cut <a, x - z> <= 0 from a unit support vector.
inline Cut make_region_support_cut(const Point& a, std::span<const double> z, int iter) {
    Cut c;
    c.normal = a;
    c.gamma_coeff = 0.0;
    c.rhs = linalg::dot(a, z.subspan(0, a.size()));
    c.tag = {iter, CutSource::region_support};
    return c;
}

// Region subgradient cut F(u) + <g, x - u> <= 0, normalized.
inline Cut make_region_subgrad_cut(const Point& g, const Point& u, double value_at_u, int iter) {
    const double nrm = linalg::norm(g);
    if (nrm < 1e-12) throw ZeroSubgradientError();
    Cut c;
    c.normal.resize(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) c.normal[j] = g[j] / nrm;
    c.gamma_coeff = 0.0;
    c.rhs = (linalg::dot(g, u) - value_at_u) / nrm;
    c.tag = {iter, CutSource::region_subgrad};
    return c;
}

// Epi subgradient cut f(u) + <g, x - u> <= gamma (gamma_coeff -1 exactly).
inline Cut make_epi_subgrad_cut(const Point& g, const Point& u, double value_at_u, int iter) {
    Cut c;
    c.normal = g;
    c.gamma_coeff = -1.0;
    c.rhs = linalg::dot(g, u) - value_at_u;
    c.tag = {iter, CutSource::epi_subgrad};
    return c;
}

// Epi support cut <c, (x, gamma) - z> <= 0 from a unit (n+1)-vector.
inline Cut make_epi_support_cut(std::span<const double> c_unit, std::span<const double> z,
                                int iter) {
    Cut c;
    c.normal.assign(c_unit.begin(), c_unit.end() - 1);
    c.gamma_coeff = c_unit.back();
    c.rhs = linalg::dot(c_unit, z);
    c.tag = {iter, CutSource::epi_support};
    return c;
}

}  // namespace cutplane::detail
