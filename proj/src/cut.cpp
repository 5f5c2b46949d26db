#include "cutplane/cut.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "cutplane/errors.hpp"
#include "cutplane/linalg.hpp"

namespace cutplane {

CutStore CutStore::make_region(Point lo, Point hi) {
    CutStore s;
    s.space_ = Space::x_space;
    s.lo_ = std::move(lo);
    s.hi_ = std::move(hi);
    return s;
}

CutStore CutStore::make_epi(Point lo, Point hi, double gamma_lo, double gamma_hi) {
    CutStore s;
    s.space_ = Space::epi_space;
    s.lo_ = std::move(lo);
    s.hi_ = std::move(hi);
    s.lo_.push_back(gamma_lo);
    s.hi_.push_back(gamma_hi);
    return s;
}

void CutStore::set_gamma_lower(double g) {
    if (space_ != Space::epi_space)
        throw ContractViolation("set_gamma_lower on an x-space store");
    lo_.back() = g;
}

double CutStore::cut_value(const Cut& c, std::span<const double> at) const {
    double v = linalg::dot(c.normal, at.subspan(0, c.normal.size()));
    if (space_ == Space::epi_space && at.size() > c.normal.size())
        v += c.gamma_coeff * at[c.normal.size()];
    return v;
}

bool CutStore::satisfies(std::span<const double> at, double tol) const {
    for (const Cut& c : cuts_)
        if (cut_value(c, at) - c.rhs > tol * (1.0 + std::fabs(c.rhs))) return false;
    return true;
}

bool CutStore::add(Cut cut) {
    const double nrm = std::sqrt(linalg::dot(cut.normal, cut.normal) +
                                 cut.gamma_coeff * cut.gamma_coeff);
    if (nrm < 1e-12) return false;
    // duplicate suppression after normalization
    for (const Cut& c : cuts_) {
        const double cn = std::sqrt(linalg::dot(c.normal, c.normal) +
                                    c.gamma_coeff * c.gamma_coeff);
        double diff = std::fabs(cut.gamma_coeff / nrm - c.gamma_coeff / cn) +
                      std::fabs(cut.rhs / nrm - c.rhs / cn);
        for (std::size_t j = 0; j < cut.normal.size() && diff <= 1e-10; ++j)
            diff += std::fabs(cut.normal[j] / nrm - c.normal[j] / cn);
        if (diff <= 1e-10) return false;
    }
    cuts_.push_back(std::move(cut));
    return true;
}

void CutStore::clear_cuts() {
    cuts_.clear();
    ++revision_;
}

void CutStore::erase_all_but_last(std::size_t keep) {
    if (cuts_.size() <= keep) return;
    cuts_.erase(cuts_.begin(), cuts_.end() - keep);
    ++revision_;
}

void CutStore::erase_to_indices(const std::vector<int>& keep) {
    std::vector<Cut> next;
    next.reserve(keep.size());
    for (int i : keep) next.push_back(cuts_[i]);
    cuts_ = std::move(next);
    ++revision_;
}

void CutStore::append_rows(std::vector<lp::Row>& out, int total_vars, int x_offset,
                           int gamma_index) const {
    for (const Cut& c : cuts_) {
        lp::Row r;
        r.a.assign(total_vars, 0.0);
        for (std::size_t j = 0; j < c.normal.size(); ++j) r.a[x_offset + j] = c.normal[j];
        if (space_ == Space::epi_space && gamma_index >= 0) r.a[gamma_index] = c.gamma_coeff;
        r.rhs = c.rhs;
        out.push_back(std::move(r));
    }
}

void CutStore::dump(std::ostream& os) const {
    os << dim_x() << ' ' << cuts_.size() << ' '
       << (space_ == Space::epi_space ? "epi" : "x") << '\n';
    os << "lo:";
    for (double v : lo_) os << ' ' << v;
    os << "\nhi:";
    for (double v : hi_) os << ' ' << v;
    os << '\n';
    for (const Cut& c : cuts_) {
        for (double v : c.normal) os << v << ' ';
        os << c.gamma_coeff << ' ' << c.rhs << '\n';
    }
}

std::vector<int> active_cuts(const CutStore& store, std::span<const double> at, double tol) {
    std::vector<int> out;
    const auto& cs = store.cuts();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const double v = store.cut_value(cs[i], at);
        if (std::fabs(v - cs[i].rhs) <= tol * (1.0 + std::fabs(cs[i].rhs)))
            out.push_back(static_cast<int>(i));
    }
    return out;
}

CutStore apply_drop(CutStore store, DropStrategy strategy, std::span<const double> at, int n) {
    switch (strategy) {
        case DropStrategy::keep_all:
            break;
        case DropStrategy::active_only: {
            store.erase_to_indices(active_cuts(store, at, 1e-8));
            break;
        }
        case DropStrategy::last_n_plus_1:
            store.erase_all_but_last(static_cast<std::size_t>(n) + 1);
            break;
        case DropStrategy::full_reset:
            store.clear_cuts();
            break;
    }
    return store;
}

namespace {

lp::Problem store_problem(const CutStore& store, std::span<const lp::Row> extra) {
    lp::Problem p;
    p.lo = store.lo();
    p.hi = store.hi();
    const int nv = store.dim_vars();
    store.append_rows(p.rows, nv, 0, store.space() == Space::epi_space ? nv - 1 : -1);
    for (const auto& r : extra) p.rows.push_back(r);
    return p;
}

std::string dump_string(const CutStore& store) {
    std::ostringstream os;
    store.dump(os);
    return os.str();
}

}  // namespace

LpOutcome lp_minimize(const CutStore& store, std::span<const double> cost,
                      std::span<const lp::Row> extra) {
    const lp::Problem p = store_problem(store, extra);
    std::vector<bool> corner(p.nvar(), false);
    if (store.space() == Space::epi_space) corner.back() = true;  // start with gamma high
    const lp::Result r = lp::minimize(p, cost, nullptr, corner);
    if (r.status == lp::Status::Infeasible) throw InfeasibleError(dump_string(store));
    if (r.status == lp::Status::Unbounded) throw UnboundedError();
    return LpOutcome{r.x, r.value, r.vertex};
}

Point qp_project(const CutStore& store, const Point& y, std::span<const lp::Row> extra) {
    const lp::Problem p = store_problem(store, extra);
    try {
        return qp::project(p, y);
    } catch (const InfeasibleError&) {
        throw InfeasibleError(dump_string(store));
    }
}

}  // namespace cutplane
