#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cutplane/simplex.hpp"
#include "cutplane/types.hpp"

namespace cutplane {

enum class CutSource { region_support, region_subgrad, epi_support, epi_subgrad };

struct CutTag {
    int iter = 0;
    CutSource source = CutSource::region_support;
};

// Linear inequality <normal, x> + gamma_coeff * gamma <= rhs.
// gamma_coeff is 0 for region cuts and exactly -1 for epi_subgrad cuts;
// epi_support cuts carry the (negative) gamma component of their unit
// normal.
struct Cut {
    Point normal;
    double gamma_coeff = 0.0;
    double rhs = 0.0;
    CutTag tag;
};

enum class Space { x_space, epi_space };

enum class DropStrategy { keep_all, active_only, last_n_plus_1, full_reset };

// Base box plus an ordered list of cuts; the approximating sets
// M_i / G_i / Q_i / S_i. Insertion order is preserved (needed for
// "last n+1" dropping). The box is never modified by drops; the epi-space
// gamma lower bound may be raised explicitly.
class CutStore {
  public:
    CutStore() = default;
    // x-space: box over the n coordinates.
    static CutStore make_region(Point lo, Point hi);
    // epi-space: box over x plus gamma in [gamma_lo, gamma_hi].
    static CutStore make_epi(Point lo, Point hi, double gamma_lo, double gamma_hi);

    Space space() const { return space_; }
    int dim_x() const { return static_cast<int>(space_ == Space::epi_space ? lo_.size() - 1 : lo_.size()); }
    int dim_vars() const { return static_cast<int>(lo_.size()); }
    const Point& lo() const { return lo_; }
    const Point& hi() const { return hi_; }
    double gamma_lower() const { return lo_.back(); }
    void set_gamma_lower(double g);

    const std::vector<Cut>& cuts() const { return cuts_; }
    std::size_t size() const { return cuts_.size(); }
    std::uint64_t revision() const { return revision_; }

    // Inserts a cut unless it is degenerate (norm < 1e-12) or duplicates an
    // existing cut within 1e-10 after normalization. Returns whether it was
    // stored.
    bool add(Cut cut);

    // Cut value <normal, x> + gamma_coeff * gamma at a flattened point.
    double cut_value(const Cut& c, std::span<const double> at) const;

    // Whether every inequality (cuts only) holds at `at` within tol*(1+|rhs|).
    bool satisfies(std::span<const double> at, double tol) const;

    void clear_cuts();
    void erase_all_but_last(std::size_t keep);
    void erase_to_indices(const std::vector<int>& keep);

    // Rows of the cuts over `total_vars` LP variables; x occupies
    // [x_offset, x_offset+dim_x), gamma (epi space) sits at gamma_index.
    void append_rows(std::vector<lp::Row>& out, int total_vars, int x_offset, int gamma_index) const;

    void dump(std::ostream& os) const;

  private:
    Space space_ = Space::x_space;
    Point lo_, hi_;
    std::vector<Cut> cuts_;
    std::uint64_t revision_ = 0;
};

// Indices of cuts with |<a,x> + g*gamma - rhs| <= tol*(1+|rhs|), in
// insertion order. `at` is flattened (length dim_x or dim_x+1).
std::vector<int> active_cuts(const CutStore& store, std::span<const double> at, double tol);

// Drop strategies, applied at refresh events. keep_all: unchanged;
// active_only: cuts active at `at` retained; last_n_plus_1: the most recent
// n+1 cuts; full_reset: box only.
CutStore apply_drop(CutStore store, DropStrategy strategy, std::span<const double> at, int n);

struct LpOutcome {
    std::vector<double> point;  // flattened argmin
    double value = 0.0;
    lp::Vertex vertex;
};

// Exact vertex optimum of min <cost, .> over box ∩ cuts (+ extra rows in
// the store's variable space). Deterministic under ties (lexicographically
// smallest optimal vertex). Throws InfeasibleError with a store dump when
// the polyhedron is empty.
LpOutcome lp_minimize(const CutStore& store, std::span<const double> cost,
                      std::span<const lp::Row> extra = {});

// Euclidean projection of y onto box ∩ cuts ∩ extra.
Point qp_project(const CutStore& store, const Point& y, std::span<const lp::Row> extra = {});

}  // namespace cutplane
