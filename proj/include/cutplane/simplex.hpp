#pragma once

// Dense simplex for inequality-form LPs:
//     min <c, v>   s.t.  <a_r, v> <= b_r,  lo <= v <= hi.
//
// Works on vertices: a basis is nvar linearly independent active
// constraints. Bland's smallest-index rule on a fixed global constraint
// ordering (lower bounds, upper bounds, rows) prevents cycling. Phase 1
// uses a single artificial variable driven from any box corner (or a
// caller-supplied start vertex). Ties on the optimal face are resolved by
// lexicographic refinement, so the returned optimum is the
// lexicographically smallest optimal vertex.

#include <optional>
#include <span>
#include <vector>

namespace cutplane::lp {

struct Row {
    std::vector<double> a;  // length nvar
    double rhs = 0.0;
};

struct Problem {
    std::vector<double> lo, hi;
    std::vector<Row> rows;
    int nvar() const { return static_cast<int>(lo.size()); }
};

enum class Status { Optimal, Infeasible, Unbounded };

// Constraint ids: [0, n) lower bounds, [n, 2n) upper bounds, [2n, 2n+m) rows.
struct Vertex {
    std::vector<double> x;
    std::vector<int> active;  // nvar constraint ids
};

struct Result {
    Status status = Status::Optimal;
    std::vector<double> x;
    double value = 0.0;
    Vertex vertex;
};

// `warm` is used when it still describes a vertex of `p` (ids in range,
// residuals small); otherwise the solver falls back to a cold start at the
// box corner selected by `corner_hi` (empty = all lower bounds).
Result minimize(const Problem& p, std::span<const double> cost,
                const Vertex* warm = nullptr,
                std::span<const bool> corner_hi = {});

// Feasible point of p nearest the corner heuristics; used by the QP layer.
// Returns nullopt when p is infeasible.
std::optional<Vertex> find_feasible_vertex(const Problem& p,
                                           const Vertex* warm = nullptr,
                                           std::span<const bool> corner_hi = {});

}  // namespace cutplane::lp
