#pragma once

// Euclidean projection onto a polyhedron via a primal active-set method.
// The Hessian is the identity, so every equality-constrained subproblem is
// a least-distance solve against the active rows' Gram matrix. Finite
// termination on polyhedra; smallest-index selection keeps runs
// deterministic. The KKT residual is verified (<= 1e-9) before returning.

#include <vector>

#include "cutplane/simplex.hpp"

namespace cutplane::qp {

// min ||v - y||^2  s.t.  rows of p, bounds of p.
// Throws InfeasibleError when the polyhedron is empty.
std::vector<double> project(const lp::Problem& p, const std::vector<double>& y);

}  // namespace cutplane::qp
