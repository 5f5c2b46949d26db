#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cutplane/oracle.hpp"
#include "cutplane/types.hpp"

namespace cutplane {

// Near-boundary point z (membership in [0, tol]) with its feasible partner
// on the same segment: inner = outside + q * (z - outside), q in [1, 2].
struct BoundaryHit {
    std::vector<double> z;
    std::vector<double> inner;
    double q = 1.0;
    double membership_at_z = 0.0;
    double tol = 0.0;
};

using MembershipFn = std::function<double(std::span<const double>)>;

// Bisection along p(t) = outside + t * (interior - outside), t in (0,1).
// Requires membership(interior) < 0 < membership(outside). Bisects until
// membership(z) <= tol_boundary and the bracket ratio admits q <= 2.
// tol_boundary <= 0 selects the default 1e-10 * (1 + |membership(outside)|).
BoundaryHit segment_boundary_point(const MembershipFn& membership,
                                   std::span<const double> interior,
                                   std::span<const double> outside,
                                   double tol_boundary = 0.0);

// For j outside J_i the paper sets z = ybar = y; pass-through constructor.
BoundaryHit passthrough_hit(std::span<const double> at);

// Normalized generalized-support vector of D_j = {constraint <= 0} at a
// non-interior z: a = g/||g||, g the subgradient at z. Throws
// ZeroSubgradientError when ||g|| < 1e-12.
Point region_support_vector(const FunctionOracle& constraint, const Point& z);

// Unit generalized-support vector of epi(f) at (x, gamma) with
// f(x) >= gamma: (c_f, -1)/||(c_f, -1)|| with c_f = subgradient(x).
std::vector<double> epi_support_vector(const FunctionOracle& f, const EpiPoint& at);

}  // namespace cutplane
