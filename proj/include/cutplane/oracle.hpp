#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "cutplane/types.hpp"

namespace cutplane {

// Evaluable convex function with a subgradient selector. For smooth
// functions the selector returns the gradient; the interface stays
// subgradient-shaped so nonsmooth instances plug in.
struct FunctionOracle {
    std::function<double(const Point&)> value;
    std::function<Point(const Point&)> subgradient;
    double mu = 0.0;         // strong-convexity constant, 0 if unknown
    double lipschitz = 0.0;  // Lipschitz constant on the working box, 0 if unknown
};

struct LinearIneq {
    Point a;
    double rhs = 0.0;  // <a, x> <= rhs
};

struct Optimum {
    double f_star = 0.0;
    Point x_star;
};

// Convex problem: min f(x) s.t. f_j(x) <= 0 (j in J), x in D''.
// D'' is the box plus optional linear inequalities.
struct ProblemInstance {
    int dim = 0;
    FunctionOracle objective;
    // Components of a minimax objective f = max_j f_j; empty means the
    // objective itself is the single component.
    std::vector<FunctionOracle> objective_components;
    std::vector<FunctionOracle> constraints;
    Point box_lo, box_hi;                  // the cube M_0 / G_0 base
    std::vector<LinearIneq> simple_linear; // extra linear part of D''
    std::optional<Point> interior;         // shared v inside every D_j
    std::optional<EpiPoint> epi_interior;  // v'' inside epi(f)
    std::optional<Optimum> optimum_hint;
    std::optional<Point> objective_linear; // c when f = <c, x>
    double objective_upper_bound = 0.0;    // valid bound of f over the box
    double mu = 0.0;                       // modulus for accuracy certificates
};

struct MaxEval {
    double value = 0.0;
    std::vector<int> active;  // j with f_j(x) >= value - tol_active
};

// F(x) = max_j f_j(x) plus the active index set.
// tol_active = 1e-8 relative to |value| + 1: exact equality is unusable in
// floating point.
MaxEval eval_max(const ProblemInstance& problem, const Point& x);

// { j : f_j(x) > eps }; empty set certifies x in D_eps.
std::vector<int> violated_indices(const ProblemInstance& problem, const Point& x, double eps);

// Active components of a minimax objective at x (same tolerance rule).
std::vector<int> objective_active_set(const ProblemInstance& problem, const Point& x);

}  // namespace cutplane
