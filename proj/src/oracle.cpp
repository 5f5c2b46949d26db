#include "cutplane/oracle.hpp"

#include <cmath>
#include <cstddef>

#include "cutplane/errors.hpp"

namespace cutplane {

namespace {

std::vector<int> active_at(const std::vector<const FunctionOracle*>& fs, const Point& x,
                           double* value_out) {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<double> vals(fs.size());
    for (std::size_t j = 0; j < fs.size(); ++j) {
        vals[j] = fs[j]->value(x);
        if (vals[j] > best) best = vals[j];
    }
    const double tol = 1e-8 * (std::fabs(best) + 1.0);
    std::vector<int> active;
    for (std::size_t j = 0; j < fs.size(); ++j)
        if (vals[j] >= best - tol) active.push_back(static_cast<int>(j));
    if (value_out) *value_out = best;
    return active;
}

}  // namespace

MaxEval eval_max(const ProblemInstance& problem, const Point& x) {
    if (static_cast<int>(x.size()) != problem.dim)
        throw ContractViolation("eval_max: dimension mismatch");
    if (problem.constraints.empty())
        throw ContractViolation("eval_max: problem has no constraints");
    std::vector<const FunctionOracle*> fs;
    fs.reserve(problem.constraints.size());
    for (const auto& f : problem.constraints) fs.push_back(&f);
    MaxEval out;
    out.active = active_at(fs, x, &out.value);
    return out;
}

std::vector<int> violated_indices(const ProblemInstance& problem, const Point& x, double eps) {
    std::vector<int> out;
    for (std::size_t j = 0; j < problem.constraints.size(); ++j)
        if (problem.constraints[j].value(x) > eps) out.push_back(static_cast<int>(j));
    return out;
}

std::vector<int> objective_active_set(const ProblemInstance& problem, const Point& x) {
    if (problem.objective_components.empty()) return {0};
    std::vector<const FunctionOracle*> fs;
    for (const auto& f : problem.objective_components) fs.push_back(&f);
    return active_at(fs, x, nullptr);
}

}  // namespace cutplane
