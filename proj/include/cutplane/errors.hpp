#pragma once

#include <stdexcept>
#include <string>

namespace cutplane {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The model polytope became empty: a cut is invalid. Carries diagnostics of
// the offending store.
struct InfeasibleError : SolverError {
    explicit InfeasibleError(std::string diag)
        : SolverError("infeasible subproblem"), diagnostics(std::move(diag)) {}
    std::string diagnostics;
};

struct UnboundedError : SolverError {
    UnboundedError() : SolverError("unbounded subproblem") {}
};

struct MaxBisectionsError : SolverError {
    MaxBisectionsError() : SolverError("segment boundary search exceeded 128 bisections") {}
};

struct ZeroSubgradientError : SolverError {
    ZeroSubgradientError() : SolverError("degenerate subgradient (norm < 1e-12) at a non-interior point") {}
};

struct ContractViolation : SolverError {
    using SolverError::SolverError;
};

struct MissingContext : SolverError {
    MissingContext() : SolverError("adaptive schedule requires a residual context value") {}
};

}  // namespace cutplane
