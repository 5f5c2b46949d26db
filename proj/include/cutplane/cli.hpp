#pragma once

#include <string>
#include <vector>

namespace cutplane::cli {

// Subcommands: run (one configuration), suite (matrix file -> CSV),
// oracle (print f*, x*). Exit codes: 0 Converged/success, 2 IterLimit,
// 3 Aborted, 64 usage error.
int dispatch(const std::vector<std::string>& argv);

}  // namespace cutplane::cli
