#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cutplane/oracle.hpp"
#include "cutplane/runresult.hpp"

namespace cutplane::bench {

enum class BenchId { p15, p25, p34 };

struct BenchProblemId {
    BenchId id = BenchId::p15;
    int n = 2;  // 1 <= n <= 64 (desk scale)
};

std::optional<BenchId> parse_bench_id(const std::string& token);
std::string bench_id_name(BenchId id);

// Test problems of the experiment sections:
//   p15: <c,x> -> min, c = -1; f_j = sum_i xi_i^2/(i*j) - 1; box [-2sqrt(n), 2sqrt(n)]^n
//   p25: sum i^2 xi_i^2 -> min over the box [-50,50]^n
//   p34: sum i(xi_i-10)^2 -> min s.t. sum i(xi_i-5)^2 <= 1600
ProblemInstance make_problem(const BenchProblemId& id);

// Closed-form optima (KKT), used as ground truth for invariants.
Optimum oracle_optimum(const BenchProblemId& id);

// Independent first-order oracle: projected gradient (FISTA restart) inside
// an augmented-Lagrangian loop; projection is the box clamp. Runs to
// tolerance `tol` on its own optimality measure.
Optimum projected_descent_optimum(const ProblemInstance& problem, double tol = 1e-8);

// |closed form - descent oracle| <= tol, constraints satisfied. Throws
// ContractViolation on failure.
void validate_optimum(const BenchProblemId& id, double tol = 1e-6);

// One suite cell: tokens mirror the CLI run flags.
struct SuiteCell {
    std::string method;  // "1.1".."3.3"
    BenchProblemId problem;
    std::string eps_code = "a1";
    std::string delta_code;        // chapter 3 / M2_4
    std::string drop_code = "b1";  // b-codes
    std::string region_drop_code;  // chapter 3 d-codes
    std::string cut_mode = "aggregate";  // M1_2: aggregate | per
    double lambda = 0.5;
    double eps_solution = 0.01;
    double stop_eps = 1e-5;
    long max_iters = 200000;
    double wall_limit_ms = 60000.0;
    Point point;  // method 1.3 projection target; empty = box corner
};

struct SuiteRow {
    std::string method;
    int n = 0;
    std::string eps_code;   // "a4" or "a4+c4"
    std::string drop_code;  // "b1" or "d1+b1"
    long iterations = 0;
    double wall_ms = 0.0;
    double final_f = 0.0;
    double final_gap = 0.0;  // |final_f - f_star|
    double f_star = 0.0;
    std::string status;  // Converged | IterLimit | Aborted | Rejected
};

// Validates the cell (code families against the method) and runs it.
// Invalid cells yield a Rejected row instead of aborting the suite.
SuiteRow run_cell(const SuiteCell& cell);

struct CellOutcome {
    SuiteRow row;
    RunResult result;
};

// As run_cell, optionally keeping the per-iteration trace (CLI --trace).
CellOutcome run_cell_full(const SuiteCell& cell, bool record_trace);

// Family validation message for a cell, nullopt when valid.
std::optional<std::string> validate_cell(const SuiteCell& cell);

// Executes each cell (optionally with a worker pool), writes CSV to
// out_path and returns the rows ordered by input index.
std::vector<SuiteRow> run_suite(const std::vector<SuiteCell>& cells,
                                const std::string& out_path, int jobs = 1);

void write_csv(std::ostream& os, const std::vector<SuiteRow>& rows);

// Parses one matrix line (same tokens as the CLI run flags, without the
// subcommand). Returns nullopt with a message on unknown tokens.
std::optional<SuiteCell> parse_cell_tokens(const std::vector<std::string>& tokens,
                                           std::string* error);

}  // namespace cutplane::bench
