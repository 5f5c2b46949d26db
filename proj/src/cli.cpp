#include "cutplane/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cutplane/bench.hpp"
#include "cutplane/errors.hpp"

namespace cutplane::cli {

namespace {

constexpr int kUsageError = 64;

void usage(std::ostream& os) {
    os << "usage: cutplane <subcommand> [flags]\n"
          "  run    --method 1.1..3.3 --problem p15|p25|p34 --n N\n"
          "         [--eps a1..a7] [--delta c1..c4] [--drop b1..b4] [--region-drop d1..d3]\n"
          "         [--cut-mode aggregate|per] [--lambda L] [--eps-solution E]\n"
          "         [--stop-eps E] [--max-iters N] [--point x1,x2,...] [--trace]\n"
          "  suite  --matrix FILE --out FILE [--jobs N]\n"
          "  oracle --problem p15|p25|p34 --n N\n";
}

int cmd_run(const std::vector<std::string>& args) {
    std::vector<std::string> cell_tokens;
    bool trace = false;
    for (const auto& t : args) {
        if (t == "--trace") {
            trace = true;
        } else {
            cell_tokens.push_back(t);
        }
    }
    std::string err;
    auto cell = bench::parse_cell_tokens(cell_tokens, &err);
    if (!cell) {
        std::cerr << "run: " << err << "\n";
        usage(std::cerr);
        return kUsageError;
    }
    cell->wall_limit_ms = 0.0;  // no wall cap on single runs
    if (auto verr = bench::validate_cell(*cell)) {
        std::cerr << "run: " << *verr << "\n";
        return kUsageError;
    }
    const bench::CellOutcome out = bench::run_cell_full(*cell, trace);
    if (trace) {
        for (const auto& rec : out.result.trace) {
            std::printf("%ld %.12g %.12g %.12g %d %d %d\n", rec.iter, rec.f_y, rec.F_y, rec.gamma,
                        rec.cuts_region, rec.cuts_epi, rec.refresh ? 1 : 0);
        }
    }
    std::printf(
        "method=%s problem=%s n=%d eps=%s drop=%s status=%s iterations=%ld final_f=%.10g "
        "final_gap=%.4g f_star=%.10g refreshes=%d\n",
        out.row.method.c_str(), bench::bench_id_name(cell->problem.id).c_str(), out.row.n,
        out.row.eps_code.c_str(), out.row.drop_code.c_str(), out.row.status.c_str(),
        out.row.iterations, out.row.final_f, out.row.final_gap, out.row.f_star,
        out.result.refresh_count);
    if (out.result.status == RunStatus::Aborted && !out.result.abort_reason.empty())
        std::cerr << out.result.abort_reason << "\n";
    switch (out.result.status) {
        case RunStatus::Converged: return 0;
        case RunStatus::IterLimit: return 2;
        case RunStatus::Aborted: return 3;
    }
    return 3;
}

int cmd_suite(const std::vector<std::string>& args) {
    std::string matrix_path, out_path = "suite.csv";
    int jobs = 1;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--matrix" && i + 1 < args.size()) {
            matrix_path = args[++i];
        } else if (args[i] == "--out" && i + 1 < args.size()) {
            out_path = args[++i];
        } else if (args[i] == "--jobs" && i + 1 < args.size()) {
            jobs = std::atoi(args[++i].c_str());
        } else {
            std::cerr << "suite: unknown token '" << args[i] << "'\n";
            usage(std::cerr);
            return kUsageError;
        }
    }
    if (matrix_path.empty()) {
        std::cerr << "suite: --matrix is required\n";
        return kUsageError;
    }
    std::ifstream in(matrix_path);
    if (!in) {
        std::cerr << "suite: cannot open " << matrix_path << "\n";
        return kUsageError;
    }
    std::vector<bench::SuiteCell> cells;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ss(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ss >> tok) tokens.push_back(tok);
        if (tokens.empty()) continue;
        std::string err;
        auto cell = bench::parse_cell_tokens(tokens, &err);
        if (!cell) {
            // diagnostic row for the unparsable line
            bench::SuiteCell bad;
            bad.method = "?";
            bad.eps_code = "";
            bad.drop_code = "";
            std::cerr << "suite: " << err << " (line kept as a Rejected row)\n";
            cells.push_back(std::move(bad));
            continue;
        }
        cells.push_back(std::move(*cell));
    }
    try {
        bench::run_suite(cells, out_path, jobs);
    } catch (const SolverError& e) {
        std::cerr << "suite: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

int cmd_oracle(const std::vector<std::string>& args) {
    std::string problem = "p15";
    int n = 2;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--problem" && i + 1 < args.size()) {
            problem = args[++i];
        } else if (args[i] == "--n" && i + 1 < args.size()) {
            n = std::atoi(args[++i].c_str());
        } else {
            std::cerr << "oracle: unknown token '" << args[i] << "'\n";
            return kUsageError;
        }
    }
    const auto id = bench::parse_bench_id(problem);
    if (!id || n < 1 || n > 64) {
        std::cerr << "oracle: invalid problem/n\n";
        return kUsageError;
    }
    const Optimum opt = bench::oracle_optimum({*id, n});
    std::printf("f_star=%.10g\n", opt.f_star);
    std::printf("x_star=");
    for (std::size_t i = 0; i < opt.x_star.size(); ++i)
        std::printf(i ? " %.10g" : "%.10g", opt.x_star[i]);
    std::printf("\n");
    return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& argv) {
    if (argv.empty()) {
        usage(std::cerr);
        return kUsageError;
    }
    const std::string& sub = argv[0];
    const std::vector<std::string> rest(argv.begin() + 1, argv.end());
    if (sub == "run") return cmd_run(rest);
    if (sub == "suite") return cmd_suite(rest);
    if (sub == "oracle") return cmd_oracle(rest);
    if (sub == "--help" || sub == "-h" || sub == "help") {
        usage(std::cout);
        return 0;
    }
    std::cerr << "unknown subcommand '" << sub << "'\n";
    usage(std::cerr);
    return kUsageError;
}

}  // namespace cutplane::cli
