#include <doctest.h>

#include <random>

#include "cutplane/bench.hpp"
#include "cutplane/oracle.hpp"

using namespace cutplane;

TEST_CASE("eval_max on p15") {
    const auto pr = bench::make_problem({bench::BenchId::p15, 2});

    SUBCASE("origin: both constraints at -1") {
        const auto r = eval_max(pr, {0.0, 0.0});
        CHECK(r.value == doctest::Approx(-1.0));
        CHECK(r.active == std::vector<int>{0, 1});
    }
    SUBCASE("x=(2,0): f_1 = 3 dominates") {
        const auto r = eval_max(pr, {2.0, 0.0});
        CHECK(r.value == doctest::Approx(3.0));
        CHECK(r.active == std::vector<int>{0});
    }
    SUBCASE("strict interior point is negative") {
        const auto r = eval_max(pr, {0.1, 0.1});
        CHECK(r.value < 0.0);
    }
    SUBCASE("dimension mismatch is a contract violation") {
        CHECK_THROWS_AS((void)eval_max(pr, {1.0, 2.0, 3.0}), ContractViolation);
    }
}

TEST_CASE("violated_indices") {
    const auto p15 = bench::make_problem({bench::BenchId::p15, 2});
    CHECK(violated_indices(p15, {0.0, 0.0}, 0.0).empty());
    CHECK(violated_indices(p15, {2.0, 0.0}, 0.0) == std::vector<int>{0, 1});
    // f_2(2,0) = 1, so a loose eps keeps only f_1
    CHECK(violated_indices(p15, {2.0, 0.0}, 2.0) == std::vector<int>{0});

    const auto p34 = bench::make_problem({bench::BenchId::p34, 2});
    CHECK(violated_indices(p34, {10.0, 10.0}, 0.0).empty());

    // consistency with eval_max at zero tolerance
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int t = 0; t < 200; ++t) {
        const Point x{u(rng), u(rng)};
        const bool none = violated_indices(p15, x, 0.0).empty();
        const double F = eval_max(p15, x).value;
        CHECK(none == (F <= 1e-12));
    }
}

TEST_CASE("subgradient inequality holds for sampled oracle pairs") {
    // spot check here; the full 1e4-pair sweep runs in the acceptance suite
    const auto pr = bench::make_problem({bench::BenchId::p15, 5});
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int t = 0; t < 500; ++t) {
        Point x(5), z(5);
        for (auto& v : x) v = u(rng);
        for (auto& v : z) v = u(rng);
        for (const auto& f : pr.constraints) {
            const Point g = f.subgradient(z);
            double lin = f.value(z);
            for (int i = 0; i < 5; ++i) lin += g[i] * (x[i] - z[i]);
            CHECK(f.value(x) >= lin - 1e-10);
        }
    }
}

TEST_CASE("objective_active_set picks max components") {
    ProblemInstance pr;
    pr.dim = 1;
    FunctionOracle f1{[](const Point& x) { return -x[0]; },
                      [](const Point&) { return Point{-1.0}; }};
    FunctionOracle f2{[](const Point& x) { return x[0] - 1.0; },
                      [](const Point&) { return Point{1.0}; }};
    pr.objective_components = {f1, f2};
    pr.objective.value = [&](const Point& x) { return std::max(-x[0], x[0] - 1.0); };
    CHECK(objective_active_set(pr, {0.0}) == std::vector<int>{0});
    CHECK(objective_active_set(pr, {1.0}) == std::vector<int>{1});
    CHECK(objective_active_set(pr, {0.5}) == std::vector<int>{0, 1});
}
