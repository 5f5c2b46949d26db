#include <doctest.h>

#include <random>

#include "cutplane/linalg.hpp"
#include "cutplane/simplex.hpp"

using namespace cutplane;

namespace {

lp::Problem box2(double lo, double hi) {
    lp::Problem p;
    p.lo = {lo, lo};
    p.hi = {hi, hi};
    return p;
}

}  // namespace

TEST_CASE("lu solve and transposed solve") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const int n = 1 + static_cast<int>(rng() % 8);
        std::vector<double> a(n * n);
        for (auto& v : a) v = u(rng);
        for (int i = 0; i < n; ++i) a[i * n + i] += 3.0;  // well conditioned
        std::vector<double> xref(n);
        for (auto& v : xref) v = u(rng);
        std::vector<double> b(n, 0.0), bt(n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                b[i] += a[i * n + j] * xref[j];
                bt[j] += a[i * n + j] * xref[i];
            }
        linalg::Lu lu;
        REQUIRE(lu.factor(a, n));
        std::vector<double> x;
        lu.solve(b, x);
        for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(xref[i]).epsilon(1e-9));
        lu.solve_transposed(bt, x);
        for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(xref[i]).epsilon(1e-9));
    }
}

TEST_CASE("box corner optimum") {
    const auto p = box2(-1.0, 1.0);
    const std::vector<double> cost{-1.0, -1.0};
    const auto r = lp::minimize(p, cost);
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(r.x[0] == doctest::Approx(1.0));
    CHECK(r.x[1] == doctest::Approx(1.0));
    CHECK(r.value == doctest::Approx(-2.0));
}

TEST_CASE("single cut binds") {
    lp::Problem p;
    p.lo = {-50.0};
    p.hi = {50.0};
    p.rows.push_back({{1.0}, 0.5});  // x <= 0.5
    const std::vector<double> cost{-1.0};
    const auto r = lp::minimize(p, cost);
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(r.x[0] == doctest::Approx(0.5));
}

TEST_CASE("ties resolve to the lexicographically smallest optimal vertex") {
    const auto p = box2(-1.0, 1.0);
    const std::vector<double> cost{-1.0, 0.0};  // x1 = 1, x2 free
    const auto r = lp::minimize(p, cost);
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(r.x[0] == doctest::Approx(1.0));
    CHECK(r.x[1] == doctest::Approx(-1.0));
}

TEST_CASE("infeasible rows are detected") {
    lp::Problem p = box2(0.0, 1.0);
    p.rows.push_back({{1.0, 1.0}, -1.0});  // x1 + x2 <= -1 impossible on [0,1]^2
    const std::vector<double> cost{1.0, 0.0};
    const auto r = lp::minimize(p, cost);
    CHECK(r.status == lp::Status::Infeasible);
}

TEST_CASE("phase one repairs a violated warm start and random LPs satisfy rows") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 60; ++t) {
        const int n = 2 + static_cast<int>(rng() % 4);
        lp::Problem p;
        p.lo.assign(n, -5.0);
        p.hi.assign(n, 5.0);
        // random cuts through the interior keep the origin feasible
        const int m = 1 + static_cast<int>(rng() % 12);
        for (int r = 0; r < m; ++r) {
            lp::Row row;
            row.a.resize(n);
            for (auto& v : row.a) v = u(rng);
            row.rhs = std::fabs(u(rng)) + 0.1;  // contains 0
            p.rows.push_back(std::move(row));
        }
        std::vector<double> cost(n);
        for (auto& v : cost) v = u(rng);
        const auto r = lp::minimize(p, cost);
        REQUIRE(r.status == lp::Status::Optimal);
        for (const auto& row : p.rows) {
            CHECK(linalg::dot(row.a, r.x) <= row.rhs + 1e-9 * (1.0 + std::fabs(row.rhs)));
        }
        for (int j = 0; j < n; ++j) {
            CHECK(r.x[j] >= p.lo[j] - 1e-9);
            CHECK(r.x[j] <= p.hi[j] + 1e-9);
        }
        // value is a true lower bound w.r.t. a feasible sample
        CHECK(r.value <= linalg::dot(cost, std::vector<double>(n, 0.0)) + 1e-9);

        // warm start from the previous vertex with one extra cut
        lp::Problem p2 = p;
        lp::Row extra;
        extra.a = cost;
        extra.rhs = r.value + 0.5 * std::fabs(r.value) + 0.1;
        p2.rows.push_back(extra);
        const auto r2 = lp::minimize(p2, cost, &r.vertex);
        REQUIRE(r2.status == lp::Status::Optimal);
        CHECK(r2.value == doctest::Approx(r.value).epsilon(1e-9));
    }
}

TEST_CASE("epi-style LP: gamma bound binds") {
    lp::Problem p;
    p.lo = {-50.0, -10.0};
    p.hi = {50.0, 1000.0};
    p.rows.push_back({{2.0, -1.0}, 1.0});  // gamma >= 2x - 1
    const std::vector<double> cost{0.0, 1.0};
    const std::vector<bool> corner{false, true};
    const auto r = lp::minimize(p, cost, nullptr, corner);
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(r.value == doctest::Approx(-10.0));
    CHECK(r.x[0] == doctest::Approx(-50.0));  // lexicographic tie-break
}

TEST_CASE("determinism: identical runs bit for bit") {
    lp::Problem p;
    p.lo = {-2.0, -2.0, -2.0};
    p.hi = {2.0, 2.0, 2.0};
    p.rows.push_back({{1.0, 1.0, 1.0}, 1.5});
    p.rows.push_back({{-1.0, 2.0, 0.5}, 1.0});
    const std::vector<double> cost{-1.0, -0.5, 0.25};
    const auto a = lp::minimize(p, cost);
    const auto b = lp::minimize(p, cost);
    REQUIRE(a.status == lp::Status::Optimal);
    CHECK(a.x == b.x);
    CHECK(a.value == b.value);
}
