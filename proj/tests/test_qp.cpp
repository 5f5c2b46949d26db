#include <doctest.h>

#include <random>

#include "cutplane/errors.hpp"
#include "cutplane/linalg.hpp"
#include "cutplane/qp.hpp"

using namespace cutplane;

namespace {

lp::Problem box2(double lo, double hi) {
    lp::Problem p;
    p.lo = {lo, lo};
    p.hi = {hi, hi};
    return p;
}

}  // namespace

TEST_CASE("projection onto a halfspace in a box") {
    lp::Problem p = box2(-50.0, 50.0);
    p.rows.push_back({{1.0, 0.0}, 1.0});  // x1 <= 1
    const auto x = qp::project(p, {2.0, 0.0});
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(0.0));
}

TEST_CASE("interior point projects to itself") {
    const lp::Problem p = box2(-50.0, 50.0);
    const auto x = qp::project(p, {0.0, 0.0});
    CHECK(x[0] == doctest::Approx(0.0));
    CHECK(x[1] == doctest::Approx(0.0));
}

TEST_CASE("diagonal halfspace projection") {
    lp::Problem p = box2(-50.0, 50.0);
    p.rows.push_back({{1.0, 1.0}, 1.0});  // x1 + x2 <= 1
    const auto x = qp::project(p, {1.0, 1.0});
    CHECK(x[0] == doctest::Approx(0.5));
    CHECK(x[1] == doctest::Approx(0.5));
}

TEST_CASE("empty polyhedron throws") {
    lp::Problem p = box2(0.0, 1.0);
    p.rows.push_back({{1.0, 1.0}, -1.0});
    CHECK_THROWS_AS((void)qp::project(p, {0.0, 0.0}), InfeasibleError);
}

TEST_CASE("idempotent and nonexpansive on random instances") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int t = 0; t < 60; ++t) {
        const int n = 2 + static_cast<int>(rng() % 3);
        lp::Problem p;
        p.lo.assign(n, -2.0);
        p.hi.assign(n, 2.0);
        const int m = static_cast<int>(rng() % 6);
        for (int r = 0; r < m; ++r) {
            lp::Row row;
            row.a.resize(n);
            for (auto& v : row.a) v = u(rng);
            row.rhs = std::fabs(u(rng)) + 0.05;
            p.rows.push_back(std::move(row));
        }
        std::vector<double> y1(n), y2(n);
        for (auto& v : y1) v = u(rng);
        for (auto& v : y2) v = u(rng);
        const auto p1 = qp::project(p, y1);
        const auto p2 = qp::project(p, y2);
        // idempotent
        const auto p11 = qp::project(p, p1);
        CHECK(linalg::dist(p1, p11) <= 1e-9);
        // nonexpansive
        CHECK(linalg::dist(p1, p2) <= linalg::dist(y1, y2) + 1e-9);
        // feasible
        for (const auto& row : p.rows)
            CHECK(linalg::dot(row.a, p1) <= row.rhs + 1e-8 * (1.0 + std::fabs(row.rhs)));
    }
}
