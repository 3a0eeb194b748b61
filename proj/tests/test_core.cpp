#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "viral/core.hpp"

using namespace viral;

namespace {

const Bounds box3 = Bounds::cube(2, -3.0, 3.0);

// Largest gap between consecutive sorted samples on [0, 1], walls included.
double max_gap(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    double gap = xs.front();
    for (std::size_t i = 1; i < xs.size(); ++i) gap = std::max(gap, xs[i] - xs[i - 1]);
    return std::max(gap, 1.0 - xs.back());
}

}  // namespace

TEST_CASE("bounds validation") {
    CHECK_THROWS_AS(Bounds({0.0, 0.0}, {0.0, 1.0}), ContractError);
    CHECK_THROWS_AS(Bounds({0.0}, {1.0, 1.0}), ContractError);
    CHECK_THROWS_AS(Bounds({}, {}), ContractError);
    CHECK_NOTHROW(Bounds({-1.0}, {1.0}));
}

TEST_CASE("clamp_to_bounds") {
    CHECK(clamp_to_bounds(Point{5, 0}, box3) == Point{3, 0});
    CHECK(clamp_to_bounds(Point{1, 1}, box3) == Point{1, 1});
    CHECK(clamp_to_bounds(Point{-10, 10}, box3) == Point{-3, 3});
    CHECK_THROWS_AS(clamp_to_bounds(Point{1, 2, 3}, box3), ContractError);

    RngStream rng(3);
    for (int i = 0; i < 1000; ++i) {
        const Point p{rng.uniform(-20, 20), rng.uniform(-20, 20)};
        const Point once = clamp_to_bounds(p, box3);
        CHECK(clamp_to_bounds(once, box3) == once);
        CHECK(box3.contains(once));
    }
}

TEST_CASE("reflect_into_bounds") {
    CHECK(reflect_into_bounds(Point{4, 0}, box3) == Point{2, 0});
    CHECK(reflect_into_bounds(Point{0, 0}, box3) == Point{0, 0});
    const Point r = reflect_into_bounds(Point{-3.5, 3.5}, box3);
    CHECK(r[0] == doctest::Approx(-2.5).epsilon(1e-15));
    CHECK(r[1] == doctest::Approx(2.5).epsilon(1e-15));
    CHECK_THROWS_AS(reflect_into_bounds(Point{0}, box3), ContractError);

    RngStream rng(5);
    for (int i = 0; i < 1000; ++i) {
        const Point p{rng.uniform(-8.9, 8.9), rng.uniform(-100, 100)};
        CHECK(box3.contains(reflect_into_bounds(p, box3)));
        const Point inside{rng.uniform(-3, 3), rng.uniform(-3, 3)};
        CHECK(reflect_into_bounds(inside, box3) == inside);
    }
}

TEST_CASE("uniform_sample") {
    RngStream rng(11);
    for (int i = 0; i < 1000; ++i) CHECK(box3.contains(uniform_sample(box3, rng)));

    const Bounds unit = Bounds::cube(2, 0.0, 1.0);
    double sx = 0, sy = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        const Point p = uniform_sample(unit, rng);
        sx += p[0];
        sy += p[1];
    }
    CHECK(sx / n >= 0.47);
    CHECK(sx / n <= 0.53);
    CHECK(sy / n >= 0.47);
    CHECK(sy / n <= 0.53);
}

TEST_CASE("stratified_init") {
    RngStream rng(2);
    SUBCASE("single member") {
        const auto pop = stratified_init(box3, 1, rng);
        REQUIRE(pop.size() == 1);
        CHECK(box3.contains(pop[0]));
    }
    SUBCASE("four members take distinct quarters on each axis") {
        const auto pop = stratified_init(Bounds::cube(2, 0.0, 1.0), 4, rng);
        for (std::size_t j = 0; j < 2; ++j) {
            std::vector<int> quarter;
            for (const auto& p : pop) quarter.push_back(std::min(3, static_cast<int>(p[j] * 4.0)));
            std::sort(quarter.begin(), quarter.end());
            CHECK(quarter == std::vector<int>{0, 1, 2, 3});
        }
    }
    SUBCASE("n = 0 rejected") { CHECK_THROWS_AS(stratified_init(box3, 0, rng), ContractError); }
    SUBCASE("lower per-axis gap than an iid cloud") {
        const Bounds unit = Bounds::cube(2, 0.0, 1.0);
        int wins = 0;
        for (std::uint64_t trial = 0; trial < 100; ++trial) {
            RngStream a(1000 + trial), b(1000 + trial);
            const auto strat = stratified_init(unit, 100, a);
            const auto iid = uniform_init(unit, 100, b);
            bool better = true;
            for (std::size_t j = 0; j < 2; ++j) {
                std::vector<double> s, u;
                for (std::size_t i = 0; i < 100; ++i) {
                    s.push_back(strat[i][j]);
                    u.push_back(iid[i][j]);
                }
                better = better && max_gap(s) < max_gap(u);
            }
            wins += better;
        }
        CHECK(wins >= 90);
    }
}

TEST_CASE("initializers stay inside and are seed-deterministic") {
    const Bounds b({-1.0, 0.0, 5.0}, {1.0, 10.0, 5.5});
    RngStream a(77), c(77);
    const auto p1 = stratified_init(b, 37, a);
    const auto p2 = stratified_init(b, 37, c);
    CHECK(p1 == p2);
    for (const auto& p : p1) CHECK(b.contains(p));
    const auto u1 = uniform_init(b, 37, a);
    const auto u2 = uniform_init(b, 37, c);
    CHECK(u1 == u2);
    for (const auto& p : u1) CHECK(b.contains(p));
}

TEST_CASE("child streams") {
    CHECK(RngStream::child_seed(1, 0) == RngStream::child_seed(1, 0));
    CHECK(RngStream::child_seed(1, 0) != RngStream::child_seed(1, 1));
    CHECK(RngStream::child_seed(1, 0) != RngStream::child_seed(2, 0));
    RngStream parent(9);
    parent.uniform();
    // Derived from the seed only, not the parent's position.
    CHECK(parent.child(3).seed() == RngStream(9).child(3).seed());
}
