#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "viral/benchmarks.hpp"
#include "viral/engine.hpp"

using namespace viral;
using doctest::Approx;

namespace {

const Bounds box3 = Bounds::cube(2, -3.0, 3.0);

const Objective sphere2{2, [](std::uint64_t, std::span<const double> x) { return bench::sphere(x); }};

VSConfig small_config(std::size_t ni, std::size_t ng) {
    VSConfig c;
    c.n_individuals = ni;
    c.n_generations = ng;
    c.n_viral_individuals = 20;
    c.n_viral_generations = 20;
    return c;
}

bool same_trace(const std::vector<TraceRow>& a, const std::vector<TraceRow>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].generation != b[i].generation || a[i].fobj_global != b[i].fobj_global ||
            a[i].best_point != b[i].best_point || a[i].epidemics_so_far != b[i].epidemics_so_far) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("make_centers") {
    const auto one = make_centers(Bounds::cube(2, 0, 1), 1);
    CHECK(one == Population{{0.5, 0.5}});

    const auto grid = make_centers(box3, 7);
    CHECK(grid.size() == 49);
    std::vector<double> axis;
    for (const auto& c : grid) axis.push_back(c[0]);
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    REQUIRE(axis.size() == 7);
    for (int k = 0; k < 7; ++k) CHECK(axis[k] == Approx(-3.0 + (k + 0.5) * 6.0 / 7.0).epsilon(1e-14));
    CHECK(axis[0] == Approx(-2.571428571).epsilon(1e-9));
    CHECK(axis[1] == Approx(-1.714285714).epsilon(1e-9));
    CHECK(std::abs(axis[3]) < 1e-15);

    CHECK_THROWS_AS(make_centers(box3, 0), ConfigError);
    try {
        make_centers(Bounds::cube(8, 0, 1), 7);  // 7^8 > 10^6
        FAIL("expected overflow error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("fewer centers") != std::string::npos);
    }
}

TEST_CASE("move_random") {
    RngStream rng(3);
    VSConfig cfg = small_config(1, 1);

    SUBCASE("tiny steps") {
        cfg.walk_step_fraction = 1e-12;
        EngineState s;
        s.population = {{0.5, -0.5}};
        for (int i = 0; i < 100; ++i) {
            const Point before = s.population[0];
            move_random(s, box3, cfg, rng);
            CHECK(std::abs(s.population[0][0] - before[0]) < 1e-9 * 6.0);
            CHECK(std::abs(s.population[0][1] - before[1]) < 1e-9 * 6.0);
        }
    }
    SUBCASE("stays inside over 10^5 moves") {
        cfg.walk_step_fraction = 0.5;
        EngineState s;
        s.population = {{2.9, -2.9}, {0, 0}, {-3, 3}, {1, 1}, {0, 2}};
        bool inside = true;
        for (int i = 0; i < 20000; ++i) {
            move_random(s, box3, cfg, rng);
            for (const auto& p : s.population) inside = inside && box3.contains(p);
        }
        CHECK(inside);
    }
    SUBCASE("step stdev is s * range") {
        cfg.walk_step_fraction = 0.1;
        EngineState s;
        s.population.assign(100000, Point{0.0, 0.0});
        move_random(s, box3, cfg, rng);
        for (std::size_t j = 0; j < 2; ++j) {
            double sum = 0, sum2 = 0;
            for (const auto& p : s.population) {
                sum += p[j];
                sum2 += p[j] * p[j];
            }
            const double n = double(s.population.size());
            const double sd = std::sqrt(sum2 / n - (sum / n) * (sum / n));
            CHECK(sd == Approx(0.6).epsilon(0.02 / 0.6));
        }
    }
    SUBCASE("visit counts") {
        cfg.centers_per_axis = 2;
        RngStream r2(1);
        EngineState s = init_state(box3, small_config(10, 1), r2);
        CHECK(s.centers.empty());
        VSConfig with_centers = small_config(10, 1);
        with_centers.centers_per_axis = 2;
        s = init_state(box3, with_centers, r2);
        REQUIRE(s.centers.size() == 4);
        move_random(s, box3, with_centers, r2);
        std::uint64_t total = 0;
        for (auto v : s.visit_counts) total += v;
        CHECK(total == 10);
    }
}

TEST_CASE("rebalance") {
    RngStream rng(17);
    VSConfig cfg = small_config(8, 1);
    cfg.centers_per_axis = 2;
    const Bounds line({-3.0}, {3.0});

    SUBCASE("zero fraction is a no-op") {
        cfg.rebalance_fraction = 0.0;
        EngineState s = init_state(box3, cfg, rng);
        s.visit_counts = {10, 0, 0, 0};
        const auto before = s.population;
        rebalance(s, box3, cfg, rng);
        CHECK(s.population == before);
    }
    SUBCASE("equal counts conserve the population") {
        cfg.rebalance_fraction = 0.5;
        EngineState s = init_state(box3, cfg, rng);
        s.visit_counts = {3, 3, 3, 3};
        const auto counts = s.visit_counts;
        rebalance(s, box3, cfg, rng);
        CHECK(s.population.size() == 8);
        CHECK(s.visit_counts == counts);
        for (const auto& p : s.population) CHECK(box3.contains(p));
    }
    SUBCASE("walkers leave the crowded center for the empty one") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            RngStream r(seed);
            cfg.rebalance_fraction = 0.25;
            cfg.n_individuals = 12;
            EngineState s;
            s.centers = make_centers(line, 2);  // -1.5 and 1.5
            s.visit_counts = {100, 0};
            for (int i = 0; i < 12; ++i) s.population.push_back(Point{r.uniform(-3.0, -0.5)});
            rebalance(s, line, cfg, r);
            const auto k = static_cast<std::size_t>(std::floor(0.25 * 12));
            const auto near_one = std::count_if(s.population.begin(), s.population.end(),
                                                [](const Point& p) { return p[0] > 0.0; });
            CHECK(static_cast<std::size_t>(near_one) >= k);
            CHECK(s.population.size() == 12);
        }
    }
}

TEST_CASE("epidemic region and trigger") {
    const VSConfig cfg = small_config(10, 1);
    SUBCASE("corner trigger is clipped but non-degenerate") {
        const Bounds r = epidemic_region(Point{3.0, -3.0}, box3, 0.05);
        CHECK(r.lower() == Point{2.7, -3.0});
        CHECK(r.upper()[1] == Approx(-2.7));
        CHECK(r.upper()[0] == 3.0);
    }
    SUBCASE("rho = 1 covers the domain") {
        CHECK(epidemic_region(Point{0.3, -1.2}, box3, 1.0) == box3);
    }
    SUBCASE("rosenbrock trigger improves") {
        VSConfig c = cfg;
        c.n_viral_individuals = 150;
        c.n_viral_generations = 75;
        const auto ros = bench::registry_lookup("rosenbrock");
        RngStream rng(2);
        const auto r = trigger_epidemic(Point{1.2, 1.4}, box3, c, DEConfig{}, ros.objective, 0, rng);
        CHECK(r.best_value < 0.2);
        CHECK(epidemic_region(Point{1.2, 1.4}, box3, 0.05).contains(r.best_point));
    }
    SUBCASE("trigger outside bounds") {
        RngStream rng(2);
        CHECK_THROWS_AS(trigger_epidemic(Point{4.0, 0.0}, box3, cfg, DEConfig{}, sphere2, 0, rng), ContractError);
    }
}

TEST_CASE("step") {
    SUBCASE("constant objective triggers exactly once") {
        const Objective five{2, [](std::uint64_t, std::span<const double>) { return 5.0; }};
        RngStream rng(1);
        VSConfig cfg = small_config(10, 1);
        EngineState s = init_state(box3, cfg, rng);
        step(s, five, box3, cfg, DEConfig{}, rng);
        CHECK(s.epidemic_count == 1);
        CHECK(s.fobj_global == 5.0);
        REQUIRE(s.trace.size() == 1);
        CHECK(s.trace[0].generation == 0);
        CHECK(s.generation == 1);
    }
    SUBCASE("no epidemics once the global minimum is held") {
        const auto ros = bench::registry_lookup("rosenbrock");
        RngStream rng(1);
        VSConfig cfg = small_config(30, 1);
        EngineState s = init_state(box3, cfg, rng);
        s.fobj_global = 0.0;
        s.best_individual_global = Point{1.0, 1.0};
        step(s, ros.objective, box3, cfg, DEConfig{}, rng);
        CHECK(s.epidemic_count == 0);
        CHECK(s.fobj_global == 0.0);
    }
    SUBCASE("sphere: incumbent beats the initial sweep") {
        RngStream rng(42);
        VSConfig cfg = small_config(40, 1);
        EngineState s = init_state(box3, cfg, rng);
        double initial_min = std::numeric_limits<double>::infinity();
        for (const auto& p : s.population) initial_min = std::min(initial_min, bench::sphere(p));
        step(s, sphere2, box3, cfg, DEConfig{}, rng);
        CHECK(s.fobj_global <= initial_min);
    }
    SUBCASE("NaN aborts with the point") {
        const Objective bad{2, [](std::uint64_t, std::span<const double>) {
                                return std::numeric_limits<double>::quiet_NaN();
                            }};
        RngStream rng(1);
        VSConfig cfg = small_config(3, 1);
        EngineState s = init_state(box3, cfg, rng);
        try {
            step(s, bad, box3, cfg, DEConfig{}, rng);
            FAIL("expected EvaluationError");
        } catch (const EvaluationError& e) {
            CHECK(std::string(e.what()).find("NaN") != std::string::npos);
            CHECK(std::string(e.what()).find('(') != std::string::npos);
        }
    }
}

TEST_CASE("run") {
    SUBCASE("N_g = 0") {
        const auto r = run(sphere2, box3, small_config(5, 0));
        CHECK(std::isinf(r.best_value));
        CHECK(r.best_point.empty());
        CHECK(r.trace.empty());
    }
    SUBCASE("sphere converges") {
        for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
            VSConfig c = small_config(60, 300);
            c.n_viral_individuals = 40;
            c.n_viral_generations = 40;
            c.seed = seed;
            const auto r = run(sphere2, box3, c);
            CHECK(r.best_value < 1e-3);
            CHECK(r.best_value == bench::sphere(r.best_point));
        }
    }
    SUBCASE("reproducible and independent of the execution mode") {
        const auto ros = bench::registry_lookup("rosenbrock");
        VSConfig c = small_config(20, 40);
        c.centers_per_axis = 3;
        c.seed = 99;
        const auto a = run(ros.objective, ros.bounds, c);
        const auto b = run(ros.objective, ros.bounds, c);
        c.execution = Execution::openmp;
        const auto d = run(ros.objective, ros.bounds, c);
        CHECK(same_trace(a.trace, b.trace));
        CHECK(same_trace(a.trace, d.trace));
        CHECK(a.best_point == d.best_point);
    }
    SUBCASE("stagnation window stops early") {
        VSConfig c = small_config(10, 500);
        c.stagnation_window = 5;
        const Objective five{2, [](std::uint64_t, std::span<const double>) { return 5.0; }};
        const auto r = run(five, box3, c);
        CHECK(r.trace.size() == 6);
        CHECK(r.epidemic_count == 1);
    }
    SUBCASE("time-varying incumbent is re-evaluated") {
        const auto tw = bench::registry_lookup("two_well", {{"tau", 50.0}});
        VSConfig c = small_config(30, 300);
        c.n_viral_individuals = 30;
        c.n_viral_generations = 30;
        const auto r = run(tw.objective, tw.bounds, c);
        REQUIRE(!r.best_point.empty());
        // best_value matches the objective at the last generation's t.
        CHECK(r.best_value == tw.objective(r.trace.back().generation, r.best_point));
        CHECK(std::hypot(r.best_point[0] - 2.0, r.best_point[1] - 2.0) < 0.3);
    }
    SUBCASE("invalid configuration") {
        VSConfig c = small_config(10, 10);
        c.epidemic_radius_fraction = 0.0;
        CHECK_THROWS_AS(run(sphere2, box3, c), ConfigError);
        c = small_config(10, 10);
        c.n_viral_individuals = 3;
        CHECK_THROWS_AS(run(sphere2, box3, c), ConfigError);
        c = small_config(0, 10);
        CHECK_THROWS_AS(run(sphere2, box3, c), ConfigError);
    }
}

TEST_CASE("engine invariants on random configurations") {
    RngStream meta(2024);
    const auto ros = bench::registry_lookup("rosenbrock");
    for (int trial = 0; trial < 60; ++trial) {
        VSConfig c;
        c.n_individuals = 1 + meta.index(8);
        c.n_generations = 1 + meta.index(12);
        c.n_viral_individuals = 4 + meta.index(6);
        c.n_viral_generations = 1 + meta.index(4);
        c.centers_per_axis = meta.index(4);
        c.rebalance_every = 1 + meta.index(3);
        c.rebalance_fraction = meta.uniform();
        c.walk_step_fraction = 0.01 + 0.5 * meta.uniform();
        c.epidemic_radius_fraction = 0.01 + 0.3 * meta.uniform();
        c.seed = meta.index(1u << 30);
        RngStream rng(c.seed);
        EngineState s = init_state(ros.bounds, c, rng);
        double last = std::numeric_limits<double>::infinity();
        for (std::size_t g = 0; g < c.n_generations; ++g) {
            step(s, ros.objective, ros.bounds, c, DEConfig{}, rng);
            CHECK(s.population.size() == c.n_individuals);
            for (const auto& p : s.population) CHECK(ros.bounds.contains(p));
            if (s.best_individual_global) CHECK(ros.bounds.contains(*s.best_individual_global));
            CHECK(s.fobj_global <= last);
            last = s.fobj_global;
        }
    }
}
