#include "viral/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace viral {

namespace {

constexpr std::size_t kMaxCenters = 1'000'000;

double elapsed_ms(const EngineState& s) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - s.started).count();
}

bool centers_active(const EngineState& s) { return !s.centers.empty(); }

}  // namespace

void VSConfig::validate() const {
    if (n_viral_generations < 1) throw ConfigError("N_gv must be positive");
    if (n_individuals < 1) throw ConfigError("N_i must be positive");
    if (n_viral_individuals < 1) throw ConfigError("N_iv must be positive");
    if (!(epidemic_radius_fraction > 0.0 && epidemic_radius_fraction <= 1.0)) {
        throw ConfigError("epidemic radius fraction must lie in (0, 1]");
    }
    if (!(walk_step_fraction > 0.0 && walk_step_fraction <= 1.0)) {
        throw ConfigError("walk step fraction must lie in (0, 1]");
    }
    if (rebalance_every < 1) throw ConfigError("rebalance cadence must be positive");
    if (!(rebalance_fraction >= 0.0 && rebalance_fraction <= 1.0)) {
        throw ConfigError("rebalance fraction must lie in [0, 1]");
    }
    if (!(trigger_tolerance >= 0.0)) throw ConfigError("trigger tolerance must be non-negative");
    if (stagnation_window && *stagnation_window < 1) throw ConfigError("stagnation window must be positive");
}

Population make_centers(const Bounds& b, std::size_t centers_per_axis) {
    if (centers_per_axis < 1) throw ConfigError("make_centers: need at least one center per axis");
    std::size_t total = 1;
    for (std::size_t j = 0; j < b.dim(); ++j) {
        if (total > kMaxCenters / centers_per_axis) {
            throw ConfigError("center grid of " + std::to_string(centers_per_axis) + "^" + std::to_string(b.dim()) +
                              " points exceeds the limit of 10^6 centers; the count grows exponentially with the "
                              "number of parameters, so use fewer centers per axis or split the domain with "
                              "--parallel");
        }
        total *= centers_per_axis;
    }
    Population centers(total, Point(b.dim()));
    for (std::size_t k = 0; k < total; ++k) {
        std::size_t rest = k;
        // Last axis varies fastest.
        for (std::size_t jj = b.dim(); jj-- > 0;) {
            const std::size_t cell = rest % centers_per_axis;
            rest /= centers_per_axis;
            centers[k][jj] = b.lower()[jj] + (static_cast<double>(cell) + 0.5) * b.range(jj) /
                                                 static_cast<double>(centers_per_axis);
        }
    }
    return centers;
}

EngineState init_state(const Bounds& b, const VSConfig& cfg, RngStream& rng) {
    EngineState s;
    s.population = cfg.initializer == Initializer::stratified ? stratified_init(b, cfg.n_individuals, rng)
                                                              : uniform_init(b, cfg.n_individuals, rng);
    if (cfg.centers_per_axis > 0) {
        s.centers = make_centers(b, cfg.centers_per_axis);
        s.visit_counts.assign(s.centers.size(), 0);
    }
    s.started = std::chrono::steady_clock::now();
    return s;
}

void move_random(EngineState& state, const Bounds& b, const VSConfig& cfg, RngStream& rng) {
    for (Point& p : state.population) {
        for (std::size_t j = 0; j < p.size(); ++j) {
            p[j] += cfg.walk_step_fraction * b.range(j) * rng.normal();
        }
        p = reflect_into_bounds(p, b);
    }
    if (centers_active(state)) {
        std::vector<std::size_t> nearest(state.population.size());
        kernels::assign_centers(cfg.execution, state.population, state.centers, nearest);
        for (std::size_t k : nearest) ++state.visit_counts[k];
    }
}

void rebalance(EngineState& state, const Bounds& b, const VSConfig& cfg, RngStream& rng) {
    if (!centers_active(state) || state.population.empty()) return;
    const auto k = static_cast<std::size_t>(std::floor(cfg.rebalance_fraction * state.population.size()));
    if (k == 0) return;

    const auto& counts = state.visit_counts;
    std::vector<std::size_t> nearest(state.population.size());
    kernels::assign_centers(cfg.execution, state.population, state.centers, nearest);

    // Walkers sitting at the most visited centers leave first.
    std::vector<std::size_t> movers(state.population.size());
    std::iota(movers.begin(), movers.end(), std::size_t{0});
    std::stable_sort(movers.begin(), movers.end(), [&](std::size_t a, std::size_t c) {
        if (counts[nearest[a]] != counts[nearest[c]]) return counts[nearest[a]] > counts[nearest[c]];
        return nearest[a] < nearest[c];
    });
    movers.resize(k);

    // Destinations: least visited first. Centers at the maximum tally are
    // excluded unless every center is tied.
    std::vector<std::size_t> dest(state.centers.size());
    std::iota(dest.begin(), dest.end(), std::size_t{0});
    std::stable_sort(dest.begin(), dest.end(),
                     [&](std::size_t a, std::size_t c) { return counts[a] < counts[c]; });
    const std::uint64_t max_count = *std::max_element(counts.begin(), counts.end());
    const std::uint64_t min_count = *std::min_element(counts.begin(), counts.end());
    if (min_count != max_count) {
        std::erase_if(dest, [&](std::size_t c) { return counts[c] == max_count; });
    }

    const double n_c = static_cast<double>(cfg.centers_per_axis);
    for (std::size_t m = 0; m < movers.size(); ++m) {
        const Point& center = state.centers[dest[m % dest.size()]];
        Point lo(b.dim()), hi(b.dim()), p(b.dim());
        for (std::size_t j = 0; j < b.dim(); ++j) {
            const double spacing = b.range(j) / n_c;
            lo[j] = center[j] - 0.5 * spacing;
            hi[j] = center[j] + 0.5 * spacing;
            p[j] = center[j] + 0.5 * spacing * rng.normal();
        }
        // Keep the teleported walker inside its destination's grid cell.
        state.population[movers[m]] = clamp_to_bounds(reflect_into_bounds(p, Bounds(lo, hi)), b);
    }
}

Bounds epidemic_region(std::span<const double> trigger, const Bounds& b, double radius_fraction) {
    if (trigger.size() != b.dim()) throw ContractError("epidemic_region: trigger dimension mismatch");
    Point lo(b.dim()), hi(b.dim());
    for (std::size_t j = 0; j < b.dim(); ++j) {
        const double half = radius_fraction * b.range(j);
        lo[j] = std::max(b.lower()[j], trigger[j] - half);
        hi[j] = std::min(b.upper()[j], trigger[j] + half);
    }
    // Bounds rejects a collapsed interval.
    return Bounds(std::move(lo), std::move(hi));
}

DEResult trigger_epidemic(std::span<const double> trigger, const Bounds& b, const VSConfig& cfg,
                          const DEConfig& de_cfg, const Objective& objective, std::uint64_t t, RngStream& rng) {
    if (!b.contains(trigger)) throw ContractError("trigger_epidemic: trigger " + format_point(trigger) + " outside bounds");
    DEConfig local = de_cfg;
    local.pop_size = cfg.n_viral_individuals;
    local.generations = cfg.n_viral_generations;
    local.execution = cfg.execution;
    const Bounds region = epidemic_region(trigger, b, cfg.epidemic_radius_fraction);
    return de_optimize(objective, region, local, Point(trigger.begin(), trigger.end()), t, rng);
}

void step(EngineState& state, const Objective& objective, const Bounds& b, const VSConfig& cfg,
          const DEConfig& de_cfg, RngStream& rng) {
    if (objective.arity != b.dim()) throw ContractError("step: objective arity does not match bounds");
    const std::uint64_t t = state.generation;
    const bool time_varying = cfg.time_varying || objective.time_varying;

    if (time_varying && state.best_individual_global) {
        // A stale incumbent value would pin the search to a well that may no
        // longer be the deepest.
        const double fresh = objective(t, *state.best_individual_global);
        if (std::isnan(fresh)) {
            throw EvaluationError("objective returned NaN at generation " + std::to_string(t) + " for point " +
                                  format_point(*state.best_individual_global));
        }
        state.fobj_global = fresh;
    }

    std::vector<double> values(state.population.size());
    kernels::evaluate(cfg.execution, objective, t, state.population, values);

    for (std::size_t i = 0; i < state.population.size(); ++i) {
        // Strict margin: a literal "<=" re-triggers forever once converged.
        if (!(values[i] <= state.fobj_global - cfg.trigger_tolerance)) continue;
        const DEResult outbreak = trigger_epidemic(state.population[i], b, cfg, de_cfg, objective, t, rng);
        ++state.epidemic_count;
        // Second comparison of the loop body, read as testing the epidemic's
        // result rather than repeating the trigger test.
        if (outbreak.best_value <= state.fobj_global) {
            state.fobj_global = outbreak.best_value;
            state.best_individual_global = outbreak.best_point;
        }
    }

    move_random(state, b, cfg, rng);
    // Rebalance after every `rebalance_every` walks.
    if (centers_active(state) && (t + 1) % cfg.rebalance_every == 0) rebalance(state, b, cfg, rng);

    state.trace.push_back(TraceRow{t, state.fobj_global, state.best_individual_global.value_or(Point{}),
                                   state.epidemic_count, elapsed_ms(state), 0});
    ++state.generation;
}

RunResult run(const Objective& objective, const Bounds& b, const VSConfig& cfg, const DEConfig& de_cfg) {
    cfg.validate();
    DEConfig de = de_cfg;
    de.pop_size = cfg.n_viral_individuals;
    de.generations = cfg.n_viral_generations;
    de.validate();
    if (objective.arity != b.dim()) throw ConfigError("objective arity does not match the bounds dimension");

    RngStream rng(cfg.seed);
    EngineState state = init_state(b, cfg, rng);

    double reference = state.fobj_global;
    std::uint64_t last_improvement = 0;
    while (state.generation < cfg.n_generations) {
        step(state, objective, b, cfg, de, rng);
        if (state.fobj_global < reference - cfg.trigger_tolerance || std::isinf(reference)) {
            reference = state.fobj_global;
            last_improvement = state.generation;
        }
        if (cfg.stagnation_window && state.generation - last_improvement >= *cfg.stagnation_window) break;
    }

    RunResult result;
    result.best_point = state.best_individual_global.value_or(Point{});
    result.best_value = state.fobj_global;
    result.trace = std::move(state.trace);
    result.epidemic_count = state.epidemic_count;
    result.wall_time_ms = elapsed_ms(state);
    result.config_echo = cfg;
    return result;
}

}  // namespace viral
