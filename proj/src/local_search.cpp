#include "viral/local_search.hpp"

#include <cmath>

namespace viral {

void DEConfig::validate() const {
    if (pop_size < 4) {
        throw ConfigError("DE population must be at least 4 (rand/1 needs three partners plus the target), got " +
                          std::to_string(pop_size));
    }
    if (generations < 1) throw ConfigError("DE generations must be positive");
    if (!(differential_weight > 0.0 && differential_weight <= 2.0)) {
        throw ConfigError("DE differential weight F must lie in (0, 2]");
    }
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
        throw ConfigError("DE crossover rate CR must lie in [0, 1]");
    }
}

DEResult de_optimize(const Objective& objective, const Bounds& region, const DEConfig& cfg,
                     const std::optional<Point>& seed_point, std::uint64_t t, RngStream& rng,
                     const DEObserver& observer) {
    cfg.validate();
    const std::size_t np = cfg.pop_size;
    const std::size_t dim = region.dim();
    if (seed_point && seed_point->size() != dim) {
        throw ContractError("de_optimize: seed point dimension does not match region");
    }

    Population pop = uniform_init(region, np, rng);
    if (seed_point) pop[0] = *seed_point;
    std::vector<double> fitness(np);
    kernels::evaluate(cfg.execution, objective, t, pop, fitness);
    if (observer) observer(0, pop, fitness);

    Population trials(np, Point(dim));
    std::vector<double> trial_fitness(np);
    for (std::size_t g = 1; g <= cfg.generations; ++g) {
        // Trial construction consumes the stream in target order; evaluation
        // may then run in parallel without changing the draws.
        for (std::size_t i = 0; i < np; ++i) {
            std::size_t r1, r2, r3;
            do { r1 = rng.index(np); } while (r1 == i);
            do { r2 = rng.index(np); } while (r2 == i || r2 == r1);
            do { r3 = rng.index(np); } while (r3 == i || r3 == r1 || r3 == r2);
            const std::size_t forced = rng.index(dim);
            Point& trial = trials[i];
            for (std::size_t j = 0; j < dim; ++j) {
                if (j == forced || rng.uniform() < cfg.crossover_rate) {
                    trial[j] = pop[r1][j] + cfg.differential_weight * (pop[r2][j] - pop[r3][j]);
                } else {
                    trial[j] = pop[i][j];
                }
            }
            trial = clamp_to_bounds(trial, region);
        }
        kernels::evaluate(cfg.execution, objective, t, trials, trial_fitness);
        for (std::size_t i = 0; i < np; ++i) {
            // Accept ties so the population can drift across plateaus.
            if (trial_fitness[i] <= fitness[i]) {
                pop[i].swap(trials[i]);
                fitness[i] = trial_fitness[i];
            }
        }
        if (observer) observer(g, pop, fitness);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < np; ++i) {
        if (fitness[i] < fitness[best]) best = i;
    }
    return {pop[best], fitness[best]};
}

}  // namespace viral
