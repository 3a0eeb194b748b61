#pragma once

#include <cstdint>
#include <optional>

#include "viral/core.hpp"
#include "viral/kernels.hpp"

namespace viral {

/// DE/rand/1/bin settings. The engine fills pop_size and generations from
/// N_iv and N_gv for each epidemic.
struct DEConfig {
    std::size_t pop_size = 150;
    std::size_t generations = 75;
    double differential_weight = 0.8;  // F
    double crossover_rate = 0.9;       // CR
    Execution execution = Execution::serial;

    void validate() const;
};

struct DEResult {
    Point best_point;
    double best_value = 0.0;
};

/// Called after each generation with the population and its values;
/// generation 0 is the initial population.
using DEObserver = std::function<void(std::size_t generation, const Population&, std::span<const double>)>;

/// Minimise `objective` at frozen time `t` inside `region` with DE/rand/1/bin.
/// When `seed_point` is given it replaces member 0 of the initial population,
/// so the returned value never exceeds objective(t, seed_point).
DEResult de_optimize(const Objective& objective, const Bounds& region, const DEConfig& cfg,
                     const std::optional<Point>& seed_point, std::uint64_t t, RngStream& rng,
                     const DEObserver& observer = {});

}  // namespace viral
