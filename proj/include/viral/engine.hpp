#pragma once

// Viral Search: a population of random walkers ("viruses") roams the domain;
// whenever one of them lands on a point at least as good as the global
// incumbent it launches an epidemic, a short DE run confined to a small cube
// around it. The incumbent is the best epidemic result seen so far.

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "viral/core.hpp"
#include "viral/kernels.hpp"
#include "viral/local_search.hpp"

namespace viral {

enum class Initializer { stratified, uniform };

struct VSConfig {
    std::size_t n_generations = 1000;        // N_g
    std::size_t n_viral_generations = 75;    // N_gv
    std::size_t n_individuals = 40;          // N_i
    std::size_t n_viral_individuals = 150;   // N_iv
    std::size_t centers_per_axis = 0;        // N_c; 0 disables rebalancing
    double epidemic_radius_fraction = 0.05;  // half-width of the epidemic cube per unit axis range
    double walk_step_fraction = 0.1;         // Gaussian walk stdev per unit axis range
    std::size_t rebalance_every = 10;
    double rebalance_fraction = 0.25;
    double trigger_tolerance = 1e-12;
    std::optional<std::size_t> stagnation_window;
    std::uint64_t seed = 1;
    bool time_varying = false;
    Initializer initializer = Initializer::stratified;
    Execution execution = Execution::serial;

    void validate() const;
};

struct TraceRow {
    std::uint64_t generation = 0;
    double fobj_global = std::numeric_limits<double>::infinity();
    Point best_point;  // empty until an incumbent exists
    std::uint64_t epidemics_so_far = 0;
    double elapsed_ms = 0.0;
    std::size_t worker = 0;
};

struct EngineState {
    Population population;
    std::uint64_t generation = 0;
    double fobj_global = std::numeric_limits<double>::infinity();
    std::optional<Point> best_individual_global;
    Population centers;
    std::vector<std::uint64_t> visit_counts;
    std::uint64_t epidemic_count = 0;
    std::vector<TraceRow> trace;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();
};

/// Per-worker outcome when a run is split across sub-boxes.
struct WorkerSummary {
    std::size_t worker = 0;
    Bounds box;
    std::size_t n_individuals = 0;
    Point best_point;
    double best_value = std::numeric_limits<double>::infinity();
    std::uint64_t epidemic_count = 0;
};

struct RunResult {
    Point best_point;  // empty when no generation ran
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<TraceRow> trace;
    std::uint64_t epidemic_count = 0;
    double wall_time_ms = 0.0;
    VSConfig config_echo;
    std::vector<WorkerSummary> workers;
};

/// Grid of centers_per_axis^dim points at the midpoints of equal subdivisions.
/// Rejects grids above one million centers.
Population make_centers(const Bounds& b, std::size_t centers_per_axis);

inline std::size_t nearest_center(std::span<const double> p, std::span<const Point> centers) {
    return kernels::nearest_center(p, centers);
}

EngineState init_state(const Bounds& b, const VSConfig& cfg, RngStream& rng);

/// Gaussian step of stdev walk_step_fraction * range on every axis, reflected
/// at the walls; tallies each walker's nearest center afterwards.
void move_random(EngineState& state, const Bounds& b, const VSConfig& cfg, RngStream& rng);

/// Teleport floor(rebalance_fraction * N_i) walkers from the most visited
/// centers to the least visited ones. Visit tallies are left as they are.
void rebalance(EngineState& state, const Bounds& b, const VSConfig& cfg, RngStream& rng);

/// Epidemic cube: trigger +- rho * range per axis, clipped to `b`.
Bounds epidemic_region(std::span<const double> trigger, const Bounds& b, double radius_fraction);

DEResult trigger_epidemic(std::span<const double> trigger, const Bounds& b, const VSConfig& cfg,
                          const DEConfig& de_cfg, const Objective& objective, std::uint64_t t, RngStream& rng);

/// One generation: evaluate, launch epidemics, update the incumbent, move,
/// rebalance on cadence, append a trace row.
void step(EngineState& state, const Objective& objective, const Bounds& b, const VSConfig& cfg,
          const DEConfig& de_cfg, RngStream& rng);

RunResult run(const Objective& objective, const Bounds& b, const VSConfig& cfg, const DEConfig& de_cfg = {});

}  // namespace viral
