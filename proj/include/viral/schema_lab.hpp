#pragma once

// Classic binary GA (roulette selection, one-point crossover, bit mutation)
// instrumented to check the schema growth inequality
//
//   xi(S, t+1) >= xi(S, t) * eval(S, t) / Fbar(t)
//                 * (1 - p_c * delta(S) / (m - 1)) * (1 - p_m)^order(S)
//
// empirically, in expectation over independent trials.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "viral/core.hpp"

namespace viral::schema {

using BitString = std::vector<std::uint8_t>;
using FitnessFn = std::function<double(std::span<const std::uint8_t>)>;

enum class Symbol : std::uint8_t { zero, one, any };

/// No member of the population is an instance of the schema.
class NoInstancesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Schema {
public:
    explicit Schema(std::vector<Symbol> symbols);

    /// Accepts '0', '1' and '*' (or the UTF-8 star U+2605) as the wildcard.
    static Schema parse(std::string_view text);

    std::size_t length() const noexcept { return symbols_.size(); }
    const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
    std::string str() const;

private:
    std::vector<Symbol> symbols_;
};

/// Index of the last fixed symbol minus index of the first. Throws
/// ContractError for an all-wildcard schema.
std::size_t defining_length(const Schema& s);

/// Number of fixed symbols.
std::size_t order(const Schema& s);

bool matches(const Schema& s, std::span<const std::uint8_t> v);

struct BinaryPopulation {
    std::vector<BitString> members;
    FitnessFn fitness;

    std::size_t string_length() const { return members.empty() ? 0 : members.front().size(); }
    std::vector<double> evaluate() const;
};

struct GAParams {
    double p_c = 0.7;
    double p_m = 0.01;
    bool elitism = false;
    std::uint64_t seed = 1;

    void validate() const;
};

/// 1 + number of set bits; strictly positive.
double onemax_fitness(std::span<const std::uint8_t> v);

BinaryPopulation random_population(std::size_t n, std::size_t length, FitnessFn fitness, RngStream& rng);

std::size_t instance_count(const Schema& s, const BinaryPopulation& pop);

/// Mean fitness over the schema's instances in `pop`.
double schema_fitness(const Schema& s, const BinaryPopulation& pop);

/// Right-hand side of the schema growth inequality for the next generation.
double expected_count_bound(const Schema& s, const BinaryPopulation& pop, const GAParams& params);

/// Roulette selection, consecutive-pair one-point crossover with probability
/// p_c, per-bit mutation with probability p_m; with elitism the best parent
/// overwrites the worst child.
BinaryPopulation classic_ga_step(const BinaryPopulation& pop, const GAParams& params, RngStream& rng);

struct GenerationStats {
    std::size_t generation = 0;  // t; observed counts are taken at t + 1
    std::size_t valid_trials = 0;
    double mean_observed = 0.0;
    double mean_bound = 0.0;
    double mean_difference = 0.0;  // observed - bound, paired per trial
    double standard_error = 0.0;   // of mean_difference
    bool satisfied = false;        // mean_observed >= mean_bound
};

struct GrowthReport {
    std::vector<GenerationStats> generations;
    double fraction_satisfied = 0.0;  // over generations with at least one valid trial
};

/// Evolve `pop0` independently `trials` times (child streams of params.seed)
/// and compare the mean next-generation instance count with the mean bound.
/// Trials where the schema has no instance at generation t are skipped for t.
GrowthReport schema_growth_experiment(const BinaryPopulation& pop0, const Schema& s, const GAParams& params,
                                      std::size_t generations, std::size_t trials);

}  // namespace viral::schema
