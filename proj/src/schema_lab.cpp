#include "viral/schema_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace viral::schema {

Schema::Schema(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw ContractError("schema must have length >= 1");
}

Schema Schema::parse(std::string_view text) {
    static constexpr std::string_view star = "\xE2\x98\x85";
    std::vector<Symbol> out;
    for (std::size_t i = 0; i < text.size();) {
        const char c = text[i];
        if (c == '0') {
            out.push_back(Symbol::zero);
        } else if (c == '1') {
            out.push_back(Symbol::one);
        } else if (c == '*') {
            out.push_back(Symbol::any);
        } else if (text.substr(i, star.size()) == star) {
            out.push_back(Symbol::any);
            i += star.size();
            continue;
        } else if (c == ',' || c == ' ' || c == '(' || c == ')') {
            // tolerate "(*,0,1)"
        } else {
            throw ContractError("invalid schema symbol '" + std::string(1, c) + "' in \"" + std::string(text) + "\"");
        }
        ++i;
    }
    return Schema(std::move(out));
}

std::string Schema::str() const {
    std::string s;
    for (Symbol sym : symbols_) s += sym == Symbol::zero ? '0' : sym == Symbol::one ? '1' : '*';
    return s;
}

std::size_t defining_length(const Schema& s) {
    const auto& sym = s.symbols();
    const auto fixed = [](Symbol x) { return x != Symbol::any; };
    const auto first = std::find_if(sym.begin(), sym.end(), fixed);
    if (first == sym.end()) throw ContractError("defining length is undefined for an all-wildcard schema");
    const auto last = std::find_if(sym.rbegin(), sym.rend(), fixed);
    return static_cast<std::size_t>(std::distance(first, last.base()) - 1);
}

std::size_t order(const Schema& s) {
    return static_cast<std::size_t>(
        std::count_if(s.symbols().begin(), s.symbols().end(), [](Symbol x) { return x != Symbol::any; }));
}

bool matches(const Schema& s, std::span<const std::uint8_t> v) {
    if (v.size() != s.length()) {
        throw ContractError("matches: schema length " + std::to_string(s.length()) + " vs string length " +
                            std::to_string(v.size()));
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Symbol sym = s.symbols()[i];
        if (sym == Symbol::any) continue;
        if ((sym == Symbol::one) != (v[i] != 0)) return false;
    }
    return true;
}

std::vector<double> BinaryPopulation::evaluate() const {
    std::vector<double> f(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        f[i] = fitness(members[i]);
        if (!(f[i] > 0.0)) throw ContractError("fitness must be strictly positive");
    }
    return f;
}

void GAParams::validate() const {
    if (!(p_c >= 0.0 && p_c <= 1.0)) throw ConfigError("p_c must lie in [0, 1]");
    if (!(p_m >= 0.0 && p_m <= 1.0)) throw ConfigError("p_m must lie in [0, 1]");
}

double onemax_fitness(std::span<const std::uint8_t> v) {
    return 1.0 + static_cast<double>(std::count_if(v.begin(), v.end(), [](std::uint8_t b) { return b != 0; }));
}

BinaryPopulation random_population(std::size_t n, std::size_t length, FitnessFn fitness, RngStream& rng) {
    BinaryPopulation pop{std::vector<BitString>(n, BitString(length)), std::move(fitness)};
    for (auto& m : pop.members) {
        for (auto& bit : m) bit = rng.bernoulli(0.5) ? 1 : 0;
    }
    return pop;
}

std::size_t instance_count(const Schema& s, const BinaryPopulation& pop) {
    return static_cast<std::size_t>(
        std::count_if(pop.members.begin(), pop.members.end(), [&](const BitString& v) { return matches(s, v); }));
}

double schema_fitness(const Schema& s, const BinaryPopulation& pop) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& v : pop.members) {
        if (!matches(s, v)) continue;
        sum += pop.fitness(v);
        ++n;
    }
    if (n == 0) throw NoInstancesError("schema " + s.str() + " has no instances in the population");
    return sum / static_cast<double>(n);
}

double expected_count_bound(const Schema& s, const BinaryPopulation& pop, const GAParams& params) {
    const std::size_t m = s.length();
    if (m < 2) throw ContractError("expected_count_bound needs string length >= 2");
    const double xi = static_cast<double>(instance_count(s, pop));
    const double eval_s = schema_fitness(s, pop);
    const auto f = pop.evaluate();
    const double mean_fitness = std::accumulate(f.begin(), f.end(), 0.0) / static_cast<double>(f.size());
    // p_c (not p_cs) inside the crossover factor, as in the survival bound.
    const double crossover_survival =
        1.0 - params.p_c * static_cast<double>(defining_length(s)) / static_cast<double>(m - 1);
    const double mutation_survival = std::pow(1.0 - params.p_m, static_cast<double>(order(s)));
    return xi * (eval_s / mean_fitness) * crossover_survival * mutation_survival;
}

BinaryPopulation classic_ga_step(const BinaryPopulation& pop, const GAParams& params, RngStream& rng) {
    params.validate();
    const std::size_t n = pop.members.size();
    const std::size_t m = pop.string_length();
    if (n == 0) return pop;
    const auto f = pop.evaluate();

    std::vector<double> cumulative(n);
    std::partial_sum(f.begin(), f.end(), cumulative.begin());
    const double total = cumulative.back();

    BinaryPopulation next{{}, pop.fitness};
    next.members.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        next.members.push_back(pop.members[static_cast<std::size_t>(it - cumulative.begin())]);
    }

    if (m >= 2) {
        for (std::size_t i = 0; i + 1 < n; i += 2) {
            if (!rng.bernoulli(params.p_c)) continue;
            const std::size_t cut = 1 + rng.index(m - 1);
            auto& a = next.members[i];
            auto& b = next.members[i + 1];
            std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(cut), a.end(),
                             b.begin() + static_cast<std::ptrdiff_t>(cut));
        }
    }

    for (auto& v : next.members) {
        for (auto& bit : v) {
            if (rng.bernoulli(params.p_m)) bit ^= 1;
        }
    }

    if (params.elitism) {
        const auto best_parent = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
        const auto cf = next.evaluate();
        const auto worst_child = static_cast<std::size_t>(std::min_element(cf.begin(), cf.end()) - cf.begin());
        next.members[worst_child] = pop.members[best_parent];
    }
    return next;
}

GrowthReport schema_growth_experiment(const BinaryPopulation& pop0, const Schema& s, const GAParams& params,
                                      std::size_t generations, std::size_t trials) {
    params.validate();
    if (pop0.string_length() != s.length()) throw ContractError("schema and population string lengths differ");
    if (instance_count(s, pop0) == 0) throw NoInstancesError("schema " + s.str() + " is not instantiated in pop0");

    // observed[k][t], bound[k][t]; bound is NaN where xi(S, t) = 0.
    std::vector<std::vector<double>> observed(trials, std::vector<double>(generations));
    std::vector<std::vector<double>> bound(trials, std::vector<double>(generations));
    const RngStream root(params.seed);
    const auto n_trials = static_cast<std::ptrdiff_t>(trials);

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < n_trials; ++k) {
        RngStream rng = root.child(static_cast<std::uint64_t>(k));
        BinaryPopulation pop = pop0;
        for (std::size_t t = 0; t < generations; ++t) {
            bound[k][t] = instance_count(s, pop) > 0 ? expected_count_bound(s, pop, params)
                                                     : std::numeric_limits<double>::quiet_NaN();
            pop = classic_ga_step(pop, params, rng);
            observed[k][t] = static_cast<double>(instance_count(s, pop));
        }
    }

    GrowthReport report;
    std::size_t counted = 0, satisfied = 0;
    for (std::size_t t = 0; t < generations; ++t) {
        GenerationStats g;
        g.generation = t;
        double sum_obs = 0.0, sum_bound = 0.0, sum_d = 0.0, sum_d2 = 0.0;
        for (std::size_t k = 0; k < trials; ++k) {
            if (std::isnan(bound[k][t])) continue;
            const double d = observed[k][t] - bound[k][t];
            sum_obs += observed[k][t];
            sum_bound += bound[k][t];
            sum_d += d;
            sum_d2 += d * d;
            ++g.valid_trials;
        }
        if (g.valid_trials > 0) {
            const double n = static_cast<double>(g.valid_trials);
            g.mean_observed = sum_obs / n;
            g.mean_bound = sum_bound / n;
            g.mean_difference = sum_d / n;
            if (g.valid_trials > 1) {
                const double var = std::max(0.0, (sum_d2 - n * g.mean_difference * g.mean_difference) / (n - 1.0));
                g.standard_error = std::sqrt(var / n);
            }
            g.satisfied = g.mean_observed >= g.mean_bound;
            ++counted;
            if (g.satisfied) ++satisfied;
        }
        report.generations.push_back(g);
    }
    report.fraction_satisfied = counted ? static_cast<double>(satisfied) / static_cast<double>(counted) : 0.0;
    return report;
}

}  // namespace viral::schema
