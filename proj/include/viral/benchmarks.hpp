#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "viral/core.hpp"

namespace viral::bench {

enum class OptimumKind { min, max };

struct KnownOptimum {
    Point point;
    double value = 0.0;  // in the function's natural sign
    OptimumKind kind = OptimumKind::min;
};

/// A registered test function. `objective` is always the form to minimise;
/// maximisation problems are stored negated and `sense` converts back.
struct BenchmarkSpec {
    std::string name;
    std::size_t arity = 0;
    Bounds bounds;
    Objective objective;
    std::optional<KnownOptimum> optimum;
    std::map<std::string, double> parameters;
    double sense = 1.0;  // natural value = sense * minimised value

    double natural_value(double minimised) const { return sense * minimised; }
};

double sphere(std::span<const double> x);

double rosenbrock(double x, double y, double a = 1.0, double b = 100.0);

/// 0.5 + (sin^2(x^2 - y^2) - 0.5) / (1 + 0.001 (x^2 + y^2)); note the
/// denominator is not squared.
double schaffer(double x, double y);

/// Two Gaussian wells: depth 2 at (-2.5, -2.5) and depth t/tau at (2, 2).
/// The second well becomes the deeper one once t > 2 tau.
double two_well(double t, double x, double y, double tau = 1000.0);

/// Standard Shekel sum S(x) = sum_i 1 / (c_i + |x - a_i|^2) where a_i is column
/// i of `a` (a[j][i] = coordinate j of column i). Larger is better.
double shekel(std::span<const double> x, const std::vector<std::vector<double>>& a,
              std::span<const double> c);

/// The 4 x 10 matrix and weights used by the Shekel benchmark.
const std::vector<std::vector<double>>& shekel_matrix();
const std::vector<double>& shekel_weights();

std::vector<std::string> registry_names();

/// Look up a benchmark by name. `overrides` replaces named parameters
/// (a, b for rosenbrock; tau for two_well; dim for sphere).
BenchmarkSpec registry_lookup(const std::string& name, const std::map<std::string, double>& overrides = {});

}  // namespace viral::bench
