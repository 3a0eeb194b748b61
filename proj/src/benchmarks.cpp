#include "viral/benchmarks.hpp"

#include <cmath>
#include <numbers>

namespace viral::bench {

namespace {

void require_arity(std::span<const double> x, std::size_t n, const char* name) {
    if (x.size() != n) {
        throw ContractError(std::string(name) + " expects " + std::to_string(n) + " coordinates, got " +
                            std::to_string(x.size()));
    }
}

double param_or(const std::map<std::string, double>& m, const std::string& key, double fallback) {
    const auto it = m.find(key);
    return it == m.end() ? fallback : it->second;
}

}  // namespace

double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

double rosenbrock(double x, double y, double a, double b) {
    const double u = a - x;
    const double v = y - x * x;
    return u * u + b * v * v;
}

double schaffer(double x, double y) {
    const double s = std::sin(x * x - y * y);
    return 0.5 + (s * s - 0.5) / (1.0 + 0.001 * (x * x + y * y));
}

double two_well(double t, double x, double y, double tau) {
    // Printed with positive exponents, which would make the function unbounded
    // on the domain; the wells described (depth 2 at (-2.5,-2.5), growing
    // well at (2,2)) require the negative sign used here.
    const double r1 = (x + 2.5) * (x + 2.5) + (y + 2.5) * (y + 2.5);
    const double r2 = (x - 2.0) * (x - 2.0) + (y - 2.0) * (y - 2.0);
    return -2.0 * std::exp(-r1) - (t / tau) * std::exp(-r2);
}

double shekel(std::span<const double> x, const std::vector<std::vector<double>>& a,
              std::span<const double> c) {
    if (a.size() != x.size()) throw ContractError("shekel: matrix rows must equal the point dimension");
    double total = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (a[j].size() != c.size()) throw ContractError("shekel: matrix columns must equal weight count");
            const double diff = x[j] - a[j][i];
            d2 += diff * diff;
        }
        // c_i is added to the squared distance; a product would put a pole at
        // every column and contradict the finite maximum near (4, 4, 4, 4).
        total += 1.0 / (c[i] + d2);
    }
    return total;
}

const std::vector<std::vector<double>>& shekel_matrix() {
    static const std::vector<std::vector<double>> a = {
        {4, 1, 8, 6, 3, 2, 5, 8, 6, 7},
        {4, 1, 8, 6, 7, 9, 5, 1, 2, 3.6},
        {4, 1, 8, 6, 3, 2, 5, 8, 6, 7},
        {4, 1, 8, 6, 7, 9, 3, 1, 2, 3},
    };
    return a;
}

const std::vector<double>& shekel_weights() {
    static const std::vector<double> c = {0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5};
    return c;
}

std::vector<std::string> registry_names() { return {"sphere", "rosenbrock", "schaffer", "two_well", "shekel"}; }

BenchmarkSpec registry_lookup(const std::string& name, const std::map<std::string, double>& overrides) {
    if (name == "sphere") {
        const auto dim = static_cast<std::size_t>(param_or(overrides, "dim", 2.0));
        if (dim < 1) throw ConfigError("sphere: dim must be at least 1");
        Objective f{dim, [](std::uint64_t, std::span<const double> x) { return sphere(x); }, false};
        return {"sphere", dim, Bounds::cube(dim, -3.0, 3.0), std::move(f),
                KnownOptimum{Point(dim, 0.0), 0.0, OptimumKind::min}, {{"dim", double(dim)}}, 1.0};
    }
    if (name == "rosenbrock") {
        const double a = param_or(overrides, "a", 1.0);
        const double b = param_or(overrides, "b", 100.0);
        Objective f{2,
                    [a, b](std::uint64_t, std::span<const double> x) {
                        require_arity(x, 2, "rosenbrock");
                        return rosenbrock(x[0], x[1], a, b);
                    },
                    false};
        return {"rosenbrock", 2, Bounds::cube(2, -3.0, 3.0), std::move(f),
                KnownOptimum{{a, a * a}, 0.0, OptimumKind::min}, {{"a", a}, {"b", b}}, 1.0};
    }
    if (name == "schaffer") {
        Objective f{2,
                    [](std::uint64_t, std::span<const double> x) {
                        require_arity(x, 2, "schaffer");
                        return schaffer(x[0], x[1]);
                    },
                    false};
        return {"schaffer", 2, Bounds::cube(2, -3.0, 3.0), std::move(f),
                KnownOptimum{{0.0, 0.0}, 0.0, OptimumKind::min}, {}, 1.0};
    }
    if (name == "two_well") {
        const double tau = param_or(overrides, "tau", 1000.0);
        if (!(tau > 0.0)) throw ConfigError("two_well: tau must be positive");
        Objective f{2,
                    [tau](std::uint64_t t, std::span<const double> x) {
                        require_arity(x, 2, "two_well");
                        return two_well(static_cast<double>(t), x[0], x[1], tau);
                    },
                    true};
        // The optimum moves with t; the t = 0 minimiser is recorded.
        return {"two_well", 2, Bounds::cube(2, -6.0, 6.0), std::move(f),
                KnownOptimum{{-2.5, -2.5}, two_well(0.0, -2.5, -2.5, tau), OptimumKind::min},
                {{"tau", tau}}, 1.0};
    }
    if (name == "shekel") {
        Objective f{4,
                    [](std::uint64_t, std::span<const double> x) {
                        require_arity(x, 4, "shekel");
                        return -shekel(x, shekel_matrix(), shekel_weights());
                    },
                    false};
        const Point peak{4.0, 4.0, 4.0, 4.0};
        return {"shekel", 4, Bounds::cube(4, 0.0, 10.0), std::move(f),
                KnownOptimum{peak, shekel(peak, shekel_matrix(), shekel_weights()), OptimumKind::max},
                {}, -1.0};
    }
    std::string valid;
    for (const auto& n : registry_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("unknown benchmark '" + name + "'; valid names: " + valid);
}

}  // namespace viral::bench
