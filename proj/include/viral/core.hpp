#pragma once

// Geometry, population and randomness primitives shared by the optimizer,
// the benchmark registry and the schema lab.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace viral {

/// A caller broke a documented precondition (dimension mismatch, empty input, ...).
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A run configuration is invalid or cannot be honoured.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The objective produced a value the optimizer cannot order (NaN).
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Point = std::vector<double>;
using Population = std::vector<Point>;

std::string format_point(std::span<const double> p);

/// Axis-aligned box [lb, ub]. Construction validates lb_j < ub_j on every axis.
class Bounds {
public:
    Bounds(Point lb, Point ub);

    /// Same interval on every axis.
    static Bounds cube(std::size_t dim, double lo, double hi);

    std::size_t dim() const noexcept { return lb_.size(); }
    const Point& lower() const noexcept { return lb_; }
    const Point& upper() const noexcept { return ub_; }
    double range(std::size_t axis) const { return ub_[axis] - lb_[axis]; }
    bool contains(std::span<const double> p) const;

    friend bool operator==(const Bounds&, const Bounds&) = default;

private:
    Point lb_;
    Point ub_;
};

/// Seedable generator owned by exactly one task at a time.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    double normal();                        // N(0, 1)
    std::size_t index(std::size_t n);       // uniform on {0, ..., n-1}
    bool bernoulli(double p);

    /// Independent stream for worker `index`, derived from this stream's seed only.
    RngStream child(std::uint64_t index) const { return RngStream(child_seed(seed_, index)); }

    static std::uint64_t child_seed(std::uint64_t parent, std::uint64_t index);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

/// Objective to minimise. `evaluate(t, x)` must be deterministic and reentrant;
/// static objectives ignore t.
struct Objective {
    using Fn = std::function<double(std::uint64_t, std::span<const double>)>;

    std::size_t arity = 0;
    Fn evaluate;
    bool time_varying = false;

    double operator()(std::uint64_t t, std::span<const double> x) const { return evaluate(t, x); }
};

Point clamp_to_bounds(std::span<const double> p, const Bounds& b);

/// Mirror each coordinate back across the wall it crossed. Overshoots larger
/// than the axis range fold repeatedly, so the result is always inside.
Point reflect_into_bounds(std::span<const double> p, const Bounds& b);

enum class BoundaryPolicy { clamp, reflect };

Point apply_boundary(std::span<const double> p, const Bounds& b, BoundaryPolicy policy);

Point uniform_sample(const Bounds& b, RngStream& rng);

Population uniform_init(const Bounds& b, std::size_t n, RngStream& rng);

/// Latin-hypercube placement: every axis is cut into n strata and each
/// member takes a distinct stratum per axis, jittered inside it.
Population stratified_init(const Bounds& b, std::size_t n, RngStream& rng);

}  // namespace viral
