#include "viral/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace viral {

namespace {

void require_same_dim(std::span<const double> p, const Bounds& b, const char* what) {
    if (p.size() != b.dim()) {
        throw ContractError(std::string(what) + ": point has dimension " + std::to_string(p.size()) +
                            ", bounds have " + std::to_string(b.dim()));
    }
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::string format_point(std::span<const double> p) {
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (j) os << ", ";
        os << p[j];
    }
    os << ')';
    return os.str();
}

Bounds::Bounds(Point lb, Point ub) : lb_(std::move(lb)), ub_(std::move(ub)) {
    if (lb_.empty()) throw ContractError("bounds must have at least one axis");
    if (lb_.size() != ub_.size()) {
        throw ContractError("lower and upper bound vectors differ in length");
    }
    for (std::size_t j = 0; j < lb_.size(); ++j) {
        if (!std::isfinite(lb_[j]) || !std::isfinite(ub_[j]) || !(lb_[j] < ub_[j])) {
            throw ContractError("invalid bounds on axis " + std::to_string(j) + ": need lb < ub, got [" +
                                std::to_string(lb_[j]) + ", " + std::to_string(ub_[j]) + "]");
        }
    }
}

Bounds Bounds::cube(std::size_t dim, double lo, double hi) {
    return Bounds(Point(dim, lo), Point(dim, hi));
}

bool Bounds::contains(std::span<const double> p) const {
    if (p.size() != dim()) return false;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (!(p[j] >= lb_[j] && p[j] <= ub_[j])) return false;
    }
    return true;
}

double RngStream::uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double RngStream::normal() { return gauss_(engine_); }

std::size_t RngStream::index(std::size_t n) {
    if (n == 0) throw ContractError("RngStream::index: empty range");
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

bool RngStream::bernoulli(double p) { return uniform() < p; }

std::uint64_t RngStream::child_seed(std::uint64_t parent, std::uint64_t index) {
    return splitmix64(splitmix64(parent) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

Point clamp_to_bounds(std::span<const double> p, const Bounds& b) {
    require_same_dim(p, b, "clamp_to_bounds");
    Point out(p.begin(), p.end());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = std::min(b.upper()[j], std::max(b.lower()[j], out[j]));
    }
    return out;
}

Point reflect_into_bounds(std::span<const double> p, const Bounds& b) {
    require_same_dim(p, b, "reflect_into_bounds");
    Point out(p.begin(), p.end());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double lo = b.lower()[j];
        const double hi = b.upper()[j];
        if (out[j] >= lo && out[j] <= hi) continue;
        const double range = hi - lo;
        double d = std::fmod(out[j] - lo, 2.0 * range);
        if (d < 0.0) d += 2.0 * range;
        if (d > range) d = 2.0 * range - d;
        out[j] = std::min(hi, std::max(lo, lo + d));
    }
    return out;
}

Point apply_boundary(std::span<const double> p, const Bounds& b, BoundaryPolicy policy) {
    return policy == BoundaryPolicy::clamp ? clamp_to_bounds(p, b) : reflect_into_bounds(p, b);
}

Point uniform_sample(const Bounds& b, RngStream& rng) {
    Point p(b.dim());
    for (std::size_t j = 0; j < p.size(); ++j) {
        // uniform() is half-open, so the result never reaches ub.
        p[j] = rng.uniform(b.lower()[j], b.upper()[j]);
    }
    return p;
}

Population uniform_init(const Bounds& b, std::size_t n, RngStream& rng) {
    Population pop;
    pop.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pop.push_back(uniform_sample(b, rng));
    return pop;
}

Population stratified_init(const Bounds& b, std::size_t n, RngStream& rng) {
    if (n == 0) throw ContractError("stratified_init: need at least one member");
    Population pop(n, Point(b.dim()));
    std::vector<std::size_t> strata(n);
    for (std::size_t j = 0; j < b.dim(); ++j) {
        std::iota(strata.begin(), strata.end(), std::size_t{0});
        // Fisher-Yates through the stream so the permutation is reproducible.
        for (std::size_t i = n; i > 1; --i) std::swap(strata[i - 1], strata[rng.index(i)]);
        const double width = b.range(j) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = b.lower()[j] + (static_cast<double>(strata[i]) + rng.uniform()) * width;
            pop[i][j] = std::min(b.upper()[j], x);
        }
    }
    return pop;
}

}  // namespace viral
