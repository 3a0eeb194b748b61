#include "viral/kernels.hpp"

#include <cmath>
#include <cstddef>
#include <exception>

namespace viral::kernels {

namespace {

void require_sizes(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw ContractError(std::string(what) + ": output span size mismatch");
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double diff = a[j] - b[j];
        d += diff * diff;
    }
    return d;
}

}  // namespace

void evaluate_serial(const Objective& f, std::uint64_t t, std::span<const Point> points,
                     std::span<double> values) {
    require_sizes(points.size(), values.size(), "evaluate_serial");
    for (std::size_t i = 0; i < points.size(); ++i) values[i] = f(t, points[i]);
}

void evaluate_openmp(const Objective& f, std::uint64_t t, std::span<const Point> points,
                     std::span<double> values) {
    require_sizes(points.size(), values.size(), "evaluate_openmp");
    const auto n = static_cast<std::ptrdiff_t>(points.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            values[i] = f(t, points[i]);
        } catch (...) {
#pragma omp critical(viral_eval_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

void evaluate(Execution mode, const Objective& f, std::uint64_t t, std::span<const Point> points,
              std::span<double> values) {
    if (mode == Execution::openmp) {
        evaluate_openmp(f, t, points, values);
    } else {
        evaluate_serial(f, t, points, values);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (std::isnan(values[i])) {
            throw EvaluationError("objective returned NaN at generation " + std::to_string(t) +
                                  " for point " + format_point(points[i]));
        }
    }
}

std::size_t nearest_center(std::span<const double> p, std::span<const Point> centers) {
    if (centers.empty()) throw ContractError("nearest_center: no centers");
    std::size_t best = 0;
    double best_d = squared_distance(p, centers[0]);
    for (std::size_t k = 1; k < centers.size(); ++k) {
        const double d = squared_distance(p, centers[k]);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

void assign_centers_serial(std::span<const Point> points, std::span<const Point> centers,
                           std::span<std::size_t> out) {
    require_sizes(points.size(), out.size(), "assign_centers_serial");
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = nearest_center(points[i], centers);
}

void assign_centers_openmp(std::span<const Point> points, std::span<const Point> centers,
                           std::span<std::size_t> out) {
    require_sizes(points.size(), out.size(), "assign_centers_openmp");
    if (centers.empty()) throw ContractError("nearest_center: no centers");
    const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = nearest_center(points[i], centers);
}

void assign_centers(Execution mode, std::span<const Point> points, std::span<const Point> centers,
                    std::span<std::size_t> out) {
    if (mode == Execution::openmp) {
        assign_centers_openmp(points, centers, out);
    } else {
        assign_centers_serial(points, centers, out);
    }
}

}  // namespace viral::kernels
