#pragma once

// Data-parallel inner loops of the optimizer. Each kernel has a serial
// reference and an OpenMP version; both write results by index, so the output
// is identical regardless of which one ran.

#include <cstdint>
#include <span>

#include "viral/core.hpp"

namespace viral {

enum class Execution { serial, openmp };

namespace kernels {

void evaluate_serial(const Objective& f, std::uint64_t t, std::span<const Point> points,
                     std::span<double> values);
void evaluate_openmp(const Objective& f, std::uint64_t t, std::span<const Point> points,
                     std::span<double> values);

/// Dispatches to one of the two above. Throws EvaluationError naming the first
/// point (by index) whose value is NaN.
void evaluate(Execution mode, const Objective& f, std::uint64_t t, std::span<const Point> points,
              std::span<double> values);

/// Euclidean-nearest center, lowest index on ties. Throws on empty `centers`.
std::size_t nearest_center(std::span<const double> p, std::span<const Point> centers);

void assign_centers_serial(std::span<const Point> points, std::span<const Point> centers,
                           std::span<std::size_t> out);
void assign_centers_openmp(std::span<const Point> points, std::span<const Point> centers,
                           std::span<std::size_t> out);
void assign_centers(Execution mode, std::span<const Point> points, std::span<const Point> centers,
                    std::span<std::size_t> out);

}  // namespace kernels
}  // namespace viral
