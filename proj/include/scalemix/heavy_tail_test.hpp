#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "scalemix/estimators.hpp"

namespace scalemix {

// Goodness-of-fit statistic for a Frechet-domain tail on the k upper order
// statistics: k * int_0^1 (log(X_(n-[kt]) / X_(n-k)) / g + log t)^2 t^2 dt with
// g the Hill estimate at k. The integral is exact on each piece.
double heavy_tail_statistic(std::span<const double> x, std::size_t k);
// Same statistic from log-excesses L_i = log(X_(n-i) / X_(n-k)), i = 0..k-1.
double heavy_tail_statistic_from_logs(std::span<const double> logs);

// Draws of the statistic under an exact Pareto tail. The law depends on k only.
std::vector<double> simulate_null_statistic(std::size_t k, std::size_t reps, std::uint64_t seed);

constexpr std::size_t kHeavyTailMinK = 5;
// Upper critical value at level 0.10, 0.05 or 0.01 (interpolated in log k).
double heavy_tail_critical_value(std::size_t k, double level);

// Statistic per k, critical value in band, reject where the statistic exceeds it.
EstimatorTrace heavy_tail_test(std::span<const double> x, const std::vector<std::size_t>& ks, double level = 0.05);

}  // namespace scalemix
