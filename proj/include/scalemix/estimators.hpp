#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace scalemix {

// Estimator value along a grid of k upper order statistics. band and reject
// are filled only by tests that carry a critical value.
struct EstimatorTrace {
    std::vector<std::size_t> k;
    std::vector<double> value;
    std::vector<double> band;
    std::vector<bool> reject;
};

// Estimates of 1/beta from the k largest observations.
double hill(std::span<const double> x, std::size_t k);
double moments_estimator(std::span<const double> x, std::size_t k);

EstimatorTrace hill_trace(std::span<const double> x, const std::vector<std::size_t>& ks);
EstimatorTrace moments_trace(std::span<const double> x, const std::vector<std::size_t>& ks);

// lo, lo+step, ... capped at hi (inclusive), hi < n enforced by callers.
std::vector<std::size_t> k_grid(std::size_t lo, std::size_t hi, std::size_t step = 1);
// Roughly `points` values of k from 5 up to n - 1.
std::vector<std::size_t> default_k_grid(std::size_t n, std::size_t points = 100);

// Fraction of exceedances of u followed by run_gap non-exceedances.
double runs_extremal_index(std::span<const double> x, double u, std::size_t run_gap);

// (1/k) #{i : both ranks exceed n - k}, ties averaged.
double empirical_tdc(std::span<const double> x, std::span<const double> y, std::size_t k);
// Pairs (x_i, x_{i+lag}) of a series.
void lag_pairs(std::span<const double> x, std::size_t lag, std::vector<double>& a, std::vector<double>& b);

std::vector<double> block_maxima(std::span<const double> x, std::size_t block);

struct KsResult {
    double D = 0.0;
    double p = 1.0;
    std::size_t n = 0;
};

KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf);

struct Diagnostics {
    std::vector<double> exp_quantile;   // -log(1 - i/(n+1)), i = 1..n
    std::vector<double> order_stat;     // x_(i), ascending
    std::vector<double> log_order_stat; // Pareto QQ ordinate
    std::vector<std::size_t> me_k;      // number of exceedances used
    std::vector<double> me_threshold;   // u = x_(n-k)
    std::vector<double> mean_excess;    // mean of x - u over the k exceedances
};

Diagnostics diagnostics(std::span<const double> x);

}  // namespace scalemix
