#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace scalemix {

// Adaptive Gauss-Kronrod on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);
// tanh-sinh on (a,b); tolerates integrable endpoint singularities and infinite b.
double integrate_singular(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);

// P(K > x) for the Kolmogorov distribution K = sup |B(t)|.
double kolmogorov_sf(double x);

// Ranks 1..n with ties replaced by their average rank.
std::vector<double> average_ranks(std::span<const double> x);
// Number of sample points <= each point (the "max" rank).
std::vector<double> max_ranks(std::span<const double> x);

std::vector<double> sorted_copy(std::span<const double> x);
// Order statistic x_(ceil(q n)) of the sample (1-based), q in (0,1).
double empirical_quantile(std::span<const double> x, double q);

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};
// Summation runs over the sorted values so the result does not depend on input order.
MeanSd mean_sd(std::vector<double> values);

}  // namespace scalemix
