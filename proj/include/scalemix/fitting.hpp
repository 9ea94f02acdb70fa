#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scalemix/estimators.hpp"

namespace scalemix {

struct AffineTransform {
    double a = 1.0;
    double b = 0.0;
};

// Published transforms of the S&P 500 ("sp500") and Dow Jones ("dj") volatility series.
AffineTransform affine_preset(const std::string& name);

struct AffineResult {
    AffineTransform transform;
    std::vector<double> x;
};

// a*v + b with (a,b) fitted by least squares of the upper-half order statistics
// against Pareto quantiles of a pilot Hill estimate, then shifted so min >= 1.
AffineResult affine_pareto_transform(std::span<const double> v, std::optional<AffineTransform> fixed = {});

// Default number of upper order statistics, floor(n/15).
std::size_t default_k(std::size_t n);

struct BetaFit {
    double beta_hat = 0.0;
    std::size_t k = 0;
    EstimatorTrace hill;
    EstimatorTrace moments;
    EstimatorTrace heavy_tail;
};

// Throws std::domain_error when the heavy-tail test rejects at the chosen k.
BetaFit estimate_beta(std::span<const double> x, const std::vector<std::size_t>& ks, std::size_t k = 0,
                      double level = 0.05);

// S_i = (n+1)/(n+1-R_i) ^ (n+1)/(n+1-R_{i+1}) with R the number of X_j <= X_i.
std::vector<double> s_statistic(std::span<const double> x);

struct CFit {
    double c_hat = 0.0;
    std::size_t k = 0;
    std::vector<double> s;
    EstimatorTrace hill;
};

constexpr double kMaxCHat = 0.999;
CFit estimate_c(std::span<const double> x, const std::vector<std::size_t>& ks, std::size_t k = 0);

struct Innovations {
    std::vector<std::size_t> index;      // 0-based i >= 1 with X_i > X_{i-1}^c
    std::vector<double> w;
    std::vector<std::size_t> candidates; // the complement in {1, ..., n-1}
};

Innovations separate_innovations(std::span<const double> x, double c_hat);

struct CaptureConfig {
    double upsilon = 0.15;
    double beta_hat = 0.0;
    double c_hat = 0.0;
    // false: t^(-beta/c - 1); true: t^(-(beta/c - 1)).
    bool alt_exponent = false;
};

struct Capture {
    std::vector<std::size_t> index;
    std::vector<double> z;
    double pi1 = 0.0;
};

double capture_pi1(std::span<const double> x, double beta_hat, double c_hat);
// Posterior weight of the innovation component at t.
double capture_ratio(double t, double pi1, const CaptureConfig& cfg);
Capture capture_z(std::span<const double> x, const CaptureConfig& cfg);

KsResult validate_z(std::span<const double> z, double beta_hat, double c_hat);

struct FitConfig {
    double upsilon = 0.15;
    std::size_t k = 0;  // 0 means floor(n/15)
    double level = 0.05;
    bool alt_exponent = false;
};

struct PrarmaxFit {
    bool ok = false;
    int failed_step = 0;  // 1..5, 0 when every step passed
    std::string message;
    double beta_hat = 0.0;
    double c_hat = 0.0;
    std::size_t k = 0;
    BetaFit beta;
    CFit c;
    Innovations innovations;
    EstimatorTrace innovation_heavy_tail;
    Capture capture;
    KsResult ks;
};

PrarmaxFit fit_prarmax(std::span<const double> x, const FitConfig& cfg = {});

}  // namespace scalemix
