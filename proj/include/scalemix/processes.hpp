#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "scalemix/factors.hpp"
#include "scalemix/rng.hpp"
#include "scalemix/sample_path.hpp"

namespace scalemix {

enum class YFamily { IIDPareto, ARMAX, PARMAX, MovingMax2, CrossMax2Dep };

// Base process Y. ARMAX, PARMAX and MovingMax2 are univariate recursions; with
// d > 1 they are shared across margins (Y_nj = Y_n^gamma_j, see ModelSpec).
struct YProcessSpec {
    YFamily family = YFamily::IIDPareto;
    double c = 0.5;
    double alpha = 1.0;
    std::vector<double> beta;  // per-margin exponents for IIDPareto and CrossMax2Dep
    std::size_t d = 1;
    std::size_t burn_in = 0;

    static YProcessSpec iid_pareto(std::vector<double> beta);
    static YProcessSpec armax(double c, double alpha, std::size_t d = 1);
    static YProcessSpec parmax(double c, double alpha, std::size_t d = 1);
    static YProcessSpec moving_max2(double alpha, std::size_t d = 1);
    static YProcessSpec cross_max2(std::vector<double> beta);

    void validate() const;
    [[nodiscard]] bool is_common() const;  // univariate recursion shared across margins
    [[nodiscard]] std::size_t dim() const;
    [[nodiscard]] std::string describe() const;
};

// X = Y * T, or X_nj = (Y_n Z_nj)^gamma_j for the common-factor families.
struct ModelSpec {
    YProcessSpec y;
    TFactorSpec t;
    std::vector<double> gamma;  // empty means all ones

    [[nodiscard]] std::size_t dim() const { return y.dim(); }
    [[nodiscard]] std::vector<double> gammas() const;
    // Tail exponent beta_j of each margin of X.
    [[nodiscard]] std::vector<double> margin_beta() const;
    void validate() const;
    [[nodiscard]] std::string describe() const;
};

std::vector<double> sample_pareto(Rng& rng, double beta, std::size_t n);
double pareto_quantile(double beta, double u);

// ARMAX innovation law F_W(x) = (1 - (cx)^-a) / (1 - x^-a) on x >= 1/c.
double armax_innovation_cdf(double c, double alpha, double x);
double armax_innovation_quantile(double c, double alpha, double u);

// pARMAX innovation law F_W(x) = (1 - x^-b) / (1 - x^-b/c) on x > 0.
double parmax_innovation_cdf(double c, double beta, double x);
double parmax_innovation_pdf(double c, double beta, double x);
double parmax_innovation_quantile(double c, double beta, double u);

// Moving-maximum driver F_W(x) = (1 - x^-a)^(1/2) on x >= 1.
double movingmax_innovation_quantile(double alpha, double u);

// Univariate recursion path of length n (ARMAX, PARMAX or MovingMax2).
std::vector<double> simulate_univariate(Rng& rng, const YProcessSpec& spec, std::size_t n);

// Stream layout: margin j of replication rep uses {rep, kStreamY, j}; shared
// recursions use {rep, kStreamY}.
SamplePath simulate_y(std::uint64_t seed, const YProcessSpec& spec, std::size_t n,
                      std::uint64_t replication = 0);
// Factor rows: {rep, kStreamT, j} per margin for independent laws, {rep, kStreamT} otherwise.
SamplePath simulate_t(std::uint64_t seed, const TFactorSpec& spec, std::size_t n, std::size_t d,
                      std::uint64_t replication = 0);
SamplePath compose_mixture(const SamplePath& y, const SamplePath& t);
SamplePath compose_common_factor(const std::vector<double>& y, const SamplePath& z,
                                 const std::vector<double>& gamma);
SamplePath simulate_x(std::uint64_t seed, const ModelSpec& spec, std::size_t n,
                      std::uint64_t replication = 0);

}  // namespace scalemix
