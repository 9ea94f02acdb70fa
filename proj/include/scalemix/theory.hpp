#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "scalemix/factors.hpp"
#include "scalemix/processes.hpp"
#include "scalemix/rng.hpp"
#include "scalemix/tail_functions.hpp"

namespace scalemix {

// How expectations over factor laws are evaluated: finite-support laws are
// summed exactly (up to max_atoms joint atoms), everything else by seeded MC.
struct ExpectationOptions {
    std::size_t mc_draws = 1'000'000;
    std::uint64_t seed = kDefaultSeed;
    std::size_t max_atoms = 1u << 20;
};

struct TheoryValue {
    double value = 0.0;
    double stderr_ = 0.0;
    std::string method;
};

struct ThetaResult {
    double value = 1.0;
    double numerator = 0.0;
    double denominator = 1.0;
    double numerator_se = 0.0;
    double denominator_se = 0.0;
    double value_se = 0.0;
    std::string method;
};

struct EtaResult {
    double eta = 0.5;
    double multiplier = 1.0;
    bool tail_dependent = false;
};

struct GumbelMev {
    double iid = 0.0;        // attractor of the i.i.d. associated sequence
    double dependent = 0.0;  // limit of P(M_n <= U_X(n x)) with clustering
};

// E Lambda_Y(T^beta x / r).
TheoryValue tail_copula_mixture(const TailCopulaFn& lambda_y, const TFactorSpec& t_spec,
                                const std::vector<double>& beta, const FactorMoments& r,
                                const std::vector<double>& x, const ExpectationOptions& opt = {});

// exp{-E l_Y(T^beta / (r x))}, l_Y the exponent function of G_Y.
TheoryValue mev_attractor(const TailCopulaFn& g_y, const TFactorSpec& t_spec, const std::vector<double>& beta,
                          const FactorMoments& r, const std::vector<double>& x,
                          const ExpectationOptions& opt = {});

// Bivariate tail dependence coefficient Lambda_(X_i,X_j)(1,1) of the asymmetric
// logistic model generated by subset weights p(J); i, j are 0-based.
double asym_logistic_tdc(std::size_t i, std::size_t j, const std::vector<SubsetWeight>& weights,
                         double alpha_dep);
// Pickands dependence function A(w) = l(1-w, w) of the same bivariate model.
double asym_logistic_pickands(const std::vector<SubsetWeight>& weights, double alpha_dep, double w);

// Multivariate extremal index under D^(k) by inclusion-exclusion over the first
// k-1 times. tau may contain zeros (margins left out).
ThetaResult theta_general_k(std::size_t k, const KStepTailFn& lambda_k, const TFactorSpec& t_spec,
                            const std::vector<double>& beta, const FactorMoments& r,
                            const std::vector<double>& tau, const ExpectationOptions& opt = {});
ThetaResult theta_marginal(std::size_t k, const KStepTailFn& lambda_k, const TFactorSpec& t_spec,
                           const std::vector<double>& beta, const FactorMoments& r, std::size_t j,
                           const ExpectationOptions& opt = {});

// Tail function, effective exponents and k for a full model.
KStepTailFn kstep_for_model(const ModelSpec& model);
std::vector<double> effective_beta(const ModelSpec& model);
ThetaResult theta_for_model(const ModelSpec& model, const std::vector<double>& tau,
                            const ExpectationOptions& opt = {});

// Common-factor ARMAX with i.i.d. factors of law H on [a,b], c < a/b.
ThetaResult theta_armax_mixture(double c, double alpha, const FactorLawSpec& h, const std::vector<double>& tau);
double theta_armax_marginal(double c, double alpha, const FactorLawSpec& h);

// Common-factor moving maxima with i.i.d. factors of law H.
ThetaResult theta_movingmax_mixture(double alpha, const FactorLawSpec& h, const std::vector<double>& tau,
                                    const ExpectationOptions& opt = {});

// Cross-sectional lag-(m,s) tail dependence coefficient; s is the 0-based margin offset.
TheoryValue lambda_ms(const ModelSpec& model, std::size_t m, std::size_t s);
EtaResult eta_mixture(const ModelSpec& model, std::size_t m, std::size_t s = 0);

GumbelMev movingmax_mev_gumbel(double alpha, double xi, const std::vector<double>& x);

// E g(Z) for Z ~ H: exact on atoms, quadrature over the quantile otherwise.
double expect_over_law(const FactorLawSpec& h, const std::function<double(double)>& g);

}  // namespace scalemix
