#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "scalemix/factors.hpp"

namespace scalemix {

enum class CopulaFamily { Min, Sum, Logistic, AsymLogistic, CrossMax2Dep };

// Cross-sectional tail function of Y_1. operator() is the upper tail copula
// Lambda(x) = lim t P(Y_j > U_j(t/x_j) for all j); exponent() is the union
// form l(x) = -log G(1/x). Coordinates equal to +inf are dropped (sub-vector
// convention). Sum is the independence exponent printed as sum x_j and is the
// one family whose operator() is of union type.
class TailCopulaFn {
public:
    static TailCopulaFn min(std::size_t d);
    static TailCopulaFn sum(std::size_t d);
    static TailCopulaFn logistic(std::size_t d, double alpha_dep);
    static TailCopulaFn asym_logistic(std::size_t d, std::vector<SubsetWeight> weights, double alpha_dep);
    static TailCopulaFn cross_max2(std::size_t d);

    double operator()(const std::vector<double>& x) const;
    [[nodiscard]] double exponent(const std::vector<double>& x) const;

    [[nodiscard]] CopulaFamily family() const { return family_; }
    [[nodiscard]] std::size_t dim() const { return d_; }
    [[nodiscard]] double alpha_dep() const { return alpha_; }
    [[nodiscard]] std::string describe() const;

private:
    TailCopulaFn(CopulaFamily f, std::size_t d, double a) : family_(f), d_(d), alpha_(a) {}
    [[nodiscard]] double ell_finite(const std::vector<double>& x) const;

    CopulaFamily family_;
    std::size_t d_;
    double alpha_;
    std::vector<SubsetWeight> weights_;
    std::vector<std::vector<double>> theta_;  // theta_[J][i] = p(J)/r_i for i in J
};

enum class KStepFamily { CrossMax2Dep, ARMAX, MovingMax2, PARMAX, IIDPareto, Custom };

// Lambda_{(Y_t)_{t in S}}: t P(Y_t not <= U(t/x_t) for every t in S), the union
// over margins at each time and intersection over times. Times are 0-based and
// increasing; x[t] is the level vector of time t (zeros drop a margin).
class KStepTailFn {
public:
    using Fn = std::function<double(const std::vector<std::size_t>&, const std::vector<std::vector<double>>&)>;

    static KStepTailFn cross_max2();
    static KStepTailFn armax(double c, double alpha);
    static KStepTailFn moving_max2();
    static KStepTailFn parmax();
    static KStepTailFn iid();
    static KStepTailFn custom(Fn fn, bool time_independent = false);

    double operator()(const std::vector<std::size_t>& times, const std::vector<std::vector<double>>& x) const;
    // True when every term with two or more times vanishes identically.
    [[nodiscard]] bool time_independent() const;
    [[nodiscard]] KStepFamily family() const { return family_; }

private:
    KStepFamily family_ = KStepFamily::IIDPareto;
    double c_ = 0.0;
    double alpha_ = 1.0;
    Fn fn_;
    bool custom_independent_ = false;
};

}  // namespace scalemix
