#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "scalemix/estimators.hpp"
#include "scalemix/numerics.hpp"
#include "scalemix/theory.hpp"
#include "test_support.hpp"

using namespace scalemix;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

std::vector<SubsetWeight> example_weights() { return {{{0, 1}, 0.5}, {{0}, 0.25}, {{1}, 0.25}}; }

bool within_se(double a, double b, double se, double k = 3.0) { return std::abs(a - b) <= k * se + 1e-12; }

}  // namespace

TEST_CASE("tail copula of a degenerate mixture is the base copula") {
    const auto lam = TailCopulaFn::logistic(2, 0.5);
    const FactorMoments r{{1.0, 1.0}};
    for (auto x : std::vector<std::vector<double>>{{1.0, 1.0}, {0.3, 2.0}, {5.0, 0.1}}) {
        const auto v = tail_copula_mixture(lam, TFactorSpec::degenerate(), {1.5, 1.5}, r, x);
        CHECK(v.value == doctest::Approx(lam(x)).epsilon(1e-14));
        CHECK(v.stderr_ == 0.0);
    }
}

TEST_CASE("common factor with equal exponents leaves the tail copula unchanged") {
    const auto t = TFactorSpec::common(FactorLawSpec::frechet(1.0, 3.0));
    const std::vector<double> beta{1.0, 1.0};
    const auto r = factor_moments(t, beta);
    for (const auto& lam : {TailCopulaFn::logistic(2, 0.4), TailCopulaFn::min(2)}) {
        for (int i = 0; i < 10; ++i) {
            const std::vector<double> x{0.2 + 0.3 * i, 2.5 - 0.2 * i};
            const auto v = tail_copula_mixture(lam, t, beta, r, x);
            CHECK(v.stderr_ > 0.0);
            CHECK(within_se(v.value, lam(x), v.stderr_));
        }
    }
}

TEST_CASE("independence exponent is linear for any factor") {
    const auto lam = TailCopulaFn::sum(2);
    for (const auto& t : {TFactorSpec::independent(FactorLawSpec::bernoulli(0.3)), TFactorSpec::subset(example_weights()),
                          TFactorSpec::independent(FactorLawSpec::uniform01())}) {
        const auto r = factor_moments(t, {2.0, 2.0});
        const std::vector<double> x{0.7, 1.9};
        CHECK(tail_copula_mixture(lam, t, {2.0, 2.0}, r, x).value == doctest::Approx(2.6).epsilon(1e-13));
    }
}

TEST_CASE("tail copula mixture is homogeneous") {
    const std::vector<TFactorSpec> specs{TFactorSpec::independent(FactorLawSpec::bernoulli(0.4)),
                                         TFactorSpec::independent(FactorLawSpec::uniform01()),
                                         TFactorSpec::subset(example_weights())};
    const std::vector<TailCopulaFn> fams{TailCopulaFn::min(2), TailCopulaFn::logistic(2, 0.6),
                                         TailCopulaFn::asym_logistic(2, example_weights(), 0.5),
                                         TailCopulaFn::cross_max2(2)};
    const std::vector<double> beta{1.0, 2.0}, x{0.8, 1.3};
    for (const auto& t : specs)
        for (const auto& lam : fams) {
            const auto r = factor_moments(t, beta);
            const double base = tail_copula_mixture(lam, t, beta, r, x).value;
            for (double s : {0.5, 2.0, 10.0}) {
                const auto v = tail_copula_mixture(lam, t, beta, r, {s * x[0], s * x[1]});
                CHECK(v.value == doctest::Approx(s * base).epsilon(1e-10));
            }
            CHECK(tail_copula_mixture(lam, t, beta, r, {0.0, 1.0}).value == 0.0);
        }
}

TEST_CASE("bernoulli tail copula: Monte Carlo agrees with the exact sum") {
    const auto lam = TailCopulaFn::logistic(2, 0.5);
    const auto t = TFactorSpec::independent(FactorLawSpec::bernoulli(0.6));
    const std::vector<double> beta{1.0, 1.0};
    const auto r = factor_moments(t, beta);
    ExpectationOptions mc;
    mc.max_atoms = 0;
    const auto exact = tail_copula_mixture(lam, t, beta, r, {1.0, 2.0});
    const auto sim = tail_copula_mixture(lam, t, beta, r, {1.0, 2.0}, mc);
    CHECK(exact.method == "finite_support_sum");
    CHECK(sim.method == "monte_carlo");
    CHECK(within_se(sim.value, exact.value, sim.stderr_));
    // Both factors nonzero with probability p^2: lam(x/p) p^2 = p lam(x).
    CHECK(exact.value == doctest::Approx(0.6 * lam({1.0, 2.0})).epsilon(1e-13));
}

TEST_CASE("MEV attractor") {
    const std::vector<double> x{0.7, 2.0};
    const auto indep = mev_attractor(TailCopulaFn::sum(2), TFactorSpec::degenerate(), {1.0, 1.0}, {{1.0, 1.0}}, x);
    CHECK(indep.value == doctest::Approx(std::exp(-1.0 / 0.7 - 0.5)).epsilon(1e-14));

    const auto t = TFactorSpec::independent(FactorLawSpec::uniform01());
    const auto r = factor_moments(t, {1.0, 2.0});
    for (const auto& g : {TailCopulaFn::logistic(2, 0.3), TailCopulaFn::min(2)}) {
        CHECK(mev_attractor(g, t, {1.0, 2.0}, r, {1.7, kInf}).value == doctest::Approx(std::exp(-1.0 / 1.7)).epsilon(1e-3));
        CHECK(mev_attractor(g, t, {1.0, 2.0}, r, {kInf, 0.4}).value == doctest::Approx(std::exp(-1.0 / 0.4)).epsilon(1e-3));
    }

    // Subset factors turn a logistic attractor into the asymmetric logistic one.
    const auto w = example_weights();
    const auto ts = TFactorSpec::subset(w);
    const auto rs = factor_moments(ts, {1.0, 1.0});
    const auto asym = TailCopulaFn::asym_logistic(2, w, 0.5);
    const auto v = mev_attractor(TailCopulaFn::logistic(2, 0.5), ts, {1.0, 1.0}, rs, x);
    CHECK(v.value == doctest::Approx(std::exp(-asym.exponent({1.0 / x[0], 1.0 / x[1]}))).epsilon(1e-12));

    // Common-factor model with i.i.d. Frechet factors: E max_j Z_j^a/(r x_j) has the
    // closed form (sum x_j^(-xi/a))^(a/xi).
    const double a = 1.0, xi = 2.5;
    const auto tf = TFactorSpec::independent(FactorLawSpec::frechet(1.3, xi));
    const auto rf = factor_moments(tf, {a, a});
    const auto crmev = mev_attractor(TailCopulaFn::min(2), tf, {a, a}, rf, x);
    const double ell = std::log(movingmax_mev_gumbel(a, xi, x).iid);
    CHECK(std::abs(std::log(crmev.value) - ell) <= 3 * crmev.stderr_ / crmev.value + 1e-9);
}

TEST_CASE("asymmetric logistic tail dependence") {
    CHECK(asym_logistic_tdc(0, 1, {{{0, 1}, 1.0}}, 0.5) == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
    CHECK(asym_logistic_tdc(0, 2, {{{0, 1, 2}, 1.0}}, 0.3) == doctest::Approx(2.0 - std::pow(2.0, 0.3)).epsilon(1e-14));
    CHECK(asym_logistic_tdc(0, 1, example_weights(), 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK_THROWS(asym_logistic_tdc(0, 1, {{{0, 1}, 0.5}, {{0}, 0.25}}, 0.5));

    const auto w = example_weights();
    const double tdc = asym_logistic_tdc(0, 1, w, 0.5);
    CHECK(tdc == doctest::Approx(0.5 / 0.75 * (2.0 - std::sqrt(2.0))).epsilon(1e-13));
    const auto ts = TFactorSpec::subset(w);
    CHECK(tail_copula_mixture(TailCopulaFn::logistic(2, 0.5), ts, {1.0, 1.0}, factor_moments(ts, {1.0, 1.0}), {1.0, 1.0})
              .value == doctest::Approx(tdc).epsilon(1e-13));
    CHECK(asym_logistic_pickands(w, 0.5, 0.5) == doctest::Approx(1.0 - tdc / 2.0).epsilon(1e-13));
    CHECK(asym_logistic_pickands(w, 0.5, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(asym_logistic_pickands(w, 0.5, 1.0) == doctest::Approx(1.0).epsilon(1e-14));

    Rng rng(kDefaultSeed, {0, kStreamAux, 7});
    std::vector<double> a, b;
    testing::simulate_asym_logistic(rng, w, 0.5, 1'000'000, a, b);
    CHECK(std::abs(empirical_tdc(a, b, 5000) - tdc) < 0.03);
}

TEST_CASE("extremal index: tail-independent base gives one") {
    const auto zero = KStepTailFn::custom([](const auto&, const auto&) { return 0.0; }, true);
    const auto t = TFactorSpec::independent(FactorLawSpec::uniform01());
    const auto r = factor_moments(t, {1.0, 1.0});
    const auto v = theta_general_k(3, zero, t, {1.0, 1.0}, r, {1.0, 2.0});
    CHECK(v.value == 1.0);
    CHECK(v.method == "symbolic");
    ModelSpec p{YProcessSpec::parmax(0.7, 2.0, 2), TFactorSpec::common(FactorLawSpec::uniform01()), {1.0, 0.5}};
    CHECK(theta_for_model(p, {1.0, 1.0}).value == 1.0);
    CHECK_THROWS(theta_general_k(1, zero, t, {1.0, 1.0}, r, {1.0, 1.0}));
}

TEST_CASE("extremal index of the cross-max example with uniform factors") {
    // E(U1^b ^ U2^b)/r = 2/(b+2) for i.i.d. uniforms, so theta = 1 - sum tau_j/(b_j+2) / sum tau_j.
    const auto t = TFactorSpec::independent(FactorLawSpec::uniform01());
    const std::vector<double> beta{1.0, 2.0};
    const auto r = factor_moments(t, beta);
    for (auto tau : std::vector<std::vector<double>>{{1.0, 1.0}, {1.0, 3.0}, {0.0, 1.0}}) {
        const double expect = 1.0 - (tau[0] / 3.0 + tau[1] / 4.0) / (tau[0] + tau[1]);
        const auto v = theta_general_k(2, KStepTailFn::cross_max2(), t, beta, r, tau);
        CHECK(v.method == "monte_carlo");
        CHECK(within_se(v.value, expect, v.value_se));
        CHECK(v.value_se < 2e-3);
    }
}

TEST_CASE("thinned cross-max example") {
    for (double p : {0.3, 0.5, 0.7}) {
        const auto t = TFactorSpec::independent(FactorLawSpec::bernoulli(p));
        const std::vector<double> beta{1.0, 1.5};
        const auto r = factor_moments(t, beta);
        for (auto tau : std::vector<std::vector<double>>{{1.0, 1.0}, {2.0, 0.5}}) {
            const double expect = 1.0 - p * p / 2.0 * (tau[0] / r.r[0] + tau[1] / r.r[1]) / (tau[0] + tau[1]);
            const auto v = theta_general_k(2, KStepTailFn::cross_max2(), t, beta, r, tau);
            CHECK(v.value == doctest::Approx(expect).epsilon(1e-13));
            CHECK(v.value == doctest::Approx(1.0 - p / 2.0).epsilon(1e-13));
            ExpectationOptions mc;
            mc.max_atoms = 0;
            const auto s = theta_general_k(2, KStepTailFn::cross_max2(), t, beta, r, tau, mc);
            CHECK(within_se(s.value, expect, s.value_se));
        }
        const auto tm = theta_marginal(2, KStepTailFn::cross_max2(), t, beta, r, 1);
        CHECK(tm.value == doctest::Approx(1.0 - p / 2.0).epsilon(1e-13));
    }
}

TEST_CASE("ARMAX mixture extremal index") {
    for (double c : {0.5, 0.8})
        for (double a : {1.0, 2.0}) {
            CHECK(theta_armax_marginal(c, a, FactorLawSpec::degenerate()) == doctest::Approx(1.0 - std::pow(c, a)).epsilon(1e-13));
            CHECK(theta_armax_mixture(c, a, FactorLawSpec::degenerate(), {1.0, 2.0}).value ==
                  doctest::Approx(1.0 - std::pow(c, a)).epsilon(1e-13));
        }
    CHECK_THROWS_AS(theta_armax_mixture(0.8, 2.0, FactorLawSpec::uniform(0.5, 1.0), {1.0}), std::domain_error);
    CHECK_THROWS_AS(theta_armax_mixture(0.8, 2.0, FactorLawSpec::uniform01(), {1.0}), std::domain_error);

    // The displayed formula against the general inclusion-exclusion route.
    const auto h = FactorLawSpec::uniform(0.9, 1.0);
    ModelSpec m{YProcessSpec::armax(0.8, 2.0, 2), TFactorSpec::independent(h), {1.0, 1.0}};
    for (auto tau : std::vector<std::vector<double>>{{1.0, 1.0}, {1.0, 2.5}}) {
        const auto shown = theta_armax_mixture(0.8, 2.0, h, tau);
        const auto gen = theta_for_model(m, tau);
        CHECK(shown.value > 0.0);
        CHECK(shown.value <= 1.0);
        CHECK(within_se(gen.value, shown.value, gen.value_se));
    }

    // Runs estimator on the simulated two-margin path at equal exceedance levels.
    const double theory = theta_armax_mixture(0.8, 2.0, h, {1.0, 1.0}).value;
    std::vector<double> est;
    for (std::uint64_t rep = 0; rep < 4; ++rep) {
        const auto x = simulate_x(kDefaultSeed, m, 1'000'000, rep);
        const auto c0 = x.column(0), c1 = x.column(1);
        const double u0 = empirical_quantile(c0, 0.999), u1 = empirical_quantile(c1, 0.999);
        std::vector<double> mx(c0.size());
        for (std::size_t i = 0; i < mx.size(); ++i) mx[i] = std::max(c0[i] / u0, c1[i] / u1);
        est.push_back(runs_extremal_index(mx, 1.0, 5));
    }
    CHECK(std::abs(mean_sd(est).mean - theory) < 0.02);
}

TEST_CASE("moving-maxima mixture extremal index") {
    const auto fr = theta_movingmax_mixture(1.0, FactorLawSpec::frechet(1.0, 2.0), {1.0, 3.0});
    CHECK(fr.value == std::pow(2.0, -0.5));
    CHECK(fr.method == "closed_form");
    // Closed form against the general route.
    const auto t = TFactorSpec::independent(FactorLawSpec::frechet(1.0, 2.0));
    const auto gen = theta_general_k(2, KStepTailFn::moving_max2(), t, {1.0}, factor_moments(t, {1.0}), {1.0});
    CHECK(within_se(gen.value, fr.value, gen.value_se));

    CHECK(theta_movingmax_mixture(2.0, FactorLawSpec::degenerate(), {1.0}).value == doctest::Approx(0.5).epsilon(1e-14));
    for (double p : {0.3, 0.7})
        CHECK(theta_movingmax_mixture(1.0, FactorLawSpec::bernoulli(p), {1.0}).value ==
              doctest::Approx(1.0 - p / 2.0).epsilon(1e-13));

    const auto u = FactorLawSpec::uniform01();
    const auto q = theta_movingmax_mixture(1.0, u, {1.0, 2.0});
    CHECK(q.method == "quadrature");
    const auto tu = TFactorSpec::independent(u);
    const auto gu = theta_general_k(2, KStepTailFn::moving_max2(), tu, {1.0, 1.0}, factor_moments(tu, {1.0, 1.0}), {1.0, 2.0});
    CHECK(within_se(gu.value, q.value, gu.value_se));
}

TEST_CASE("lag tail dependence") {
    ModelSpec mm{YProcessSpec::moving_max2(1.5), TFactorSpec::degenerate(), {}};
    CHECK(lambda_ms(mm, 1, 0).value == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(lambda_ms(mm, 2, 0).value == 0.0);
    ModelSpec ar{YProcessSpec::armax(0.7, 2.0), TFactorSpec::degenerate(), {}};
    for (std::size_t m : {1, 2, 4})
        CHECK(lambda_ms(ar, m, 0).value == doctest::Approx(std::pow(0.7, 2.0 * m)).epsilon(1e-12));
    ModelSpec pa{YProcessSpec::parmax(0.9, 1.0, 2), TFactorSpec::independent(FactorLawSpec::uniform01()), {1.0, 2.0}};
    for (std::size_t m : {1, 2, 3})
        for (std::size_t s : {0, 1}) CHECK(lambda_ms(pa, m, s).value == 0.0);
    ModelSpec mf{YProcessSpec::moving_max2(1.0, 2), TFactorSpec::independent(FactorLawSpec::uniform01()), {1.0, 1.0}};
    const double v = lambda_ms(mf, 1, 1).value;
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    CHECK_THROWS(lambda_ms(mm, 0, 0));
    CHECK_THROWS(lambda_ms(mm, 1, 1));
}

TEST_CASE("asymptotic tail independence") {
    for (double c : {0.6, 0.8})
        for (std::size_t m : {1, 2, 3}) {
            ModelSpec p{YProcessSpec::parmax(c, 2.0), TFactorSpec::degenerate(), {}};
            const auto e = eta_mixture(p, m);
            CHECK(e.eta == std::max(0.5, std::pow(c, static_cast<double>(m))));
            CHECK(e.eta > 0.0);
            CHECK(e.eta <= 1.0);
            CHECK(e.multiplier == doctest::Approx(1.0).epsilon(1e-12));
        }
    ModelSpec pu{YProcessSpec::parmax(0.8, 1.0), TFactorSpec::independent(FactorLawSpec::uniform01()), {}};
    // E(U^(1/0.8)) / (E U)^(1/0.8) with U uniform.
    CHECK(eta_mixture(pu, 1).multiplier == doctest::Approx((1.0 / 2.25) / std::pow(0.5, 1.25)).epsilon(1e-10));
    ModelSpec cx{YProcessSpec::cross_max2({1.0, 2.0}), TFactorSpec::independent(FactorLawSpec::bernoulli(0.5)), {}};
    const auto e = eta_mixture(cx, 2, 1);
    CHECK(e.eta == 0.5);
    CHECK(e.multiplier == 1.0);
    ModelSpec ar{YProcessSpec::armax(0.7, 2.0), TFactorSpec::degenerate(), {}};
    CHECK_THROWS_AS(eta_mixture(ar, 1), std::domain_error);
}

TEST_CASE("moving-maxima Frechet-factor attractor") {
    CHECK(movingmax_mev_gumbel(1.0, 2.0, {1.7}).iid == doctest::Approx(std::exp(-1.0 / 1.7)).epsilon(1e-14));
    CHECK(movingmax_mev_gumbel(1.0, 3.0, {0.6, kInf, kInf}).iid == doctest::Approx(std::exp(-1.0 / 0.6)).epsilon(1e-14));
    CHECK(movingmax_mev_gumbel(1.0, 2.0, {1.0, 1.0}).dependent == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK_THROWS(movingmax_mev_gumbel(2.0, 2.0, {1.0}));
}
