#include <cmath>
#include <sstream>

#include "doctest.h"
#include "scalemix/estimators.hpp"
#include "scalemix/numerics.hpp"
#include "scalemix/processes.hpp"

using namespace scalemix;

namespace {

double pareto_cdf(double a, double x) { return x <= 1.0 ? 0.0 : 1.0 - std::pow(x, -a); }

// KS acceptance count of the stationary marginal against Pareto(alpha). The
// statistic is computed on every `thin`-th value so its null law is the i.i.d. one.
int stationary_passes(const YProcessSpec& spec, int seeds, std::size_t n, std::size_t thin) {
    int pass = 0;
    for (int s = 0; s < seeds; ++s) {
        const auto y = simulate_y(1000 + s, spec, n).column(0);
        std::vector<double> sub;
        for (std::size_t i = 0; i < y.size(); i += thin) sub.push_back(y[i]);
        if (ks_test(sub, [&](double x) { return pareto_cdf(spec.alpha, x); }).p >= 0.01) ++pass;
    }
    return pass;
}

}  // namespace

TEST_CASE("pareto quantile endpoints") {
    CHECK(pareto_quantile(2.0, 0.0) == 1.0);
    CHECK(pareto_quantile(2.0, 0.75) == doctest::Approx(2.0).epsilon(1e-15));
    Rng rng(1);
    CHECK_THROWS(sample_pareto(rng, 0.0, 10));
    CHECK_THROWS(sample_pareto(rng, 1.0, 0));
}

TEST_CASE("pareto sample recovers the tail index") {
    int within = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        Rng rng(kDefaultSeed, {s, kStreamY, 0});
        const auto x = sample_pareto(rng, 1.82, 100'000);
        if (std::abs(hill(x, 500) - 1.0 / 1.82) < 0.05) ++within;
    }
    CHECK(within >= 90);
}

TEST_CASE("innovation laws") {
    CHECK(armax_innovation_cdf(0.5, 1.0, 4.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    for (double u : {0.01, 0.3, 0.9, 0.999}) {
        CHECK(armax_innovation_cdf(0.5, 1.0, armax_innovation_quantile(0.5, 1.0, u)) == doctest::Approx(u).epsilon(1e-10));
        CHECK(parmax_innovation_cdf(0.8, 2.0, parmax_innovation_quantile(0.8, 2.0, u)) == doctest::Approx(u).epsilon(1e-9));
    }
    CHECK_THROWS(armax_innovation_quantile(0.5, 1.0, 1.0));
    CHECK_THROWS(armax_innovation_quantile(0.5, 1.0, 0.0));
    // pARMAX innovation density is a proper law on (0, inf).
    for (double b : {1.0, 1.82, 3.0})
        for (double c : {0.3, 0.6, 0.9}) {
            const double mass = integrate_singular([&](double x) { return parmax_innovation_pdf(c, b, x); }, 0.0, 1.0) +
                                integrate_singular([&](double x) { return parmax_innovation_pdf(c, b, x); }, 1.0,
                                                   std::numeric_limits<double>::infinity());
            CHECK(std::abs(mass - 1.0) < 1e-6);
        }
}

TEST_CASE("recursions respect their monotone bounds") {
    const auto a = simulate_y(3, YProcessSpec::armax(0.7, 1.5), 20000).column(0);
    const auto p = simulate_y(3, YProcessSpec::parmax(0.7, 1.5), 20000).column(0);
    for (std::size_t i = 1; i < a.size(); ++i) {
        CHECK_MESSAGE(a[i] >= 0.7 * a[i - 1], i);
        CHECK_MESSAGE(p[i] >= std::pow(p[i - 1], 0.7), i);
        if (a[i] < 0.7 * a[i - 1] || p[i] < std::pow(p[i - 1], 0.7)) break;
    }
    CHECK_THROWS(YProcessSpec::armax(1.0, 1.0).validate());
    CHECK_THROWS(YProcessSpec::parmax(0.0, 1.0).validate());
}

TEST_CASE("simulation is deterministic") {
    ModelSpec m{YProcessSpec::moving_max2(1.0, 2), TFactorSpec::independent(FactorLawSpec::frechet(1.0, 2.0)), {}};
    const auto a = simulate_x(42, m, 5000, 3);
    const auto b = simulate_x(42, m, 5000, 3);
    CHECK(a.data() == b.data());
    CHECK(simulate_x(42, m, 5000, 4).data() != a.data());
    CHECK(simulate_x(43, m, 5000, 3).data() != a.data());
}

TEST_CASE("stationary marginals") {
    CHECK(stationary_passes(YProcessSpec::parmax(0.8, 2.0), 100, 100'000, 50) >= 95);
    CHECK(stationary_passes(YProcessSpec::armax(0.8, 2.0), 100, 100'000, 50) >= 95);
    CHECK(stationary_passes(YProcessSpec::moving_max2(2.0), 100, 100'000, 50) >= 95);
}

TEST_CASE("moving maxima are 2-dependent") {
    const auto y = simulate_y(11, YProcessSpec::moving_max2(1.0), 200'000).column(0);
    const double u = empirical_quantile(y, 0.95);
    std::vector<double> e(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) e[i] = y[i] > u ? 1.0 : 0.0;
    const double mu = mean_sd(e).mean;
    for (std::size_t lag : {1, 2, 3, 5}) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            den += (e[i] - mu) * (e[i] - mu);
            if (i + lag < e.size()) num += (e[i] - mu) * (e[i + lag] - mu);
        }
        const double acf = num / den;
        const double se = 1.0 / std::sqrt(static_cast<double>(e.size()));
        if (lag == 1)
            CHECK(acf > 10 * se);
        else
            CHECK(std::abs(acf) < 3 * se);
    }
}

TEST_CASE("factor draws") {
    const auto one = simulate_t(1, TFactorSpec::degenerate(), 100, 3);
    for (double v : one.data()) CHECK(v == 1.0);

    const auto b = simulate_t(1, TFactorSpec::independent(FactorLawSpec::bernoulli(0.3)), 100'000, 2);
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(mean_sd(b.column(j)).mean - 0.3) < 0.01);

    const auto c = simulate_t(1, TFactorSpec::common(FactorLawSpec::uniform01()), 1000, 4);
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 1; j < 4; ++j) CHECK(c(i, j) == c(i, 0));

    CHECK_THROWS(FactorLawSpec::frechet(1.0, 0.0).validate());
    ModelSpec bad{YProcessSpec::moving_max2(2.0), TFactorSpec::independent(FactorLawSpec::frechet(1.0, 2.0)), {}};
    CHECK_THROWS(bad.validate());
}

TEST_CASE("composition") {
    const auto y = SamplePath(2, 2, {4.0, 3.0, 5.0, 6.0});
    const auto t = SamplePath(2, 2, {0.5, 1.0, 0.0, 1.0});
    const auto x = compose_mixture(y, t);
    CHECK(x(0, 0) == 2.0);
    CHECK(x(1, 0) == 0.0);
    CHECK(x(1, 1) == 6.0);
    CHECK(compose_mixture(y, SamplePath(2, 2, {1.0, 1.0, 1.0, 1.0})).data() == y.data());
    CHECK_THROWS(compose_mixture(y, SamplePath(1, 2, {1.0, 1.0})));

    const auto z = SamplePath(1, 1, {0.25});
    CHECK(compose_common_factor({4.0}, z, {0.5})(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    const auto same = compose_common_factor({2.0, 3.0}, SamplePath(2, 2, {1.0, 1.0, 1.0, 1.0}), {1.0, 1.0});
    CHECK(same(1, 0) == 3.0);
    CHECK(same(1, 1) == 3.0);
    CHECK_THROWS(compose_common_factor({4.0}, z, {0.0}));
    CHECK_THROWS(compose_common_factor({4.0, 1.0}, z, {1.0}));
}

TEST_CASE("common-factor exponents set the margin tails") {
    ModelSpec m{YProcessSpec::iid_pareto({2.0}), TFactorSpec::degenerate(), {1.0, 2.0}};
    m.y = YProcessSpec::parmax(0.5, 2.0, 2);
    const auto x = simulate_x(9, m, 100'000);
    CHECK(std::abs(1.0 / hill(x.column(0), 1000) - 2.0) < 0.2);
    CHECK(std::abs(1.0 / hill(x.column(1), 1000) - 1.0) < 0.1);
    CHECK(m.margin_beta() == std::vector<double>{2.0, 1.0});
}

TEST_CASE("degenerate factors leave the tail unchanged") {
    ModelSpec m{YProcessSpec::armax(0.6, 1.5), TFactorSpec::degenerate(), {}};
    const auto x = simulate_x(5, m, 10000).column(0);
    const auto y = simulate_y(5, m.y, 10000).column(0);
    CHECK(hill(x, 300) == hill(y, 300));
}

TEST_CASE("factor moments") {
    CHECK(factor_moments(TFactorSpec::independent(FactorLawSpec::bernoulli(0.3)), {1.5}).r[0] == doctest::Approx(0.3));
    CHECK(factor_moments(TFactorSpec::degenerate(), {2.0}).r[0] == 1.0);
    CHECK(factor_moments(TFactorSpec::independent(FactorLawSpec::uniform01()), {2.0}).r[0] ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    // Frechet moment against direct quadrature of t^s dH(t).
    const double delta = 1.7, xi = 3.0, s = 1.2;
    const double quad = integrate_singular(
        [&](double t) { return t < 1e-2 ? 0.0 : std::pow(t, s) * delta * xi * std::pow(t, -xi - 1) * std::exp(-delta * std::pow(t, -xi)); },
        0.0, std::numeric_limits<double>::infinity());
    CHECK(factor_moments(TFactorSpec::independent(FactorLawSpec::frechet(delta, xi)), {s}).r[0] ==
          doctest::Approx(quad).epsilon(1e-8));
    std::vector<SubsetWeight> w{{{0, 1}, 0.5}, {{0}, 0.25}, {{1}, 0.25}};
    const auto r = factor_moments(TFactorSpec::subset(w), {1.0, 1.0}).r;
    CHECK(r[0] == doctest::Approx(0.75));
    CHECK(r[1] == doctest::Approx(0.75));
}

TEST_CASE("sample path serialisation round-trips") {
    ModelSpec m{YProcessSpec::cross_max2({1.0, 2.0}), TFactorSpec::independent(FactorLawSpec::bernoulli(0.4)), {}};
    const auto x = simulate_x(1, m, 500);
    std::stringstream csv;
    write_csv(csv, x);
    CHECK(csv.str().rfind("t,x1,x2\n", 0) == 0);
    CHECK(read_csv(csv).data() == x.data());
    std::stringstream bin;
    write_binary(bin, x);
    CHECK(bin.str().size() == 16 + 8 * 1000);
    const auto back = read_binary(bin);
    CHECK(back.rows() == 500);
    CHECK(back.data() == x.data());
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678})
        CHECK(parse_double(format_double(v)) == v);
}
