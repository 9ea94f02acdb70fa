#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "scalemix/depfn.hpp"
#include "scalemix/theory.hpp"
#include "test_support.hpp"

using namespace scalemix;

namespace {

const std::vector<DepTag> kTags{DepTag::Pickands, DepTag::CaperaaFougeresGenest, DepTag::HallTajvidi,
                                DepTag::LescourretRobert};

void check_constraints(const DependenceFnEstimate& est) {
    const auto& w = est.w;
    const std::size_t m = w.size();
    for (auto tag : kTags) {
        const auto& a = est.get(tag);
        REQUIRE(a.size() == m);
        CHECK(a.front() == 1.0);
        CHECK(a.back() == 1.0);
        for (std::size_t i = 0; i < m; ++i) {
            CHECK(a[i] >= std::max(w[i], 1.0 - w[i]));
            CHECK(a[i] <= 1.0);
            CHECK(a[i] == a[m - 1 - i]);
        }
    }
}

}  // namespace

TEST_CASE("w grid") {
    const auto w = w_grid(11);
    CHECK(w.front() == 0.0);
    CHECK(w.back() == 1.0);
    CHECK(w[5] == 0.5);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(w[i] + w[10 - i] == 1.0);
    CHECK_THROWS(w_grid(1));
}

TEST_CASE("complete dependence") {
    std::vector<double> x(500);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 1.0 + std::fmod(i * 0.618034, 1.0) * 40.0;
    LrOptions opt;
    opt.k = 50;
    CHECK(lescourret_robert_raw(x, x, 0.5, opt) == doctest::Approx(0.5).epsilon(1e-14));
    const auto est = depfn_estimate(x, x, w_grid(21), opt);
    CHECK(est.lr[10] == doctest::Approx(0.5).epsilon(1e-14));
    for (auto tag : kTags) CHECK(est.get(tag)[10] < 0.52);
    check_constraints(est);
}

TEST_CASE("constraints hold exactly on arbitrary data") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed, {kStreamAux, 3});
        std::vector<double> x(2000), y(2000);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = 1.0 / rng.uniform_open();
            y[i] = seed % 2 ? x[i] * rng.uniform_open() + 1.0 : 1.0 / rng.uniform_open();
        }
        check_constraints(depfn_estimate(x, y, w_grid(seed % 2 ? 21 : 10)));
    }
    const auto w = w_grid(5);
    const auto c = constrain_dependence(w, {0.9, 0.2, 1.4, 0.7, 1.1}, {1.1, 0.7, 1.4, 0.2, 0.9});
    CHECK(c == std::vector<double>{1.0, 0.75, 1.0, 0.75, 1.0});
}

TEST_CASE("rank estimators are invariant under increasing marginal transforms") {
    Rng rng(6);
    std::vector<double> a, b;
    testing::simulate_asym_logistic(rng, {{{0, 1}, 0.5}, {{0}, 0.25}, {{1}, 0.25}}, 0.5, 1000, a, b);
    std::vector<double> la(a.size()), cb(b.size());
    std::transform(a.begin(), a.end(), la.begin(), [](double v) { return std::log(v); });
    std::transform(b.begin(), b.end(), cb.begin(), [](double v) { return 5.0 * v + 3.0; });
    const auto w = w_grid(11);
    for (auto tag : {DepTag::Pickands, DepTag::CaperaaFougeresGenest, DepTag::HallTajvidi})
        CHECK(depfn_single(a, b, w, tag) == depfn_single(la, cb, w, tag));
}

TEST_CASE("rank estimators track the asymmetric logistic dependence function") {
    const std::vector<SubsetWeight> weights{{{0, 1}, 0.5}, {{0}, 0.25}, {{1}, 0.25}};
    Rng rng(kDefaultSeed, {0, kStreamAux, 10});
    std::vector<double> a, b;
    testing::simulate_asym_logistic(rng, weights, 0.5, 20000, a, b);
    const auto w = w_grid(11);
    for (auto tag : {DepTag::Pickands, DepTag::CaperaaFougeresGenest, DepTag::HallTajvidi}) {
        const auto est = depfn_single(a, b, w, tag);
        for (std::size_t i = 1; i + 1 < w.size(); ++i)
            CHECK(std::abs(est[i] - asym_logistic_pickands(weights, 0.5, w[i])) < 0.03);
    }
}

TEST_CASE("input validation") {
    const std::vector<double> x{1.0, 2.0, 3.0}, y{1.0, 2.0};
    CHECK_THROWS(depfn_estimate(x, y, w_grid(5)));
    CHECK_THROWS(depfn_estimate(std::vector<double>{1.0}, std::vector<double>{1.0}, w_grid(5)));
    const std::vector<double> c(10, 2.0);
    CHECK_THROWS(depfn_estimate(c, c, w_grid(5)));
}
