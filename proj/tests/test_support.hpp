#pragma once

#include <cmath>
#include <vector>

#include "scalemix/factors.hpp"
#include "scalemix/rng.hpp"

namespace scalemix::testing {

// Positive alpha-stable variable with Laplace transform exp(-t^alpha) (Kanter).
inline double positive_stable(Rng& rng, double a) {
    if (a >= 1.0) return 1.0;
    const double pi = 3.14159265358979323846;
    const double u = pi * rng.uniform_open();
    const double e = rng.exponential();
    return std::sin(a * u) / std::pow(std::sin(u), 1.0 / a) * std::pow(std::sin((1.0 - a) * u) / e, (1.0 - a) / a);
}

// Bivariate asymmetric logistic pairs with unit Frechet margins; the weights
// p(J) define theta_Ji = p(J)/r_i as in the mixture representation.
inline void simulate_asym_logistic(Rng& rng, const std::vector<SubsetWeight>& w, double a, std::size_t n,
                                   std::vector<double>& x, std::vector<double>& y) {
    double r[2] = {0.0, 0.0};
    for (const auto& s : w)
        for (auto m : s.members) r[m] += s.p;
    x.assign(n, 0.0);
    y.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double out[2] = {0.0, 0.0};
        for (const auto& s : w) {
            const double st = s.members.size() > 1 ? positive_stable(rng, a) : 1.0;
            for (auto m : s.members) {
                const double v = s.members.size() > 1 ? std::pow(st / rng.exponential(), a) : 1.0 / rng.exponential();
                out[m] = std::max(out[m], s.p / r[m] * v);
            }
        }
        x[i] = out[0];
        y[i] = out[1];
    }
}

// Beta(b, 1) draws by inversion.
inline double beta_b1(Rng& rng, double b) { return std::pow(rng.uniform_open(), 1.0 / b); }

}  // namespace scalemix::testing
