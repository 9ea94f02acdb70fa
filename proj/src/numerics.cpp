#include "scalemix/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace scalemix {

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol);
}

double integrate_singular(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    // integrate() is not const-qualified in this Boost version.
    thread_local boost::math::quadrature::tanh_sinh<double> ts(12);
    auto g = [&f](double x) { return f(x); };
    return ts.integrate(g, a, b, tol);
}

double kolmogorov_sf(double x) {
    if (x <= 0.0) return 1.0;
    if (x < 1.0) {
        // Small-x series: P(K <= x) = sqrt(2 pi)/x sum exp(-(2k-1)^2 pi^2 / (8 x^2)).
        const double pi = 3.14159265358979323846;
        double s = 0.0;
        for (int k = 1; k <= 20; ++k) {
            const double m = 2.0 * k - 1.0;
            s += std::exp(-m * m * pi * pi / (8.0 * x * x));
        }
        return 1.0 - std::sqrt(2.0 * pi) / x * s;
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        s += (k % 2 ? 2.0 : -2.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(s, 0.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

std::vector<double> max_ranks(std::span<const double> x) {
    auto s = sorted_copy(x);
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        r[i] = static_cast<double>(std::upper_bound(s.begin(), s.end(), x[i]) - s.begin());
    return r;
}

std::vector<double> sorted_copy(std::span<const double> x) {
    std::vector<double> s(x.begin(), x.end());
    std::sort(s.begin(), s.end());
    return s;
}

double empirical_quantile(std::span<const double> x, double q) {
    if (x.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("empirical_quantile: q must lie in (0,1)");
    std::vector<double> s(x.begin(), x.end());
    auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(s.size())));
    if (k == 0) k = 1;
    std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k - 1), s.end());
    return s[k - 1];
}

MeanSd mean_sd(std::vector<double> values) {
    MeanSd out;
    out.n = values.size();
    if (values.empty()) return out;
    std::sort(values.begin(), values.end());
    double s = 0.0;
    for (double v : values) s += v;
    out.mean = s / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - out.mean) * (v - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return out;
}

}  // namespace scalemix
