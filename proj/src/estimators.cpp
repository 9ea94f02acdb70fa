#include "scalemix/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scalemix/numerics.hpp"

namespace scalemix {

namespace {

// Log-excesses log(X_(n-i+1) / X_(n-k)), i = 1..k, from a descending copy.
std::vector<double> log_excesses(std::span<const double> x, std::size_t k) {
    if (k < 1) throw std::invalid_argument("need k >= 1");
    if (k >= x.size()) throw std::invalid_argument("need k < n");
    std::vector<double> s(x.begin(), x.end());
    std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k), s.end(), std::greater<>());
    const double base = s[k];
    if (!(base > 0.0)) throw std::domain_error("top k+1 order statistics must be positive");
    std::vector<double> out(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(out.begin(), out.end(), std::greater<>());
    for (double& v : out) v = std::log(v / base);
    return out;
}

}  // namespace

double hill(std::span<const double> x, std::size_t k) {
    const auto l = log_excesses(x, k);
    double s = 0.0;
    for (double v : l) s += v;
    return s / static_cast<double>(k);
}

double moments_estimator(std::span<const double> x, std::size_t k) {
    const auto l = log_excesses(x, k);
    double m1 = 0.0, m2 = 0.0;
    for (double v : l) {
        m1 += v;
        m2 += v * v;
    }
    m1 /= static_cast<double>(k);
    m2 /= static_cast<double>(k);
    const double q = 1.0 - m1 * m1 / m2;
    if (!(m2 > 0.0) || !(q > 1e-14)) throw std::domain_error("moments estimator: degenerate sample");
    return m1 + 1.0 - 0.5 / q;
}

EstimatorTrace hill_trace(std::span<const double> x, const std::vector<std::size_t>& ks) {
    // One sort serves the whole grid.
    auto s = sorted_copy(x);
    EstimatorTrace t;
    const std::size_t n = s.size();
    std::size_t done = 0;
    double acc = 0.0;
    for (auto k : ks) {
        if (k < 1 || k >= n) throw std::invalid_argument("hill trace: k must satisfy 1 <= k < n");
        if (!t.k.empty() && k <= t.k.back()) throw std::invalid_argument("hill trace: k grid must increase");
        const double base = s[n - 1 - k];
        if (!(base > 0.0)) throw std::domain_error("top k+1 order statistics must be positive");
        for (; done < k; ++done) acc += std::log(s[n - 1 - done]);
        t.k.push_back(k);
        t.value.push_back(acc / static_cast<double>(k) - std::log(base));
    }
    return t;
}

EstimatorTrace moments_trace(std::span<const double> x, const std::vector<std::size_t>& ks) {
    auto s = sorted_copy(x);
    EstimatorTrace t;
    const std::size_t n = s.size();
    for (auto k : ks) {
        if (k < 1 || k >= n) throw std::invalid_argument("moments trace: k must satisfy 1 <= k < n");
        if (!t.k.empty() && k <= t.k.back()) throw std::invalid_argument("moments trace: k grid must increase");
        const double base = s[n - 1 - k];
        if (!(base > 0.0)) throw std::domain_error("top k+1 order statistics must be positive");
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double l = std::log(s[n - 1 - i] / base);
            m1 += l;
            m2 += l * l;
        }
        m1 /= static_cast<double>(k);
        m2 /= static_cast<double>(k);
        const double q = 1.0 - m1 * m1 / m2;
        t.k.push_back(k);
        t.value.push_back(m2 > 0.0 && q > 1e-14 ? m1 + 1.0 - 0.5 / q : std::nan(""));
    }
    return t;
}

std::vector<std::size_t> k_grid(std::size_t lo, std::size_t hi, std::size_t step) {
    if (lo < 1 || hi < lo || step < 1) throw std::invalid_argument("k grid: need 1 <= lo <= hi and step >= 1");
    std::vector<std::size_t> out;
    for (std::size_t k = lo; k <= hi; k += step) out.push_back(k);
    if (out.back() != hi) out.push_back(hi);
    return out;
}

std::vector<std::size_t> default_k_grid(std::size_t n, std::size_t points) {
    if (n < 7) throw std::invalid_argument("k grid: sample too small");
    const std::size_t hi = n - 1;
    const std::size_t step = std::max<std::size_t>(1, (hi - 5) / std::max<std::size_t>(points, 1));
    return k_grid(5, hi, step);
}

double runs_extremal_index(std::span<const double> x, double u, std::size_t run_gap) {
    if (run_gap < 1) throw std::invalid_argument("runs estimator: run gap must be >= 1");
    const std::size_t n = x.size();
    std::size_t exceed = 0, ends = 0;
    // Distance to the next exceedance, scanned backwards.
    std::size_t gap = run_gap;
    for (std::size_t i = n; i-- > 0;) {
        if (x[i] > u) {
            ++exceed;
            if (gap >= run_gap) ++ends;
            gap = 0;
        } else {
            ++gap;
        }
    }
    if (exceed == 0) throw std::domain_error("runs estimator: no exceedances of the threshold");
    return static_cast<double>(ends) / static_cast<double>(exceed);
}

double empirical_tdc(std::span<const double> x, std::span<const double> y, std::size_t k) {
    if (x.size() != y.size()) throw std::invalid_argument("empirical TDC: samples differ in length");
    const std::size_t n = x.size();
    if (k < 1) throw std::invalid_argument("empirical TDC: need k >= 1");
    if (k >= n) throw std::invalid_argument("empirical TDC: need k < n");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double cut = static_cast<double>(n - k);
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (rx[i] > cut && ry[i] > cut) ++c;
    return static_cast<double>(c) / static_cast<double>(k);
}

void lag_pairs(std::span<const double> x, std::size_t lag, std::vector<double>& a, std::vector<double>& b) {
    if (lag >= x.size()) throw std::invalid_argument("lag pairs: lag exceeds series length");
    a.assign(x.begin(), x.end() - static_cast<std::ptrdiff_t>(lag));
    b.assign(x.begin() + static_cast<std::ptrdiff_t>(lag), x.end());
}

std::vector<double> block_maxima(std::span<const double> x, std::size_t block) {
    if (block < 1) throw std::invalid_argument("block maxima: block length must be >= 1");
    if (block > x.size()) throw std::invalid_argument("block maxima: block length exceeds series length");
    std::vector<double> out;
    for (std::size_t i = 0; i + block <= x.size(); i += block)
        out.push_back(*std::max_element(x.begin() + static_cast<std::ptrdiff_t>(i),
                                        x.begin() + static_cast<std::ptrdiff_t>(i + block)));
    return out;
}

KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("KS test: empty sample");
    const auto s = sorted_copy(sample);
    const double n = static_cast<double>(s.size());
    double prev = 0.0, d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = cdf(s[i]);
        if (!(f >= 0.0 && f <= 1.0)) throw std::domain_error("KS test: reference CDF outside [0,1]");
        if (f < prev - 1e-12) throw std::domain_error("KS test: reference CDF is not monotone");
        prev = f;
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return {d, kolmogorov_sf(std::sqrt(n) * d), s.size()};
}

Diagnostics diagnostics(std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("diagnostics: need at least 2 observations");
    Diagnostics g;
    g.order_stat = sorted_copy(x);
    const std::size_t n = g.order_stat.size();
    if (!(g.order_stat.front() > 0.0)) throw std::domain_error("diagnostics: Pareto QQ needs positive values");
    for (std::size_t i = 0; i < n; ++i) {
        g.exp_quantile.push_back(-std::log(1.0 - static_cast<double>(i + 1) / static_cast<double>(n + 1)));
        g.log_order_stat.push_back(std::log(g.order_stat[i]));
    }
    double top = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        top += g.order_stat[n - k];
        const double u = g.order_stat[n - 1 - k];
        g.me_k.push_back(k);
        g.me_threshold.push_back(u);
        g.mean_excess.push_back(top / static_cast<double>(k) - u);
    }
    return g;
}

}  // namespace scalemix
