#include "scalemix/depfn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scalemix/estimators.hpp"
#include "scalemix/numerics.hpp"

namespace scalemix {

namespace {

void check_pairs(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("dependence function: samples differ in length");
    if (x.size() < 2) throw std::invalid_argument("dependence function: need at least 2 pairs");
}

// Unit-exponential pseudo-observations -log(R/(n+1)).
std::vector<double> pseudo_exp(std::span<const double> x) {
    auto r = average_ranks(x);
    const double n1 = static_cast<double>(x.size() + 1);
    bool varies = false;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (x[i] != x[0]) varies = true;
    if (!varies) throw std::domain_error("dependence function: degenerate margin");
    for (double& v : r) v = -std::log(v / n1);
    return r;
}

double min_ratio(double a, double b, double w) {
    if (w <= 0.0) return a;
    if (w >= 1.0) return b;
    return std::min(a / (1.0 - w), b / w);
}

double pickands_from(const std::vector<double>& e1, const std::vector<double>& e2, double w) {
    double s = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i) s += min_ratio(e1[i], e2[i], w);
    return static_cast<double>(e1.size()) / s;
}

double cfg_from(const std::vector<double>& e1, const std::vector<double>& e2, double w) {
    double lm = 0.0, l1 = 0.0, l2 = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i) {
        lm += std::log(min_ratio(e1[i], e2[i], w));
        l1 += std::log(e1[i]);
        l2 += std::log(e2[i]);
    }
    const double n = static_cast<double>(e1.size());
    return std::exp(-lm / n + (1.0 - w) * l1 / n + w * l2 / n);
}

std::vector<double> mean_normalized(std::vector<double> e) {
    double s = 0.0;
    for (double v : e) s += v;
    const double m = s / static_cast<double>(e.size());
    for (double& v : e) v /= m;
    return e;
}

struct LrData {
    std::vector<double> a, b;  // standardized joint exceedances
};

LrData lr_data(std::span<const double> x, std::span<const double> y, const LrOptions& opt) {
    check_pairs(x, y);
    const std::size_t n = x.size();
    const std::size_t k = opt.k ? opt.k : std::max<std::size_t>(1, n / 15);
    if (k >= n) throw std::invalid_argument("dependence function: need k < n");
    const auto sx = sorted_copy(x), sy = sorted_copy(y);
    const double ux = sx[n - 1 - k], uy = sy[n - 1 - k];
    const double bx = opt.beta_x > 0.0 ? opt.beta_x : 1.0 / hill(x, k);
    const double by = opt.beta_y > 0.0 ? opt.beta_y : 1.0 / hill(y, k);
    LrData d;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] > ux && y[i] > uy) {
            d.a.push_back(std::pow(x[i] / ux, bx));
            d.b.push_back(std::pow(y[i] / uy, by));
        }
    }
    if (d.a.empty()) throw std::domain_error("dependence function: no joint exceedances");
    return d;
}

double lr_from(const LrData& d, double w) {
    // Pairs zeroed by the indicator add nothing to either sum.
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < d.a.size(); ++i) {
        num += std::max((1.0 - w) * d.a[i], w * d.b[i]);
        den += (1.0 - w) * d.a[i] + w * d.b[i];
    }
    return num / den;
}

// Index of the mirror point 1 - w[i] in the grid, or npos.
std::vector<std::size_t> mirror_index(const std::vector<double>& w) {
    const std::size_t m = w.size();
    std::vector<std::size_t> out(m, m);
    for (std::size_t i = 0; i < m; ++i)
        if (std::abs(w[i] + w[m - 1 - i] - 1.0) < 1e-9) out[i] = m - 1 - i;
    return out;
}

template <class F>
std::vector<double> evaluate(const std::vector<double>& w, F&& f) {
    for (double v : w)
        if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("dependence function: w must lie in [0,1]");
    const auto mir = mirror_index(w);
    std::vector<double> raw(w.size()), raw_m(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) raw[i] = f(w[i]);
    for (std::size_t i = 0; i < w.size(); ++i) raw_m[i] = mir[i] < w.size() ? raw[mir[i]] : f(1.0 - w[i]);
    return constrain_dependence(w, raw, raw_m);
}

}  // namespace

const std::vector<double>& DependenceFnEstimate::get(DepTag tag) const {
    switch (tag) {
        case DepTag::Pickands: return pickands;
        case DepTag::CaperaaFougeresGenest: return cfg;
        case DepTag::HallTajvidi: return ht;
        case DepTag::LescourretRobert: return lr;
    }
    return pickands;
}

std::vector<double> w_grid(std::size_t m) {
    if (m < 2) throw std::invalid_argument("w grid: need at least 2 points");
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = static_cast<double>(i) / static_cast<double>(m - 1);
    return w;
}

double pickands_raw(std::span<const double> x, std::span<const double> y, double w) {
    check_pairs(x, y);
    return pickands_from(pseudo_exp(x), pseudo_exp(y), w);
}

double cfg_raw(std::span<const double> x, std::span<const double> y, double w) {
    check_pairs(x, y);
    return cfg_from(pseudo_exp(x), pseudo_exp(y), w);
}

double hall_tajvidi_raw(std::span<const double> x, std::span<const double> y, double w) {
    check_pairs(x, y);
    return pickands_from(mean_normalized(pseudo_exp(x)), mean_normalized(pseudo_exp(y)), w);
}

double lescourret_robert_raw(std::span<const double> x, std::span<const double> y, double w, const LrOptions& opt) {
    return lr_from(lr_data(x, y, opt), w);
}

std::vector<double> constrain_dependence(const std::vector<double>& w, const std::vector<double>& raw,
                                         const std::vector<double>& raw_mirror) {
    if (raw.size() != w.size() || raw_mirror.size() != w.size())
        throw std::invalid_argument("dependence function: grid size mismatch");
    const auto mir = mirror_index(w);
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        double lo = std::max(w[i], 1.0 - w[i]);
        if (mir[i] < w.size()) lo = std::max({lo, w[mir[i]], 1.0 - w[mir[i]]});
        const double a = std::clamp(raw[i], lo, 1.0);
        const double b = std::clamp(raw_mirror[i], lo, 1.0);
        out[i] = mir[i] == i ? a : (a + b) / 2.0;
    }
    return out;
}

std::vector<double> depfn_single(std::span<const double> x, std::span<const double> y,
                                 const std::vector<double>& w, DepTag tag, const LrOptions& opt) {
    check_pairs(x, y);
    switch (tag) {
        case DepTag::Pickands: {
            const auto e1 = pseudo_exp(x), e2 = pseudo_exp(y);
            return evaluate(w, [&](double v) { return pickands_from(e1, e2, v); });
        }
        case DepTag::CaperaaFougeresGenest: {
            const auto e1 = pseudo_exp(x), e2 = pseudo_exp(y);
            return evaluate(w, [&](double v) { return cfg_from(e1, e2, v); });
        }
        case DepTag::HallTajvidi: {
            const auto e1 = mean_normalized(pseudo_exp(x)), e2 = mean_normalized(pseudo_exp(y));
            return evaluate(w, [&](double v) { return pickands_from(e1, e2, v); });
        }
        case DepTag::LescourretRobert: {
            const auto d = lr_data(x, y, opt);
            return evaluate(w, [&](double v) { return lr_from(d, v); });
        }
    }
    return {};
}

DependenceFnEstimate depfn_estimate(std::span<const double> x, std::span<const double> y,
                                    const std::vector<double>& w, const LrOptions& opt) {
    DependenceFnEstimate e;
    e.w = w;
    e.pickands = depfn_single(x, y, w, DepTag::Pickands, opt);
    e.cfg = depfn_single(x, y, w, DepTag::CaperaaFougeresGenest, opt);
    e.ht = depfn_single(x, y, w, DepTag::HallTajvidi, opt);
    e.lr = depfn_single(x, y, w, DepTag::LescourretRobert, opt);
    return e;
}

}  // namespace scalemix
