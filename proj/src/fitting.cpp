#include "scalemix/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scalemix/heavy_tail_test.hpp"
#include "scalemix/numerics.hpp"
#include "scalemix/processes.hpp"

namespace scalemix {

namespace {

bool is_constant(std::span<const double> x) {
    return std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
}

std::vector<std::size_t> grid_or_default(const std::vector<std::size_t>& ks, std::size_t n) {
    return ks.empty() ? default_k_grid(n) : ks;
}

}  // namespace

AffineTransform affine_preset(const std::string& name) {
    if (name == "sp500") return {13618.3, 1.1};
    if (name == "dj") return {15154.2, 1.1};
    throw std::invalid_argument("unknown affine preset '" + name + "' (expected sp500 or dj)");
}

AffineResult affine_pareto_transform(std::span<const double> v, std::optional<AffineTransform> fixed) {
    for (double x : v)
        if (!(x >= 0.0) || !std::isfinite(x)) throw std::domain_error("affine transform: series must be finite and >= 0");
    AffineResult out;
    if (fixed) {
        if (!(fixed->a > 0.0)) throw std::invalid_argument("affine transform: a must be positive");
        out.transform = *fixed;
    } else {
        const std::size_t n = v.size();
        if (n < 100) throw std::invalid_argument("affine transform: need at least 100 observations");
        if (is_constant(v)) throw std::domain_error("affine transform: constant series");
        const std::size_t k = default_k(n);
        // Pilot Hill estimate over the same upper half that enters the regression.
        const double beta0 = 1.0 / hill(v, n / 2);
        // Regress Pareto quantiles on the order statistics between the median
        // and the tail threshold, where both are estimated precisely.
        const auto s = sorted_copy(v);
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        std::size_t m = 0;
        for (std::size_t i = n / 2; i < n - k; ++i) {
            const double p = static_cast<double>(i + 1) / static_cast<double>(n + 1);
            const double q = std::pow(1.0 - p, -1.0 / beta0);
            sx += s[i];
            sy += q;
            sxx += s[i] * s[i];
            sxy += s[i] * q;
            ++m;
        }
        const double mm = static_cast<double>(m);
        const double var = sxx / mm - (sx / mm) * (sx / mm);
        if (!(var > 0.0)) throw std::domain_error("affine transform: degenerate upper half");
        const double a = (sxy / mm - (sx / mm) * (sy / mm)) / var;
        if (!(a > 0.0)) throw std::domain_error("affine transform: fitted slope is not positive");
        double b = sy / mm - a * sx / mm;
        if (a * s.front() + b < 1.0) b = 1.0 - a * s.front();
        out.transform = {a, b};
    }
    out.x.reserve(v.size());
    for (double x : v) out.x.push_back(out.transform.a * x + out.transform.b);
    return out;
}

std::size_t default_k(std::size_t n) { return std::max<std::size_t>(1, n / 15); }

BetaFit estimate_beta(std::span<const double> x, const std::vector<std::size_t>& ks, std::size_t k, double level) {
    const std::size_t n = x.size();
    if (is_constant(x)) throw std::domain_error("tail index: constant series");
    BetaFit f;
    f.k = k ? k : default_k(n);
    const auto grid = grid_or_default(ks, n);
    f.hill = hill_trace(x, grid);
    f.moments = moments_trace(x, grid);
    f.heavy_tail = heavy_tail_test(x, grid, level);
    const double stat = heavy_tail_statistic(x, f.k);
    if (stat > heavy_tail_critical_value(f.k, level))
        throw std::domain_error("heavy-tail test rejects a Frechet-domain tail at k = " + std::to_string(f.k));
    f.beta_hat = 1.0 / hill(x, f.k);
    return f;
}

std::vector<double> s_statistic(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("S statistic: need at least 3 observations");
    const auto r = max_ranks(x);
    const double n1 = static_cast<double>(n + 1);
    std::vector<double> s(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) s[i] = std::min(n1 / (n1 - r[i]), n1 / (n1 - r[i + 1]));
    return s;
}

CFit estimate_c(std::span<const double> x, const std::vector<std::size_t>& ks, std::size_t k) {
    CFit f;
    f.s = s_statistic(x);
    if (is_constant(f.s)) throw std::domain_error("S statistic is degenerate");
    f.k = k ? k : default_k(x.size());
    f.hill = hill_trace(f.s, grid_or_default(ks, f.s.size()));
    f.c_hat = std::min(hill(f.s, f.k), kMaxCHat);
    if (!(f.c_hat > 0.0)) throw std::domain_error("S statistic: nonpositive tail index");
    return f;
}

Innovations separate_innovations(std::span<const double> x, double c_hat) {
    if (!(c_hat > 0.0 && c_hat < 1.0)) throw std::invalid_argument("innovations: c must lie in (0,1)");
    Innovations out;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(x[i - 1] > 0.0)) throw std::domain_error("innovations: series must be positive");
        if (x[i] > std::pow(x[i - 1], c_hat)) {
            out.index.push_back(i);
            out.w.push_back(x[i]);
        } else {
            out.candidates.push_back(i);
        }
    }
    if (out.index.empty()) throw std::domain_error("innovations: empty innovation set");
    return out;
}

double capture_pi1(std::span<const double> x, double beta_hat, double c_hat) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double v = std::pow(x[i - 1], c_hat);
        den += parmax_innovation_cdf(c_hat, beta_hat, v);
        if (x[i] <= v) num += parmax_innovation_cdf(c_hat, beta_hat, x[i]);
    }
    if (!(den > 0.0)) return 0.5;
    return std::clamp(num / den, 1e-9, 1.0 - 1e-9);
}

double capture_ratio(double t, double pi1, const CaptureConfig& cfg) {
    const double b = cfg.beta_hat, c = cfg.c_hat;
    const double pi0 = 1.0 - pi1;
    const double e = cfg.alt_exponent ? -(b / c - 1.0) : -b / c - 1.0;
    // Common factor t^(-b/c) is divided out of both terms.
    const double f = pi0 * parmax_innovation_pdf(c, b, t);
    const double g = pi1 * std::pow(t, e + b / c) * parmax_innovation_cdf(c, b, t);
    if (!(f + g > 0.0)) return 1.0;
    return f / (f + g);
}

Capture capture_z(std::span<const double> x, const CaptureConfig& cfg) {
    if (!(cfg.upsilon > 0.0 && cfg.upsilon < 1.0)) throw std::invalid_argument("capture: upsilon must lie in (0,1)");
    if (!(cfg.c_hat > 0.0 && cfg.c_hat < 1.0)) throw std::invalid_argument("capture: c must lie in (0,1)");
    if (!(cfg.beta_hat > 0.0)) throw std::invalid_argument("capture: beta must be positive");
    Capture out;
    out.pi1 = capture_pi1(x, cfg.beta_hat, cfg.c_hat);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double v = std::pow(x[i - 1], cfg.c_hat);
        if (x[i] > v) continue;
        if (capture_ratio(x[i], out.pi1, cfg) <= cfg.upsilon) {
            out.index.push_back(i);
            out.z.push_back(x[i] / v);
        }
    }
    return out;
}

KsResult validate_z(std::span<const double> z, double beta_hat, double c_hat) {
    if (z.empty()) throw std::invalid_argument("Z validation: empty sample");
    for (double v : z)
        if (!(v > 0.0 && v <= 1.0)) throw std::domain_error("Z validation: values must lie in (0,1]");
    const double e = beta_hat / c_hat + 1.0;
    return ks_test(z, [e](double t) { return std::pow(std::clamp(t, 0.0, 1.0), e); });
}

PrarmaxFit fit_prarmax(std::span<const double> x, const FitConfig& cfg) {
    PrarmaxFit fit;
    auto fail = [&](int step, const std::string& msg) {
        fit.failed_step = step;
        fit.message = "step " + std::to_string(step) + ": " + msg;
        return fit;
    };
    const std::size_t n = x.size();
    if (n < 500) return fail(1, "need at least 500 observations");
    fit.k = cfg.k ? cfg.k : default_k(n);
    try {
        fit.beta = estimate_beta(x, {}, fit.k, cfg.level);
        fit.beta_hat = fit.beta.beta_hat;
    } catch (const std::exception& e) {
        return fail(1, e.what());
    }
    try {
        fit.c = estimate_c(x, {}, fit.k);
        fit.c_hat = fit.c.c_hat;
    } catch (const std::exception& e) {
        return fail(2, e.what());
    }
    try {
        fit.innovations = separate_innovations(x, fit.c_hat);
        const auto& w = fit.innovations.w;
        if (w.size() > kHeavyTailMinK + 1) {
            const auto grid = default_k_grid(w.size());
            fit.innovation_heavy_tail = heavy_tail_test(w, grid, cfg.level);
        }
    } catch (const std::exception& e) {
        return fail(3, e.what());
    }
    try {
        fit.capture = capture_z(x, {cfg.upsilon, fit.beta_hat, fit.c_hat, cfg.alt_exponent});
    } catch (const std::exception& e) {
        return fail(4, e.what());
    }
    if (fit.capture.z.empty()) return fail(4, "no observations captured");
    try {
        fit.ks = validate_z(fit.capture.z, fit.beta_hat, fit.c_hat);
    } catch (const std::exception& e) {
        return fail(5, e.what());
    }
    if (fit.ks.p < cfg.level) return fail(5, "KS test rejects the Beta(beta/c+1,1) law of Z");
    fit.ok = true;
    fit.message = "ok";
    return fit;
}

}  // namespace scalemix
