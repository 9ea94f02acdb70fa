#include "scalemix/processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

namespace scalemix {

YProcessSpec YProcessSpec::iid_pareto(std::vector<double> beta) {
    YProcessSpec s;
    s.family = YFamily::IIDPareto;
    s.d = beta.size();
    s.beta = std::move(beta);
    s.validate();
    return s;
}

YProcessSpec YProcessSpec::armax(double c, double alpha, std::size_t d) {
    YProcessSpec s;
    s.family = YFamily::ARMAX;
    s.c = c;
    s.alpha = alpha;
    s.d = d;
    s.validate();
    return s;
}

YProcessSpec YProcessSpec::parmax(double c, double alpha, std::size_t d) {
    YProcessSpec s = armax(0.5, alpha, d);
    s.family = YFamily::PARMAX;
    s.c = c;
    s.validate();
    return s;
}

YProcessSpec YProcessSpec::moving_max2(double alpha, std::size_t d) {
    YProcessSpec s;
    s.family = YFamily::MovingMax2;
    s.alpha = alpha;
    s.d = d;
    s.validate();
    return s;
}

YProcessSpec YProcessSpec::cross_max2(std::vector<double> beta) {
    YProcessSpec s = iid_pareto(std::move(beta));
    s.family = YFamily::CrossMax2Dep;
    return s;
}

void YProcessSpec::validate() const {
    if (d == 0) throw std::invalid_argument("process spec: dimension must be >= 1");
    if (is_common()) {
        if (!(alpha > 0.0)) throw std::invalid_argument("process spec: alpha must be positive");
        if ((family == YFamily::ARMAX || family == YFamily::PARMAX) && !(c > 0.0 && c < 1.0))
            throw std::invalid_argument("process spec: c must lie in (0,1)");
        return;
    }
    if (beta.size() != d) throw std::invalid_argument("process spec: need one beta per margin");
    for (double b : beta)
        if (!(b > 0.0)) throw std::invalid_argument("process spec: beta must be positive");
}

bool YProcessSpec::is_common() const {
    return family == YFamily::ARMAX || family == YFamily::PARMAX || family == YFamily::MovingMax2;
}

std::size_t YProcessSpec::dim() const { return d; }

std::string YProcessSpec::describe() const {
    std::ostringstream os;
    switch (family) {
        case YFamily::IIDPareto: os << "iid_pareto"; break;
        case YFamily::ARMAX: os << "armax"; break;
        case YFamily::PARMAX: os << "parmax"; break;
        case YFamily::MovingMax2: os << "movingmax2"; break;
        case YFamily::CrossMax2Dep: os << "crossmax2"; break;
    }
    os << "(d=" << d;
    if (is_common()) {
        if (family != YFamily::MovingMax2) os << ",c=" << format_double(c);
        os << ",alpha=" << format_double(alpha);
    } else {
        os << ",beta=";
        for (std::size_t j = 0; j < beta.size(); ++j) os << (j ? ":" : "") << format_double(beta[j]);
    }
    if (burn_in) os << ",burn_in=" << burn_in;
    os << ")";
    return os.str();
}

std::vector<double> ModelSpec::gammas() const {
    if (gamma.empty()) return std::vector<double>(dim(), 1.0);
    return gamma;
}

std::vector<double> ModelSpec::margin_beta() const {
    if (!y.is_common()) return y.beta;
    auto g = gammas();
    std::vector<double> b(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) b[j] = y.alpha / g[j];
    return b;
}

void ModelSpec::validate() const {
    y.validate();
    t.validate(dim());
    if (!gamma.empty()) {
        if (!y.is_common()) throw std::invalid_argument("model spec: gamma only applies to common-factor families");
        if (gamma.size() != dim()) throw std::invalid_argument("model spec: need one gamma per margin");
        for (double g : gamma)
            if (!(g > 0.0)) throw std::invalid_argument("model spec: gamma must be positive");
    }
    // In the common-factor model T = Z^gamma, so E(T^beta) = E(Z^alpha).
    if (y.is_common())
        t.check_moments(std::vector<double>(dim(), y.alpha));
    else
        t.check_moments(margin_beta());
}

std::string ModelSpec::describe() const {
    std::ostringstream os;
    os << y.describe() << "*" << t.describe();
    if (!gamma.empty()) {
        os << "^gamma=";
        for (std::size_t j = 0; j < gamma.size(); ++j) os << (j ? ":" : "") << format_double(gamma[j]);
    }
    return os.str();
}

double pareto_quantile(double beta, double u) { return std::pow(1.0 - u, -1.0 / beta); }

std::vector<double> sample_pareto(Rng& rng, double beta, std::size_t n) {
    if (!(beta > 0.0)) throw std::invalid_argument("sample_pareto: beta must be positive");
    if (n == 0) throw std::invalid_argument("sample_pareto: n must be >= 1");
    std::vector<double> out(n);
    for (auto& x : out) x = pareto_quantile(beta, rng.uniform());
    return out;
}

double armax_innovation_cdf(double c, double alpha, double x) {
    if (x * c <= 1.0) return 0.0;
    return -std::expm1(-alpha * std::log(c * x)) / -std::expm1(-alpha * std::log(x));
}

double armax_innovation_quantile(double c, double alpha, double u) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("ARMAX innovation quantile: u must lie in (0,1)");
    const double s = (1.0 - u) / (std::pow(c, -alpha) - u);
    return std::pow(s, -1.0 / alpha);
}

namespace {

// g(y) = (1 - e^-y) / (1 - e^-y/c) with y = beta log x is the pARMAX innovation
// CDF; both its log and log-derivative are computed without cancellation.
double parmax_log_g(double c, double y) {
    const double a = 1.0 / c;
    if (std::abs(y) < 1e-4)
        return std::log(c) + std::log1p((a - 1.0) * y / 2.0 + (a * a / 12.0 - a / 4.0 + 1.0 / 6.0) * y * y);
    if (y > 0.0) return std::log(-std::expm1(-y)) - std::log(-std::expm1(-a * y));
    const double m = -y;  // numerator e^m - 1, denominator e^{a m} - 1
    return (m + std::log1p(-std::exp(-m))) - (a * m + std::log1p(-std::exp(-a * m)));
}

double parmax_dlog_g(double c, double y) {
    const double a = 1.0 / c;
    if (std::abs(y) < 1e-4) {
        const double k2 = a * a / 12.0 - a / 4.0 + 1.0 / 6.0;
        const double g = 1.0 + (a - 1.0) * y / 2.0 + k2 * y * y;
        return ((a - 1.0) / 2.0 + 2.0 * k2 * y) / g;
    }
    return 1.0 / std::expm1(y) - a / std::expm1(a * y);
}

}  // namespace

double parmax_innovation_cdf(double c, double beta, double x) {
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return std::exp(parmax_log_g(c, beta * std::log(x)));
}

double parmax_innovation_pdf(double c, double beta, double x) {
    if (x <= 0.0 || std::isinf(x)) return 0.0;
    const double y = beta * std::log(x);
    return std::exp(parmax_log_g(c, y)) * parmax_dlog_g(c, y) * beta / x;
}

double parmax_innovation_quantile(double c, double beta, double u) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("pARMAX innovation quantile: u must lie in (0,1)");
    const double target = std::log(u);
    auto h = [&](double y) { return parmax_log_g(c, y) - target; };
    double lo, hi;
    if (u < c) {
        hi = 0.0;
        lo = -(std::log(c / u) / (1.0 / c - 1.0) + 1.0);
        while (h(lo) > 0.0) lo *= 2.0;
    } else {
        lo = 0.0;
        hi = -std::log1p(-u) + 1.0;
        while (h(hi) < 0.0) hi *= 2.0;
    }
    if (h(lo) == 0.0) return std::exp(lo / beta);
    if (h(hi) == 0.0) return std::exp(hi / beta);
    std::uintmax_t iters = 200;
    auto r = boost::math::tools::toms748_solve(h, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
    return std::exp(0.5 * (r.first + r.second) / beta);
}

double movingmax_innovation_quantile(double alpha, double u) {
    // 1 - u^2 = (1-u)(1+u) keeps precision near u = 1.
    return std::pow((1.0 - u) * (1.0 + u), -1.0 / alpha);
}

std::vector<double> simulate_univariate(Rng& rng, const YProcessSpec& spec, std::size_t n) {
    spec.validate();
    if (n == 0) throw std::invalid_argument("simulate: n must be >= 1");
    std::vector<double> out(n);
    switch (spec.family) {
        case YFamily::ARMAX: {
            double prev = pareto_quantile(spec.alpha, rng.uniform());
            for (std::size_t i = 0; i < spec.burn_in + n; ++i) {
                const double w = armax_innovation_quantile(spec.c, spec.alpha, rng.uniform_open());
                prev = spec.c * std::max(prev, w);
                if (i >= spec.burn_in) out[i - spec.burn_in] = prev;
            }
            return out;
        }
        case YFamily::PARMAX: {
            double prev = pareto_quantile(spec.alpha, rng.uniform());
            for (std::size_t i = 0; i < spec.burn_in + n; ++i) {
                const double w = parmax_innovation_quantile(spec.c, spec.alpha, rng.uniform_open());
                prev = std::max(std::pow(prev, spec.c), w);
                if (i >= spec.burn_in) out[i - spec.burn_in] = prev;
            }
            return out;
        }
        case YFamily::MovingMax2: {
            double w_prev = movingmax_innovation_quantile(spec.alpha, rng.uniform());
            for (std::size_t i = 0; i < n; ++i) {
                const double w = movingmax_innovation_quantile(spec.alpha, rng.uniform());
                out[i] = std::max(w_prev, w);
                w_prev = w;
            }
            return out;
        }
        default:
            throw std::invalid_argument("simulate_univariate: family is not a univariate recursion");
    }
}

SamplePath simulate_y(std::uint64_t seed, const YProcessSpec& spec, std::size_t n,
                      std::uint64_t replication) {
    spec.validate();
    if (n == 0) throw std::invalid_argument("simulate_y: n must be >= 1");
    const std::size_t d = spec.dim();
    std::vector<double> v(n * d);
    if (spec.is_common()) {
        Rng rng(seed, {replication, kStreamY});
        auto y = simulate_univariate(rng, spec, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) v[i * d + j] = y[i];
    } else {
        for (std::size_t j = 0; j < d; ++j) {
            Rng rng(seed, {replication, kStreamY, j});
            const double b = spec.beta[j];
            if (spec.family == YFamily::IIDPareto) {
                for (std::size_t i = 0; i < n; ++i) v[i * d + j] = pareto_quantile(b, rng.uniform());
            } else {
                double w_prev = movingmax_innovation_quantile(b, rng.uniform());
                for (std::size_t i = 0; i < n; ++i) {
                    const double w = movingmax_innovation_quantile(b, rng.uniform());
                    v[i * d + j] = std::max(w_prev, w);
                    w_prev = w;
                }
            }
        }
    }
    return SamplePath(n, d, std::move(v), seed, fnv1a_hex(spec.describe()));
}

SamplePath simulate_t(std::uint64_t seed, const TFactorSpec& spec, std::size_t n, std::size_t d,
                      std::uint64_t replication) {
    spec.validate(d);
    if (n == 0) throw std::invalid_argument("simulate_t: n must be >= 1");
    std::vector<double> v(n * d);
    if (spec.coupling == Coupling::Independent) {
        for (std::size_t j = 0; j < d; ++j) {
            Rng rng(seed, {replication, kStreamT, j});
            for (std::size_t i = 0; i < n; ++i) v[i * d + j] = spec.law.draw(rng);
        }
    } else {
        Rng rng(seed, {replication, kStreamT});
        for (std::size_t i = 0; i < n; ++i) spec.draw_row(rng, d, v.data() + i * d);
    }
    return SamplePath(n, d, std::move(v), seed, fnv1a_hex(spec.describe()));
}

SamplePath compose_mixture(const SamplePath& y, const SamplePath& t) {
    if (y.rows() != t.rows() || y.cols() != t.cols())
        throw std::invalid_argument("compose_mixture: shape mismatch");
    std::vector<double> v(y.data().size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = y.data()[k] * t.data()[k];
    return SamplePath(y.rows(), y.cols(), std::move(v), y.seed(), y.spec_hash());
}

SamplePath compose_common_factor(const std::vector<double>& y, const SamplePath& z,
                                 const std::vector<double>& gamma) {
    if (y.size() != z.rows()) throw std::invalid_argument("compose_common_factor: length mismatch");
    if (gamma.size() != z.cols()) throw std::invalid_argument("compose_common_factor: need one gamma per column");
    for (double g : gamma)
        if (!(g > 0.0)) throw std::invalid_argument("compose_common_factor: gamma must be positive");
    const std::size_t n = z.rows(), d = z.cols();
    std::vector<double> v(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double base = y[i] * z(i, j);
            v[i * d + j] = gamma[j] == 1.0 ? base : std::pow(base, gamma[j]);
        }
    return SamplePath(n, d, std::move(v), z.seed(), z.spec_hash());
}

SamplePath simulate_x(std::uint64_t seed, const ModelSpec& spec, std::size_t n,
                      std::uint64_t replication) {
    spec.validate();
    const std::size_t d = spec.dim();
    auto t = simulate_t(seed, spec.t, n, d, replication);
    SamplePath x;
    if (spec.y.is_common()) {
        Rng rng(seed, {replication, kStreamY});
        auto y = simulate_univariate(rng, spec.y, n);
        x = compose_common_factor(y, t, spec.gammas());
    } else {
        x = compose_mixture(simulate_y(seed, spec.y, n, replication), t);
    }
    return SamplePath(n, d, std::vector<double>(x.data()), seed, fnv1a_hex(spec.describe()));
}

}  // namespace scalemix
