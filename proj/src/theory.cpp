#include "scalemix/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "scalemix/numerics.hpp"

namespace scalemix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Running sums for a ratio of two MC means.
struct RatioAcc {
    double sn = 0.0, sd = 0.0, snn = 0.0, sdd = 0.0, snd = 0.0;
    std::size_t m = 0;

    void add(double n, double d) {
        sn += n;
        sd += d;
        snn += n * n;
        sdd += d * d;
        snd += n * d;
        ++m;
    }
    [[nodiscard]] double mean_n() const { return sn / static_cast<double>(m); }
    [[nodiscard]] double mean_d() const { return sd / static_cast<double>(m); }
    [[nodiscard]] double var_n() const { return std::max(snn / m - mean_n() * mean_n(), 0.0); }
    [[nodiscard]] double var_d() const { return std::max(sdd / m - mean_d() * mean_d(), 0.0); }
    [[nodiscard]] double cov() const { return snd / m - mean_n() * mean_d(); }
};

void check_sizes(std::size_t d, const std::vector<double>& beta, const FactorMoments& r, std::size_t nx) {
    if (d == 0) throw std::invalid_argument("dimension must be at least 1");
    if (beta.size() != d || r.r.size() != d || nx != d)
        throw std::invalid_argument("dimension mismatch between beta, r and arguments");
    for (std::size_t j = 0; j < d; ++j) {
        if (!(beta[j] > 0.0)) throw std::invalid_argument("beta must be positive");
        if (!(r.r[j] > 0.0) || !std::isfinite(r.r[j]))
            throw std::domain_error("factor moment r_j must be finite and positive");
    }
}

double scaled(double t, double beta, double r) { return t > 0.0 ? std::pow(t, beta) / r : 0.0; }

// Iterates over all k-tuples of row atoms; f(rows, prob).
template <class F>
void for_each_atom_tuple(const std::vector<RowAtom>& atoms, std::size_t k, F&& f) {
    std::vector<std::size_t> idx(k, 0);
    std::vector<const std::vector<double>*> rows(k);
    while (true) {
        double p = 1.0;
        for (std::size_t t = 0; t < k; ++t) {
            rows[t] = &atoms[idx[t]].values;
            p *= atoms[idx[t]].prob;
        }
        if (p > 0.0) f(rows, p);
        std::size_t t = 0;
        while (t < k && ++idx[t] == atoms.size()) idx[t++] = 0;
        if (t == k) break;
    }
}

std::size_t checked_power(std::size_t base, std::size_t k, std::size_t cap) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (out > cap / std::max<std::size_t>(base, 1)) return cap + 1;
        out *= base;
    }
    return out;
}

// E g(T) over one factor row, exact for finite support and MC otherwise.
TheoryValue expect_row(const TFactorSpec& t_spec, std::size_t d,
                       const std::function<double(const std::vector<double>&)>& g,
                       const ExpectationOptions& opt, std::uint64_t tag) {
    TheoryValue out;
    if (t_spec.finite_support()) {
        const auto atoms = t_spec.row_atoms(d);
        if (atoms.size() <= opt.max_atoms) {
            double acc = 0.0;
            for (const auto& a : atoms)
                if (a.prob > 0.0) acc += a.prob * g(a.values);
            out.value = acc;
            out.method = "finite_support_sum";
            return out;
        }
    }
    Rng rng(opt.seed, {0, kStreamTheory, tag});
    std::vector<double> row(d);
    double s = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < opt.mc_draws; ++i) {
        t_spec.draw_row(rng, d, row.data());
        const double v = g(row);
        s += v;
        ss += v * v;
    }
    const double m = static_cast<double>(opt.mc_draws);
    out.value = s / m;
    out.stderr_ = std::sqrt(std::max(ss / m - out.value * out.value, 0.0) / m);
    out.method = "monte_carlo";
    return out;
}

// Marginal law of a single factor T_j.
FactorLawSpec margin_law(const TFactorSpec& t, const FactorMoments& r01, std::size_t j) {
    if (t.coupling != Coupling::Subset) return t.law;
    const double p = r01.r[j];
    if (p >= 1.0 - 1e-15) return FactorLawSpec::degenerate();
    return FactorLawSpec::bernoulli(p);
}

// E min(A, rho B) for independent A = T^ba / ra, B = T'^bb / rb.
double expected_min(const FactorLawSpec& ha, double ba, double ra, const FactorLawSpec& hb, double bb, double rb,
                    double rho) {
    if (ha.finite_support() && hb.finite_support()) {
        double acc = 0.0;
        for (const auto& a : ha.atoms())
            for (const auto& b : hb.atoms())
                acc += a.prob * b.prob * std::min(scaled(a.value, ba, ra), rho * scaled(b.value, bb, rb));
        return acc;
    }
    // E min = int_0^inf P(A > s) P(rho B > s) ds.
    auto surv = [](const FactorLawSpec& h, double b, double r, double s) {
        return 1.0 - h.cdf(std::pow(r * s, 1.0 / b));
    };
    auto f = [&](double s) { return surv(ha, ba, ra, s) * surv(hb, bb, rb, s / rho); };
    const double amax = std::pow(ha.upper(), ba) / ra;
    const double bmax = rho * std::pow(hb.upper(), bb) / rb;
    const double top = std::min(amax, bmax);
    if (std::isfinite(top)) return integrate(f, 0.0, top);
    return integrate_singular(f, 0.0, kInf);
}

}  // namespace

double expect_over_law(const FactorLawSpec& h, const std::function<double(double)>& g) {
    h.validate();
    if (h.finite_support()) {
        double acc = 0.0;
        for (const auto& a : h.atoms())
            if (a.prob > 0.0) acc += a.prob * g(a.value);
        return acc;
    }
    auto gq = [&](double u) {
        const double v = g(h.quantile(u));
        return std::isfinite(v) ? v : 0.0;
    };
    switch (h.law) {
        case FactorLaw::Frechet:
            return integrate_singular(gq, 0.0, 1.0);
        case FactorLaw::Tabulated: {
            // Integrate cell by cell so kinks of the interpolated quantile sit on endpoints.
            const double m = static_cast<double>(h.grid.size() - 1);
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < h.grid.size(); ++i)
                acc += integrate(gq, static_cast<double>(i) / m, static_cast<double>(i + 1) / m);
            return acc;
        }
        default:
            return integrate(gq, 0.0, 1.0);
    }
}

TheoryValue tail_copula_mixture(const TailCopulaFn& lambda_y, const TFactorSpec& t_spec,
                                const std::vector<double>& beta, const FactorMoments& r,
                                const std::vector<double>& x, const ExpectationOptions& opt) {
    const std::size_t d = lambda_y.dim();
    check_sizes(d, beta, r, x.size());
    t_spec.validate(d);
    if (lambda_y.family() == CopulaFamily::Sum) {
        // Linear in the arguments and E(T_j^beta_j)/r_j = 1.
        double s = 0.0;
        bool any = false;
        for (double v : x) {
            if (v < 0.0 || std::isnan(v)) throw std::domain_error("tail copula: arguments must be in [0, inf]");
            if (!std::isinf(v)) {
                s += v;
                any = true;
            }
        }
        if (!any) throw std::domain_error("tail copula: (inf,...,inf) is outside the domain");
        return {s, 0.0, "linearity"};
    }
    std::vector<double> y(d);
    auto g = [&](const std::vector<double>& t) {
        for (std::size_t j = 0; j < d; ++j) y[j] = std::isinf(x[j]) ? kInf : scaled(t[j], beta[j], r.r[j]) * x[j];
        return lambda_y(y);
    };
    return expect_row(t_spec, d, g, opt, 1);
}

TheoryValue mev_attractor(const TailCopulaFn& g_y, const TFactorSpec& t_spec, const std::vector<double>& beta,
                          const FactorMoments& r, const std::vector<double>& x, const ExpectationOptions& opt) {
    const std::size_t d = g_y.dim();
    check_sizes(d, beta, r, x.size());
    t_spec.validate(d);
    bool any = false;
    for (double v : x) {
        if (!(v > 0.0)) throw std::domain_error("MEV attractor: arguments must be positive");
        if (std::isfinite(v)) any = true;
    }
    if (!any) return {1.0, 0.0, "exact"};
    std::vector<double> y(d);
    auto g = [&](const std::vector<double>& t) {
        for (std::size_t j = 0; j < d; ++j) y[j] = std::isinf(x[j]) ? 0.0 : scaled(t[j], beta[j], r.r[j]) / x[j];
        return g_y.exponent(y);
    };
    TheoryValue e = expect_row(t_spec, d, g, opt, 2);
    if (!std::isfinite(e.value)) throw std::domain_error("MEV attractor: divergent expectation");
    const double v = std::exp(-e.value);
    return {v, v * e.stderr_, e.method};
}

double asym_logistic_tdc(std::size_t i, std::size_t j, const std::vector<SubsetWeight>& weights, double alpha_dep) {
    if (i == j) throw std::invalid_argument("asymmetric logistic TDC: need two distinct margins");
    if (!(alpha_dep > 0.0 && alpha_dep <= 1.0)) throw std::invalid_argument("dependence parameter must lie in (0,1]");
    std::size_t d = std::max(i, j) + 1;
    for (const auto& w : weights)
        for (auto m : w.members) d = std::max(d, m + 1);
    auto spec = TFactorSpec::subset(weights);
    spec.validate(d);
    const auto r = factor_moments(spec, std::vector<double>(d, 1.0)).r;
    double out = 0.0;
    for (const auto& w : weights) {
        const bool hi = std::find(w.members.begin(), w.members.end(), i) != w.members.end();
        const bool hj = std::find(w.members.begin(), w.members.end(), j) != w.members.end();
        if (!hi || !hj) continue;
        const double ti = w.p / r[i], tj = w.p / r[j];
        out += ti + tj - std::pow(std::pow(ti, 1.0 / alpha_dep) + std::pow(tj, 1.0 / alpha_dep), alpha_dep);
    }
    return std::clamp(out, 0.0, 1.0);
}

double asym_logistic_pickands(const std::vector<SubsetWeight>& weights, double alpha_dep, double w) {
    if (!(w >= 0.0 && w <= 1.0)) throw std::domain_error("Pickands function: w must lie in [0,1]");
    const auto f = TailCopulaFn::asym_logistic(2, weights, alpha_dep);
    return f.exponent({1.0 - w, w});
}

ThetaResult theta_general_k(std::size_t k, const KStepTailFn& lambda_k, const TFactorSpec& t_spec,
                            const std::vector<double>& beta, const FactorMoments& r,
                            const std::vector<double>& tau, const ExpectationOptions& opt) {
    if (k < 2) throw std::invalid_argument("extremal index: k must be at least 2");
    if (k > 20) throw std::invalid_argument("extremal index: k too large for inclusion-exclusion");
    const std::size_t d = tau.size();
    check_sizes(d, beta, r, d);
    t_spec.validate(d);
    double tsum = 0.0;
    for (double v : tau) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error("extremal index: tau must be finite and >= 0");
        tsum += v;
    }
    if (!(tsum > 0.0)) throw std::domain_error("extremal index: tau must have a positive component");
    ThetaResult res;
    if (lambda_k.time_independent()) {
        res.value = 1.0;
        res.numerator = 0.0;
        res.method = "symbolic";
        return res;
    }

    // Time sets I u {k-1} with I a nonempty subset of {0..k-2}.
    std::vector<std::vector<std::size_t>> sets;
    std::vector<double> signs;
    for (std::uint32_t mask = 1; mask < (1u << (k - 1)); ++mask) {
        std::vector<std::size_t> s;
        for (std::size_t t = 0; t + 1 < k; ++t)
            if (mask & (1u << t)) s.push_back(t);
        signs.push_back(s.size() % 2 ? 1.0 : -1.0);
        s.push_back(k - 1);
        sets.push_back(std::move(s));
    }
    const std::vector<std::size_t> last{k - 1};
    std::vector<std::vector<double>> x(k, std::vector<double>(d));
    auto eval = [&](const std::vector<const std::vector<double>*>& rows, double& num, double& den) {
        for (std::size_t t = 0; t < k; ++t)
            for (std::size_t j = 0; j < d; ++j) x[t][j] = tau[j] * scaled((*rows[t])[j], beta[j], r.r[j]);
        num = 0.0;
        for (std::size_t s = 0; s < sets.size(); ++s) num += signs[s] * lambda_k(sets[s], x);
        den = lambda_k(last, x);
    };

    if (t_spec.finite_support()) {
        const auto atoms = t_spec.row_atoms(d);
        if (checked_power(atoms.size(), k, opt.max_atoms) <= opt.max_atoms) {
            double n = 0.0, dd = 0.0, a = 0.0, b = 0.0;
            for_each_atom_tuple(atoms, k, [&](const std::vector<const std::vector<double>*>& rows, double p) {
                eval(rows, a, b);
                n += p * a;
                dd += p * b;
            });
            res.numerator = n;
            res.denominator = dd;
            res.value = 1.0 - n / dd;
            res.method = "finite_support_sum";
            return res;
        }
    }
    Rng rng(opt.seed, {0, kStreamTheory, 3, k});
    std::vector<std::vector<double>> draws(k, std::vector<double>(d));
    std::vector<const std::vector<double>*> rows(k);
    for (std::size_t t = 0; t < k; ++t) rows[t] = &draws[t];
    RatioAcc acc;
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < opt.mc_draws; ++i) {
        for (std::size_t t = 0; t < k; ++t) t_spec.draw_row(rng, d, draws[t].data());
        eval(rows, a, b);
        acc.add(a, b);
    }
    const double m = static_cast<double>(acc.m);
    const double mn = acc.mean_n(), md = acc.mean_d();
    const double ratio = mn / md;
    res.numerator = mn;
    res.denominator = md;
    res.numerator_se = std::sqrt(acc.var_n() / m);
    res.denominator_se = std::sqrt(acc.var_d() / m);
    res.value = 1.0 - ratio;
    res.value_se = std::sqrt(std::max(acc.var_n() - 2.0 * ratio * acc.cov() + ratio * ratio * acc.var_d(), 0.0) / m) / md;
    res.method = "monte_carlo";
    return res;
}

ThetaResult theta_marginal(std::size_t k, const KStepTailFn& lambda_k, const TFactorSpec& t_spec,
                           const std::vector<double>& beta, const FactorMoments& r, std::size_t j,
                           const ExpectationOptions& opt) {
    if (j >= beta.size()) throw std::invalid_argument("marginal extremal index: margin out of range");
    std::vector<double> tau(beta.size(), 0.0);
    tau[j] = 1.0;
    return theta_general_k(k, lambda_k, t_spec, beta, r, tau, opt);
}

KStepTailFn kstep_for_model(const ModelSpec& model) {
    switch (model.y.family) {
        case YFamily::IIDPareto: return KStepTailFn::iid();
        case YFamily::ARMAX: return KStepTailFn::armax(model.y.c, model.y.alpha);
        case YFamily::PARMAX: return KStepTailFn::parmax();
        case YFamily::MovingMax2: return KStepTailFn::moving_max2();
        case YFamily::CrossMax2Dep: return KStepTailFn::cross_max2();
    }
    throw std::logic_error("unknown base family");
}

std::vector<double> effective_beta(const ModelSpec& model) {
    // With T = Z^gamma the scaled factor T^beta becomes Z^alpha on every margin.
    if (model.y.is_common()) return std::vector<double>(model.dim(), model.y.alpha);
    return model.margin_beta();
}

ThetaResult theta_for_model(const ModelSpec& model, const std::vector<double>& tau, const ExpectationOptions& opt) {
    model.validate();
    if (tau.size() != model.dim()) throw std::invalid_argument("extremal index: need one tau per margin");
    const auto beta = effective_beta(model);
    const auto r = factor_moments(model.t, beta);
    return theta_general_k(2, kstep_for_model(model), model.t, beta, r, tau, opt);
}

ThetaResult theta_armax_mixture(double c, double alpha, const FactorLawSpec& h, const std::vector<double>& tau) {
    if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("ARMAX: c must lie in (0,1)");
    if (!(alpha > 0.0)) throw std::invalid_argument("ARMAX: alpha must be positive");
    h.validate();
    const double a = h.lower(), b = h.upper();
    if (!(a > 0.0) || !(c < a / b))
        throw std::domain_error("ARMAX mixture: factor support [a,b] must satisfy a > 0 and c < a/b");
    if (tau.empty()) throw std::invalid_argument("ARMAX mixture: empty tau");
    for (double t : tau)
        if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("ARMAX mixture: tau must be positive");
    const std::size_t d = tau.size();
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        auto pi_minus = [&](double z) {
            double p = 1.0;
            for (std::size_t i = 0; i < d; ++i)
                if (i != j) p *= h.cdf(std::pow(tau[j] / tau[i], 1.0 / alpha) * z);
            return p;
        };
        auto pi_full = [&](double y, bool below) {
            double p = 1.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double v = std::pow(tau[j] / tau[i], 1.0 / alpha) * y;
                p *= below ? h.cdf_below(v) : h.cdf(v);
            }
            return p;
        };
        const double nj = expect_over_law(h, [&](double z) {
            const double w = std::pow(z, alpha) * pi_minus(z);
            return w * (1.0 - pi_full(z / c, false)) + std::pow(c, alpha) * w * (1.0 - pi_full(c * z, true));
        });
        const double dj = expect_over_law(h, [&](double z) { return std::pow(z, alpha) * pi_minus(z); });
        num += tau[j] * nj;
        den += tau[j] * dj;
    }
    ThetaResult res;
    res.numerator = num;
    res.denominator = den;
    res.value = 1.0 - num / den;
    res.method = h.finite_support() ? "finite_support_sum" : "quadrature";
    return res;
}

double theta_armax_marginal(double c, double alpha, const FactorLawSpec& h) {
    return theta_armax_mixture(c, alpha, h, {1.0}).value;
}

ThetaResult theta_movingmax_mixture(double alpha, const FactorLawSpec& h, const std::vector<double>& tau,
                                    const ExpectationOptions& opt) {
    if (!(alpha > 0.0)) throw std::invalid_argument("moving maxima: alpha must be positive");
    h.validate();
    if (tau.empty()) throw std::invalid_argument("moving maxima: empty tau");
    for (double t : tau)
        if (!(t > 0.0) || !std::isfinite(t)) throw std::domain_error("moving maxima: tau must be positive");
    const double r = h.moment(alpha);
    if (!std::isfinite(r)) throw std::domain_error("moving maxima: E(Z^alpha) diverges");
    const std::size_t d = tau.size();
    ThetaResult res;
    if (h.law == FactorLaw::Frechet) {
        res.value = std::pow(2.0, alpha / h.xi - 1.0);
        res.method = "closed_form";
        return res;
    }
    if (h.finite_support()) {
        // Ties between the two factor draws matter here; use the exact k = 2 formula.
        const std::vector<double> beta(d, alpha);
        return theta_general_k(2, KStepTailFn::moving_max2(), TFactorSpec::independent(h), beta,
                               FactorMoments{std::vector<double>(d, r)}, tau, opt);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        auto pi_minus = [&](double z) {
            double p = 1.0;
            for (std::size_t i = 0; i < d; ++i)
                if (i != j) p *= h.cdf(std::pow(tau[j] / tau[i], 1.0 / alpha) * z);
            return p;
        };
        auto pi_full = [&](double z) { return pi_minus(z) * h.cdf(z); };
        num += tau[j] * expect_over_law(h, [&](double z) { return std::pow(z, alpha) * pi_minus(z) * (1.0 - pi_full(z)); });
        den += tau[j] * expect_over_law(h, [&](double z) { return std::pow(z, alpha) * pi_minus(z); });
    }
    res.numerator = num;
    res.denominator = den;
    res.value = 1.0 - num / den;
    res.method = "quadrature";
    return res;
}

TheoryValue lambda_ms(const ModelSpec& model, std::size_t m, std::size_t s) {
    model.validate();
    const std::size_t d = model.dim();
    if (m < 1) throw std::invalid_argument("lag m must be at least 1");
    if (s >= d) throw std::invalid_argument("margin offset s must be below d");
    double kappa = 0.0, rho = 1.0;
    switch (model.y.family) {
        case YFamily::IIDPareto:
        case YFamily::PARMAX:
            return {0.0, 0.0, "symbolic"};
        case YFamily::CrossMax2Dep:
            if (m != 1 || s != 0) return {0.0, 0.0, "symbolic"};
            kappa = 0.5;
            break;
        case YFamily::MovingMax2:
            if (m != 1) return {0.0, 0.0, "symbolic"};
            kappa = 0.5;
            break;
        case YFamily::ARMAX:
            kappa = 1.0;
            rho = std::pow(model.y.c, static_cast<double>(m) * model.y.alpha);
            break;
    }
    const auto beta = effective_beta(model);
    const auto r = factor_moments(model.t, beta);
    const auto r01 = model.t.coupling == Coupling::Subset ? factor_moments(model.t, std::vector<double>(d, 1.0)) : r;
    const auto ha = margin_law(model.t, r01, 0);
    const auto hb = margin_law(model.t, r01, s);
    const double v = kappa * expected_min(ha, beta[0], r.r[0], hb, beta[s], r.r[s], rho);
    const bool exact = ha.finite_support() && hb.finite_support();
    return {std::clamp(v, 0.0, 1.0), 0.0, exact ? "finite_support_sum" : "quadrature"};
}

EtaResult eta_mixture(const ModelSpec& model, std::size_t m, std::size_t s) {
    model.validate();
    const std::size_t d = model.dim();
    if (m < 1) throw std::invalid_argument("lag m must be at least 1");
    if (s >= d) throw std::invalid_argument("margin offset s must be below d");
    EtaResult out;
    switch (model.y.family) {
        case YFamily::ARMAX:
            throw std::domain_error("eta: ARMAX base is tail dependent at every lag");
        case YFamily::MovingMax2:
            if (m == 1) throw std::domain_error("eta: moving-maxima base is tail dependent at lag 1");
            return out;
        case YFamily::CrossMax2Dep:
            if (m == 1 && s == 0) throw std::domain_error("eta: cross-max base is tail dependent at lag (1,0)");
            return out;
        case YFamily::IIDPareto:
            return out;
        case YFamily::PARMAX: {
            const double cm = std::pow(model.y.c, static_cast<double>(m));
            out.eta = std::max(0.5, cm);
            if (cm <= 0.5) return out;
            const auto beta = effective_beta(model);
            const auto r = factor_moments(model.t, beta);
            const auto r01 =
                model.t.coupling == Coupling::Subset ? factor_moments(model.t, std::vector<double>(d, 1.0)) : r;
            const auto h = margin_law(model.t, r01, s);
            const double e = h.moment(model.y.alpha / cm);
            if (!std::isfinite(e)) throw std::domain_error("eta: E(Z^(alpha/c^m)) diverges");
            out.multiplier = e / std::pow(r.r[s], 1.0 / cm);
            return out;
        }
    }
    return out;
}

GumbelMev movingmax_mev_gumbel(double alpha, double xi, const std::vector<double>& x) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(xi > alpha)) throw std::domain_error("Frechet factor needs xi > alpha");
    if (x.empty()) throw std::invalid_argument("empty argument");
    double s = 0.0;
    for (double v : x) {
        if (!(v > 0.0)) throw std::domain_error("MEV arguments must be positive");
        if (std::isfinite(v)) s += std::pow(v, -xi / alpha);
    }
    const double ell = std::pow(s, alpha / xi);
    GumbelMev g;
    g.iid = std::exp(-ell);
    g.dependent = std::exp(-std::pow(2.0, alpha / xi - 1.0) * ell);
    return g;
}

}  // namespace scalemix
