#include "scalemix/tail_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "scalemix/sample_path.hpp"

namespace scalemix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double a) {
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("logistic dependence parameter must lie in (0,1]");
}

}  // namespace

TailCopulaFn TailCopulaFn::min(std::size_t d) { return TailCopulaFn(CopulaFamily::Min, d, 0.0); }
TailCopulaFn TailCopulaFn::sum(std::size_t d) { return TailCopulaFn(CopulaFamily::Sum, d, 1.0); }
TailCopulaFn TailCopulaFn::cross_max2(std::size_t d) { return TailCopulaFn(CopulaFamily::CrossMax2Dep, d, 1.0); }

TailCopulaFn TailCopulaFn::logistic(std::size_t d, double alpha_dep) {
    check_alpha(alpha_dep);
    return TailCopulaFn(CopulaFamily::Logistic, d, alpha_dep);
}

TailCopulaFn TailCopulaFn::asym_logistic(std::size_t d, std::vector<SubsetWeight> weights, double alpha_dep) {
    check_alpha(alpha_dep);
    auto spec = TFactorSpec::subset(std::move(weights));
    spec.validate(d);
    TailCopulaFn f(CopulaFamily::AsymLogistic, d, alpha_dep);
    std::vector<double> r = factor_moments(spec, std::vector<double>(d, 1.0)).r;
    f.weights_ = spec.subsets;
    for (const auto& w : f.weights_) {
        std::vector<double> th(d, 0.0);
        for (auto i : w.members) th[i] = w.p / r[i];
        f.theta_.push_back(std::move(th));
    }
    return f;
}

double TailCopulaFn::ell_finite(const std::vector<double>& x) const {
    switch (family_) {
        case CopulaFamily::Min:
            return *std::max_element(x.begin(), x.end());
        case CopulaFamily::Sum:
        case CopulaFamily::CrossMax2Dep: {
            double s = 0.0;
            for (double v : x) s += v;
            return s;
        }
        case CopulaFamily::Logistic: {
            double s = 0.0;
            for (double v : x)
                if (v > 0.0) s += std::pow(v, 1.0 / alpha_);
            return std::pow(s, alpha_);
        }
        case CopulaFamily::AsymLogistic: {
            double total = 0.0;
            for (const auto& th : theta_) {
                double s = 0.0;
                for (std::size_t i = 0; i < d_; ++i)
                    if (th[i] > 0.0 && x[i] > 0.0) s += std::pow(th[i] * x[i], 1.0 / alpha_);
                if (s > 0.0) total += std::pow(s, alpha_);
            }
            return total;
        }
    }
    return 0.0;
}

double TailCopulaFn::exponent(const std::vector<double>& x) const {
    if (x.size() != d_) throw std::invalid_argument("tail function: dimension mismatch");
    for (double v : x) {
        if (v < 0.0 || std::isnan(v)) throw std::domain_error("tail function: arguments must be in [0, inf]");
        if (std::isinf(v)) return kInf;
    }
    return ell_finite(x);
}

double TailCopulaFn::operator()(const std::vector<double>& x) const {
    if (x.size() != d_) throw std::invalid_argument("tail function: dimension mismatch");
    std::vector<std::size_t> fin;
    for (std::size_t j = 0; j < d_; ++j) {
        if (x[j] < 0.0 || std::isnan(x[j])) throw std::domain_error("tail function: arguments must be in [0, inf]");
        if (!std::isinf(x[j])) fin.push_back(j);
    }
    if (fin.empty()) throw std::domain_error("tail function: (inf,...,inf) is outside the domain");
    if (family_ == CopulaFamily::Sum) {
        double s = 0.0;
        for (auto j : fin) s += x[j];
        return s;
    }
    for (auto j : fin)
        if (x[j] == 0.0) return 0.0;
    if (family_ == CopulaFamily::Min) {
        double m = kInf;
        for (auto j : fin) m = std::min(m, x[j]);
        return m;
    }
    if (family_ == CopulaFamily::CrossMax2Dep) return fin.size() == 1 ? x[fin[0]] : 0.0;
    // Inclusion-exclusion of the exponent over nonempty subsets of the finite coordinates.
    const std::size_t m = fin.size();
    if (m > 20) throw std::invalid_argument("tail function: too many coordinates for inclusion-exclusion");
    double acc = 0.0;
    std::vector<double> sub(d_);
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        std::fill(sub.begin(), sub.end(), 0.0);
        int bits = 0;
        for (std::size_t k = 0; k < m; ++k)
            if (mask & (1u << k)) {
                sub[fin[k]] = x[fin[k]];
                ++bits;
            }
        acc += (bits % 2 ? 1.0 : -1.0) * ell_finite(sub);
    }
    return std::max(acc, 0.0);
}

std::string TailCopulaFn::describe() const {
    std::ostringstream os;
    switch (family_) {
        case CopulaFamily::Min: os << "min"; break;
        case CopulaFamily::Sum: os << "sum"; break;
        case CopulaFamily::Logistic: os << "logistic(alpha=" << format_double(alpha_) << ")"; break;
        case CopulaFamily::AsymLogistic: os << "asym_logistic(alpha=" << format_double(alpha_) << ")"; break;
        case CopulaFamily::CrossMax2Dep: os << "crossmax2"; break;
    }
    os << "[d=" << d_ << "]";
    return os.str();
}

KStepTailFn KStepTailFn::cross_max2() {
    KStepTailFn f;
    f.family_ = KStepFamily::CrossMax2Dep;
    return f;
}

KStepTailFn KStepTailFn::armax(double c, double alpha) {
    if (!(c > 0.0 && c < 1.0) || !(alpha > 0.0)) throw std::invalid_argument("ARMAX tail function: bad parameters");
    KStepTailFn f;
    f.family_ = KStepFamily::ARMAX;
    f.c_ = c;
    f.alpha_ = alpha;
    return f;
}

KStepTailFn KStepTailFn::moving_max2() {
    KStepTailFn f;
    f.family_ = KStepFamily::MovingMax2;
    return f;
}

KStepTailFn KStepTailFn::parmax() {
    KStepTailFn f;
    f.family_ = KStepFamily::PARMAX;
    return f;
}

KStepTailFn KStepTailFn::iid() { return KStepTailFn{}; }

KStepTailFn KStepTailFn::custom(Fn fn, bool time_independent) {
    KStepTailFn f;
    f.family_ = KStepFamily::Custom;
    f.fn_ = std::move(fn);
    f.custom_independent_ = time_independent;
    return f;
}

bool KStepTailFn::time_independent() const {
    switch (family_) {
        case KStepFamily::PARMAX:
        case KStepFamily::IIDPareto:
            return true;
        case KStepFamily::Custom:
            return custom_independent_;
        default:
            return false;
    }
}

double KStepTailFn::operator()(const std::vector<std::size_t>& times,
                               const std::vector<std::vector<double>>& x) const {
    if (times.empty()) throw std::invalid_argument("k-step tail function: empty time set");
    if (family_ == KStepFamily::Custom) return fn_(times, x);
    auto vmax = [&](std::size_t t) { return *std::max_element(x[t].begin(), x[t].end()); };
    auto vsum = [&](std::size_t t) {
        double s = 0.0;
        for (double v : x[t]) s += v;
        return s;
    };
    const bool single = times.size() == 1;
    const bool adjacent_pair = times.size() == 2 && times[1] == times[0] + 1;
    switch (family_) {
        case KStepFamily::IIDPareto:
            return single ? vsum(times[0]) : 0.0;
        case KStepFamily::PARMAX:
            return single ? vmax(times[0]) : 0.0;
        case KStepFamily::CrossMax2Dep: {
            if (single) return vsum(times[0]);
            if (!adjacent_pair) return 0.0;
            const auto& a = x[times[0]];
            const auto& b = x[times[1]];
            double s = 0.0;
            for (std::size_t j = 0; j < a.size(); ++j) s += 0.5 * std::min(a[j], b[j]);
            return s;
        }
        case KStepFamily::MovingMax2:
            if (single) return vmax(times[0]);
            return adjacent_pair ? 0.5 * std::min(vmax(times[0]), vmax(times[1])) : 0.0;
        case KStepFamily::ARMAX: {
            // An extreme innovation at the earliest time decays by c per step.
            double m = kInf;
            for (auto t : times)
                m = std::min(m, vmax(t) * std::pow(c_, static_cast<double>(t - times[0]) * alpha_));
            return m;
        }
        case KStepFamily::Custom:
            break;
    }
    return 0.0;
}

}  // namespace scalemix
