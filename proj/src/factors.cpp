#include "scalemix/factors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "scalemix/sample_path.hpp"

namespace scalemix {

FactorLawSpec FactorLawSpec::degenerate() { return {}; }

FactorLawSpec FactorLawSpec::bernoulli(double p) {
    FactorLawSpec s;
    s.law = FactorLaw::Bernoulli;
    s.p = p;
    s.validate();
    return s;
}

FactorLawSpec FactorLawSpec::frechet(double delta, double xi) {
    FactorLawSpec s;
    s.law = FactorLaw::Frechet;
    s.delta = delta;
    s.xi = xi;
    s.validate();
    return s;
}

FactorLawSpec FactorLawSpec::uniform01() {
    FactorLawSpec s;
    s.law = FactorLaw::Uniform01;
    return s;
}

FactorLawSpec FactorLawSpec::tabulated(std::vector<double> quantiles) {
    FactorLawSpec s;
    s.law = FactorLaw::Tabulated;
    s.grid = std::move(quantiles);
    s.validate();
    return s;
}

FactorLawSpec FactorLawSpec::uniform(double a, double b) { return tabulated({a, b}); }

void FactorLawSpec::validate() const {
    switch (law) {
        case FactorLaw::Degenerate:
        case FactorLaw::Uniform01:
            return;
        case FactorLaw::Bernoulli:
            if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("Bernoulli factor: p must be in (0,1)");
            return;
        case FactorLaw::Frechet:
            if (!(delta > 0.0 && xi > 0.0))
                throw std::invalid_argument("Frechet factor: delta and xi must be positive");
            return;
        case FactorLaw::Tabulated:
            if (grid.size() < 2) throw std::invalid_argument("tabulated factor: need at least 2 grid points");
            if (!(grid.front() > 0.0)) throw std::invalid_argument("tabulated factor: support must be positive");
            for (std::size_t i = 1; i < grid.size(); ++i)
                if (!(grid[i] > grid[i - 1]) || !std::isfinite(grid[i]))
                    throw std::invalid_argument("tabulated factor: quantile grid must be strictly increasing");
            return;
    }
}

bool FactorLawSpec::finite_support() const {
    return law == FactorLaw::Degenerate || law == FactorLaw::Bernoulli;
}

std::vector<Atom> FactorLawSpec::atoms() const {
    if (law == FactorLaw::Degenerate) return {{1.0, 1.0}};
    if (law == FactorLaw::Bernoulli) return {{0.0, 1.0 - p}, {1.0, p}};
    throw std::logic_error("atoms() on a continuous factor law");
}

double FactorLawSpec::quantile(double u) const {
    switch (law) {
        case FactorLaw::Degenerate:
            return 1.0;
        case FactorLaw::Bernoulli:
            return u < 1.0 - p ? 0.0 : 1.0;
        case FactorLaw::Frechet:
            if (u <= 0.0) return 0.0;
            if (u >= 1.0) return std::numeric_limits<double>::infinity();
            return std::pow(delta / -std::log(u), 1.0 / xi);
        case FactorLaw::Uniform01:
            return std::clamp(u, 0.0, 1.0);
        case FactorLaw::Tabulated: {
            const double m = static_cast<double>(grid.size() - 1);
            const double pos = std::clamp(u, 0.0, 1.0) * m;
            auto i = static_cast<std::size_t>(pos);
            if (i >= grid.size() - 1) return grid.back();
            const double f = pos - static_cast<double>(i);
            return grid[i] + f * (grid[i + 1] - grid[i]);
        }
    }
    return 0.0;
}

double FactorLawSpec::cdf(double x) const {
    switch (law) {
        case FactorLaw::Degenerate:
            return x >= 1.0 ? 1.0 : 0.0;
        case FactorLaw::Bernoulli:
            return x < 0.0 ? 0.0 : (x < 1.0 ? 1.0 - p : 1.0);
        case FactorLaw::Frechet:
            return x <= 0.0 ? 0.0 : std::exp(-delta * std::pow(x, -xi));
        case FactorLaw::Uniform01:
            return std::clamp(x, 0.0, 1.0);
        case FactorLaw::Tabulated: {
            if (x <= grid.front()) return 0.0;
            if (x >= grid.back()) return 1.0;
            auto it = std::upper_bound(grid.begin(), grid.end(), x);
            const auto i = static_cast<std::size_t>(it - grid.begin()) - 1;
            const double m = static_cast<double>(grid.size() - 1);
            return (static_cast<double>(i) + (x - grid[i]) / (grid[i + 1] - grid[i])) / m;
        }
    }
    return 0.0;
}

double FactorLawSpec::cdf_below(double x) const {
    switch (law) {
        case FactorLaw::Degenerate:
            return x > 1.0 ? 1.0 : 0.0;
        case FactorLaw::Bernoulli:
            return x <= 0.0 ? 0.0 : (x <= 1.0 ? 1.0 - p : 1.0);
        default:
            return cdf(x);
    }
}

double FactorLawSpec::lower() const {
    switch (law) {
        case FactorLaw::Degenerate: return 1.0;
        case FactorLaw::Tabulated: return grid.front();
        default: return 0.0;
    }
}

double FactorLawSpec::upper() const {
    switch (law) {
        case FactorLaw::Frechet: return std::numeric_limits<double>::infinity();
        case FactorLaw::Tabulated: return grid.back();
        default: return 1.0;
    }
}

double FactorLawSpec::moment(double s) const {
    switch (law) {
        case FactorLaw::Degenerate:
            return 1.0;
        case FactorLaw::Bernoulli:
            return s > 0.0 ? p : 1.0;
        case FactorLaw::Frechet:
            if (s >= xi) return std::numeric_limits<double>::infinity();
            return std::pow(delta, s / xi) * boost::math::tgamma(1.0 - s / xi);
        case FactorLaw::Uniform01:
            return 1.0 / (s + 1.0);
        case FactorLaw::Tabulated: {
            // Q is linear on each cell: int_0^1 (q0 + (q1-q0) v)^s dv.
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
                const double q0 = grid[i], q1 = grid[i + 1];
                acc += (std::pow(q1, s + 1.0) - std::pow(q0, s + 1.0)) / ((s + 1.0) * (q1 - q0));
            }
            return acc / static_cast<double>(grid.size() - 1);
        }
    }
    return 0.0;
}

std::string FactorLawSpec::describe() const {
    std::ostringstream os;
    switch (law) {
        case FactorLaw::Degenerate: os << "degenerate"; break;
        case FactorLaw::Bernoulli: os << "bernoulli(p=" << format_double(p) << ")"; break;
        case FactorLaw::Frechet:
            os << "frechet(delta=" << format_double(delta) << ",xi=" << format_double(xi) << ")";
            break;
        case FactorLaw::Uniform01: os << "uniform01"; break;
        case FactorLaw::Tabulated:
            os << "tabulated(";
            for (std::size_t i = 0; i < grid.size(); ++i) os << (i ? "," : "") << format_double(grid[i]);
            os << ")";
            break;
    }
    return os.str();
}

TFactorSpec TFactorSpec::independent(FactorLawSpec law) {
    law.validate();
    TFactorSpec s;
    s.coupling = Coupling::Independent;
    s.law = std::move(law);
    return s;
}

TFactorSpec TFactorSpec::common(FactorLawSpec law) {
    law.validate();
    TFactorSpec s;
    s.coupling = Coupling::Common;
    s.law = std::move(law);
    return s;
}

TFactorSpec TFactorSpec::subset(std::vector<SubsetWeight> weights) {
    TFactorSpec s;
    s.coupling = Coupling::Subset;
    for (auto& w : weights) std::sort(w.members.begin(), w.members.end());
    s.subsets = std::move(weights);
    return s;
}

void TFactorSpec::validate(std::size_t d) const {
    if (d == 0) throw std::invalid_argument("factor spec: dimension must be >= 1");
    if (coupling != Coupling::Subset) {
        law.validate();
        return;
    }
    if (subsets.empty()) throw std::invalid_argument("subset factor: no subsets given");
    double total = 0.0;
    std::vector<double> r(d, 0.0);
    for (const auto& w : subsets) {
        if (w.members.empty()) throw std::invalid_argument("subset factor: empty subset");
        if (!(w.p >= 0.0)) throw std::invalid_argument("subset factor: negative weight");
        for (std::size_t i = 0; i < w.members.size(); ++i) {
            if (w.members[i] >= d) throw std::invalid_argument("subset factor: margin index out of range");
            if (i && w.members[i] == w.members[i - 1])
                throw std::invalid_argument("subset factor: repeated margin in subset");
            r[w.members[i]] += w.p;
        }
        total += w.p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("subset factor: weights p(J) must sum to 1");
    for (double rj : r)
        if (!(rj > 0.0)) throw std::invalid_argument("subset factor: every margin needs positive mass");
}

void TFactorSpec::check_moments(const std::vector<double>& beta) const {
    if (coupling == Coupling::Subset) return;
    for (double b : beta)
        if (!std::isfinite(law.moment(b)))
            throw std::domain_error("factor moment E(T^beta) diverges (Frechet needs xi > beta)");
}

bool TFactorSpec::finite_support() const {
    return coupling == Coupling::Subset || law.finite_support();
}

std::vector<RowAtom> TFactorSpec::row_atoms(std::size_t d) const {
    std::vector<RowAtom> out;
    if (coupling == Coupling::Subset) {
        for (const auto& w : subsets) {
            RowAtom a{std::vector<double>(d, 0.0), w.p};
            for (auto m : w.members) a.values[m] = 1.0;
            out.push_back(std::move(a));
        }
        return out;
    }
    const auto base = law.atoms();
    if (coupling == Coupling::Common) {
        for (const auto& a : base) out.push_back({std::vector<double>(d, a.value), a.prob});
        return out;
    }
    // Independent margins: product law over base^d.
    std::vector<std::size_t> idx(d, 0);
    while (true) {
        RowAtom a{std::vector<double>(d), 1.0};
        for (std::size_t j = 0; j < d; ++j) {
            a.values[j] = base[idx[j]].value;
            a.prob *= base[idx[j]].prob;
        }
        out.push_back(std::move(a));
        std::size_t j = 0;
        while (j < d && ++idx[j] == base.size()) idx[j++] = 0;
        if (j == d) break;
    }
    return out;
}

void TFactorSpec::draw_row(Rng& rng, std::size_t d, double* out) const {
    switch (coupling) {
        case Coupling::Independent:
            for (std::size_t j = 0; j < d; ++j) out[j] = law.draw(rng);
            return;
        case Coupling::Common: {
            const double v = law.draw(rng);
            for (std::size_t j = 0; j < d; ++j) out[j] = v;
            return;
        }
        case Coupling::Subset: {
            const double u = rng.uniform();
            double acc = 0.0;
            std::size_t pick = subsets.size() - 1;
            for (std::size_t k = 0; k < subsets.size(); ++k) {
                acc += subsets[k].p;
                if (u < acc) {
                    pick = k;
                    break;
                }
            }
            std::fill(out, out + d, 0.0);
            for (auto m : subsets[pick].members) out[m] = 1.0;
            return;
        }
    }
}

std::string TFactorSpec::describe() const {
    std::ostringstream os;
    switch (coupling) {
        case Coupling::Independent: os << "independent:" << law.describe(); break;
        case Coupling::Common: os << "common:" << law.describe(); break;
        case Coupling::Subset:
            os << "subset:";
            for (const auto& w : subsets) {
                os << "{";
                for (std::size_t i = 0; i < w.members.size(); ++i) os << (i ? "," : "") << w.members[i] + 1;
                os << "}=" << format_double(w.p) << ";";
            }
            break;
    }
    return os.str();
}

FactorMoments factor_moments(const TFactorSpec& spec, const std::vector<double>& beta) {
    FactorMoments m;
    m.r.resize(beta.size());
    if (spec.coupling == Coupling::Subset) {
        std::fill(m.r.begin(), m.r.end(), 0.0);
        for (const auto& w : spec.subsets)
            for (auto j : w.members)
                if (j < beta.size()) m.r[j] += w.p;
        return m;
    }
    for (std::size_t j = 0; j < beta.size(); ++j) {
        if (!(beta[j] > 0.0)) throw std::invalid_argument("factor_moments: beta must be positive");
        m.r[j] = spec.law.moment(beta[j]);
        if (!std::isfinite(m.r[j]))
            throw std::domain_error("factor_moments: E(T^beta) diverges (Frechet needs xi > beta)");
    }
    return m;
}

}  // namespace scalemix
