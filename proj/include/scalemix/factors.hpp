#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "scalemix/rng.hpp"

namespace scalemix {

enum class FactorLaw { Degenerate, Bernoulli, Frechet, Uniform01, Tabulated };

struct Atom {
    double value;
    double prob;
};

// Univariate law of a factor T_nj (or of Z_nj in the common-factor model).
struct FactorLawSpec {
    FactorLaw law = FactorLaw::Degenerate;
    double p = 0.5;             // Bernoulli
    double delta = 1.0;         // Frechet scale, H(x) = exp(-delta x^-xi)
    double xi = 1.0;            // Frechet shape
    std::vector<double> grid;   // Tabulated quantiles at u = i/(m-1), strictly increasing

    static FactorLawSpec degenerate();
    static FactorLawSpec bernoulli(double p);
    static FactorLawSpec frechet(double delta, double xi);
    static FactorLawSpec uniform01();
    static FactorLawSpec tabulated(std::vector<double> quantiles);
    // Uniform on [a,b] as a two-point quantile grid.
    static FactorLawSpec uniform(double a, double b);

    void validate() const;
    [[nodiscard]] bool finite_support() const;
    [[nodiscard]] std::vector<Atom> atoms() const;
    [[nodiscard]] double quantile(double u) const;
    [[nodiscard]] double cdf(double x) const;        // P(T <= x)
    [[nodiscard]] double cdf_below(double x) const;  // P(T < x)
    [[nodiscard]] double lower() const;
    [[nodiscard]] double upper() const;
    // E(T^s); +infinity when the moment diverges.
    [[nodiscard]] double moment(double s) const;
    [[nodiscard]] double draw(Rng& rng) const { return quantile(rng.uniform_open()); }
    [[nodiscard]] std::string describe() const;
};

enum class Coupling { Independent, Common, Subset };

// One nonempty subset J (0-based margins) with P(T = 1_J) = p.
struct SubsetWeight {
    std::vector<std::size_t> members;
    double p;
};

struct RowAtom {
    std::vector<double> values;
    double prob;
};

// Law of one factor row T_n = (T_n1, ..., T_nd). Rows are i.i.d. over n.
struct TFactorSpec {
    Coupling coupling = Coupling::Independent;
    FactorLawSpec law;
    std::vector<SubsetWeight> subsets;

    static TFactorSpec degenerate() { return independent(FactorLawSpec::degenerate()); }
    static TFactorSpec independent(FactorLawSpec law);
    static TFactorSpec common(FactorLawSpec law);
    static TFactorSpec subset(std::vector<SubsetWeight> weights);

    void validate(std::size_t d) const;
    // Throws when E(T_j^beta_j) diverges for some margin.
    void check_moments(const std::vector<double>& beta) const;
    [[nodiscard]] bool finite_support() const;
    [[nodiscard]] std::vector<RowAtom> row_atoms(std::size_t d) const;
    void draw_row(Rng& rng, std::size_t d, double* out) const;
    [[nodiscard]] std::string describe() const;
};

struct FactorMoments {
    std::vector<double> r;
};

// r_j = E(T_j^beta_j), exact for every supported law.
FactorMoments factor_moments(const TFactorSpec& spec, const std::vector<double>& beta);

}  // namespace scalemix
