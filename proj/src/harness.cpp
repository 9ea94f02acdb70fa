#include "scalemix/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "scalemix/estimators.hpp"

namespace scalemix {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* what) {
    if (!j.is_object()) throw std::invalid_argument(std::string(what) + ": expected a JSON object");
    for (const auto& [key, _] : j.items())
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
            throw std::invalid_argument(std::string(what) + ": unknown key '" + key + "'");
}

FactorLawSpec law_from_json(const json& j) {
    const std::string law = j.value("law", "degenerate");
    if (law == "degenerate") return FactorLawSpec::degenerate();
    if (law == "bernoulli") return FactorLawSpec::bernoulli(j.at("p").get<double>());
    if (law == "frechet") return FactorLawSpec::frechet(j.value("delta", 1.0), j.at("xi").get<double>());
    if (law == "uniform01") return FactorLawSpec::uniform01();
    if (law == "uniform") return FactorLawSpec::uniform(j.at("a").get<double>(), j.at("b").get<double>());
    if (law == "tabulated") return FactorLawSpec::tabulated(j.at("grid").get<std::vector<double>>());
    throw std::invalid_argument("factor: unknown law '" + law + "'");
}

TFactorSpec factor_from_json(const json& j) {
    check_keys(j, {"law", "p", "delta", "xi", "a", "b", "grid", "coupling", "subsets"}, "factor");
    const std::string coupling = j.value("coupling", "independent");
    if (coupling == "subset") {
        std::vector<SubsetWeight> w;
        for (const auto& s : j.at("subsets")) {
            SubsetWeight sw;
            for (auto m : s.at("members").get<std::vector<std::size_t>>()) {
                if (m < 1) throw std::invalid_argument("factor: subset members are 1-based");
                sw.members.push_back(m - 1);
            }
            sw.p = s.at("p").get<double>();
            w.push_back(std::move(sw));
        }
        return TFactorSpec::subset(std::move(w));
    }
    auto law = law_from_json(j);
    if (coupling == "independent") return TFactorSpec::independent(law);
    if (coupling == "common") return TFactorSpec::common(law);
    throw std::invalid_argument("factor: unknown coupling '" + coupling + "'");
}

std::vector<double> margin_column(const SamplePath& p, std::size_t j) { return p.column(j); }

std::vector<double> unit_vector(std::size_t d, std::size_t j) {
    std::vector<double> t(d, 0.0);
    t[j] = 1.0;
    return t;
}

TailCopulaFn base_tail_copula(const ModelSpec& m) {
    // Shared univariate recursions are completely dependent across margins.
    if (m.y.is_common()) return TailCopulaFn::min(m.dim());
    return TailCopulaFn::cross_max2(m.dim());
}

}  // namespace

Quantity quantity_from_string(const std::string& s) {
    if (s == "theta") return Quantity::Theta;
    if (s == "lambda_ms") return Quantity::LambdaMs;
    if (s == "tail_copula") return Quantity::TailCopula;
    if (s == "mev") return Quantity::Mev;
    if (s == "eta") return Quantity::Eta;
    throw std::invalid_argument("unknown quantity '" + s + "'");
}

std::string to_string(Quantity q) {
    switch (q) {
        case Quantity::Theta: return "theta";
        case Quantity::LambdaMs: return "lambda_ms";
        case Quantity::TailCopula: return "tail_copula";
        case Quantity::Mev: return "mev";
        case Quantity::Eta: return "eta";
    }
    return "?";
}

ModelSpec model_from_json(const json& j) {
    check_keys(j, {"base", "c", "alpha", "beta", "d", "factor", "gamma", "burn_in"}, "model");
    ModelSpec m;
    const std::string base = j.at("base").get<std::string>();
    const std::size_t d = j.value("d", std::size_t{1});
    if (base == "iid" || base == "crossmax") {
        std::vector<double> beta;
        if (j.contains("beta") && j["beta"].is_array()) beta = j["beta"].get<std::vector<double>>();
        else beta.assign(d, j.value("beta", 1.0));
        m.y = base == "iid" ? YProcessSpec::iid_pareto(beta) : YProcessSpec::cross_max2(beta);
    } else if (base == "armax") {
        m.y = YProcessSpec::armax(j.at("c").get<double>(), j.at("alpha").get<double>(), d);
    } else if (base == "parmax") {
        m.y = YProcessSpec::parmax(j.at("c").get<double>(), j.at("alpha").get<double>(), d);
    } else if (base == "movingmax") {
        m.y = YProcessSpec::moving_max2(j.at("alpha").get<double>(), d);
    } else {
        throw std::invalid_argument("model: unknown base '" + base + "'");
    }
    m.y.burn_in = j.value("burn_in", std::size_t{0});
    m.t = j.contains("factor") ? factor_from_json(j["factor"]) : TFactorSpec::degenerate();
    if (j.contains("gamma")) m.gamma = j["gamma"].get<std::vector<double>>();
    m.validate();
    return m;
}

ExperimentSpec experiment_from_json(const json& j) {
    check_keys(j,
               {"name", "model", "n", "replications", "quantity", "threshold_quantile", "run_gap", "k", "lag",
                "offset", "margin", "x", "block", "tolerance", "seed", "threads"},
               "experiment");
    ExperimentSpec s;
    s.name = j.value("name", "");
    s.model = model_from_json(j.at("model"));
    s.n = j.value("n", s.n);
    s.replications = j.value("replications", s.replications);
    s.quantity = quantity_from_string(j.value("quantity", "theta"));
    s.threshold_quantile = j.value("threshold_quantile", s.threshold_quantile);
    s.run_gap = j.value("run_gap", s.run_gap);
    s.k = j.value("k", s.k);
    s.lag = j.value("lag", s.lag);
    s.offset = j.value("offset", s.offset);
    s.margin = j.value("margin", s.margin);
    if (j.contains("x")) s.x = j["x"].get<std::vector<double>>();
    s.block = j.value("block", s.block);
    // Default tolerance shrinks like the standard error of the replication mean.
    const double reps = static_cast<double>(std::max<std::size_t>(s.replications, 1));
    s.tolerance = j.value("tolerance", kDefaultTolerance * std::sqrt(50.0 / reps));
    s.seed = j.value("seed", s.seed);
    s.threads = j.value("threads", s.threads);
    return s;
}

TheoryValue experiment_theory(const ExperimentSpec& spec) {
    const ModelSpec& m = spec.model;
    m.validate();
    const std::size_t d = m.dim();
    const auto beta = effective_beta(m);
    switch (spec.quantity) {
        case Quantity::Theta: {
            if (spec.margin >= d) throw std::invalid_argument("experiment: margin out of range");
            const bool single_law = m.t.coupling != Coupling::Subset;
            if (m.y.family == YFamily::MovingMax2 && single_law) {
                const auto r = theta_movingmax_mixture(m.y.alpha, m.t.law, {1.0});
                return {r.value, r.value_se, r.method};
            }
            if (m.y.family == YFamily::ARMAX && single_law) {
                const double a = m.t.law.lower(), b = m.t.law.upper();
                if (a > 0.0 && m.y.c < a / b) {
                    const auto r = theta_armax_mixture(m.y.c, m.y.alpha, m.t.law, {1.0});
                    return {r.value, 0.0, r.method};
                }
            }
            const auto r = theta_general_k(2, kstep_for_model(m), m.t, beta, factor_moments(m.t, beta),
                                           unit_vector(d, spec.margin));
            return {r.value, r.value_se, r.method};
        }
        case Quantity::LambdaMs:
            return lambda_ms(m, spec.lag, spec.offset);
        case Quantity::TailCopula:
            if (spec.x.size() != d) throw std::invalid_argument("experiment: x needs one entry per margin");
            return tail_copula_mixture(base_tail_copula(m), m.t, beta, factor_moments(m.t, beta), spec.x);
        case Quantity::Mev: {
            if (spec.x.size() != d) throw std::invalid_argument("experiment: x needs one entry per margin");
            if (m.y.family == YFamily::MovingMax2 && m.t.coupling != Coupling::Subset &&
                m.t.law.law == FactorLaw::Frechet) {
                const auto g = movingmax_mev_gumbel(m.y.alpha, m.t.law.xi, spec.x);
                return {g.dependent, 0.0, "closed_form"};
            }
            if (!kstep_for_model(m).time_independent())
                throw std::invalid_argument("experiment: mev is supported for time-independent bases and "
                                            "Frechet-factor moving maxima");
            const auto g = m.y.is_common() ? TailCopulaFn::min(d) : TailCopulaFn::sum(d);
            return mev_attractor(g, m.t, beta, factor_moments(m.t, beta), spec.x);
        }
        case Quantity::Eta:
            return {eta_mixture(m, spec.lag, spec.offset).eta, 0.0, "closed_form"};
    }
    throw std::logic_error("unknown quantity");
}

double experiment_replication(const ExperimentSpec& spec, std::uint64_t rep) {
    const ModelSpec& m = spec.model;
    const std::size_t d = m.dim();
    const auto path = simulate_x(spec.seed, m, spec.n, rep);
    const std::size_t n = path.rows();
    switch (spec.quantity) {
        case Quantity::Theta: {
            const auto col = margin_column(path, spec.margin);
            const double u = empirical_quantile(col, spec.threshold_quantile);
            return runs_extremal_index(col, u, spec.run_gap);
        }
        case Quantity::LambdaMs:
        case Quantity::Eta: {
            if (spec.lag < 1 || spec.lag >= n) throw std::invalid_argument("experiment: bad lag");
            if (spec.offset >= d) throw std::invalid_argument("experiment: bad offset");
            const auto a = margin_column(path, 0), b = margin_column(path, spec.offset);
            std::vector<double> x(a.begin(), a.end() - static_cast<std::ptrdiff_t>(spec.lag));
            std::vector<double> y(b.begin() + static_cast<std::ptrdiff_t>(spec.lag), b.end());
            if (spec.quantity == Quantity::LambdaMs) return empirical_tdc(x, y, spec.k);
            const auto rx = average_ranks(x), ry = average_ranks(y);
            const double n1 = static_cast<double>(x.size() + 1);
            std::vector<double> t(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) t[i] = std::min(n1 / (n1 - rx[i]), n1 / (n1 - ry[i]));
            return hill(t, spec.k);
        }
        case Quantity::TailCopula: {
            std::vector<std::vector<double>> ranks(d);
            for (std::size_t j = 0; j < d; ++j) ranks[j] = average_ranks(margin_column(path, j));
            std::vector<double> cut(d);
            for (std::size_t j = 0; j < d; ++j)
                cut[j] = std::isinf(spec.x[j]) ? -kInf
                                               : static_cast<double>(n) - static_cast<double>(spec.k) * spec.x[j];
            std::size_t c = 0;
            for (std::size_t i = 0; i < n; ++i) {
                bool all = true;
                for (std::size_t j = 0; j < d && all; ++j) all = ranks[j][i] > cut[j];
                if (all) ++c;
            }
            return static_cast<double>(c) / static_cast<double>(spec.k);
        }
        case Quantity::Mev: {
            const auto beta = m.margin_beta();
            const auto r = factor_moments(m.t, effective_beta(m));
            std::vector<std::vector<double>> maxima(d);
            for (std::size_t j = 0; j < d; ++j) maxima[j] = block_maxima(margin_column(path, j), spec.block);
            std::vector<double> level(d);
            for (std::size_t j = 0; j < d; ++j)
                level[j] = std::isinf(spec.x[j]) ? kInf
                                                 : std::pow(r.r[j] * static_cast<double>(spec.block) * spec.x[j],
                                                            1.0 / beta[j]);
            const std::size_t nb = maxima[0].size();
            std::size_t c = 0;
            for (std::size_t i = 0; i < nb; ++i) {
                bool all = true;
                for (std::size_t j = 0; j < d && all; ++j) all = maxima[j][i] <= level[j];
                if (all) ++c;
            }
            return static_cast<double>(c) / static_cast<double>(nb);
        }
    }
    throw std::logic_error("unknown quantity");
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    if (spec.replications < 1) throw std::invalid_argument("experiment: need at least one replication");
    if (spec.n < 1000) throw std::invalid_argument("experiment: need n >= 1000");
    ExperimentReport rep;
    rep.name = spec.name;
    rep.quantity = spec.quantity;
    rep.tolerance = spec.tolerance;
    rep.theory = experiment_theory(spec);

    // Each replication owns its slot, so the result does not depend on scheduling.
    std::vector<double> slots(spec.replications, 0.0);
    std::vector<std::string> errors(spec.replications);
    std::size_t nt = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    nt = std::min(nt, spec.replications);
    auto worker = [&](std::size_t t) {
        for (std::size_t r = t; r < spec.replications; r += nt) {
            try {
                slots[r] = experiment_replication(spec, r);
            } catch (const std::exception& e) {
                errors[r] = e.what();
            }
        }
    };
    if (nt == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (std::size_t r = 0; r < spec.replications; ++r)
        if (!errors[r].empty()) throw std::runtime_error("replication " + std::to_string(r) + ": " + errors[r]);
    rep.empirical = mean_sd(slots);
    rep.pass = std::abs(rep.empirical.mean - rep.theory.value) <= spec.tolerance;
    return rep;
}

SuiteResult experiment_suite(const json& suite) {
    if (!suite.is_array()) throw std::invalid_argument("suite: expected a JSON array of experiments");
    SuiteResult out;
    for (const auto& e : suite) {
        ExperimentReport rep;
        rep.name = e.is_object() ? e.value("name", "") : "";
        try {
            const auto spec = experiment_from_json(e);
            rep = run_experiment(spec);
        } catch (const std::exception& ex) {
            rep.pass = false;
            rep.error = ex.what();
        }
        if (!rep.pass) out.exit_code = 1;
        out.reports.push_back(std::move(rep));
    }
    return out;
}

SuiteResult experiment_suite(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("suite: cannot read " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("suite: malformed JSON: ") + e.what());
    }
    return experiment_suite(j);
}

json report_to_json(const ExperimentReport& r) {
    json j;
    j["name"] = r.name;
    j["quantity"] = to_string(r.quantity);
    if (!r.error.empty()) {
        j["error"] = r.error;
        j["pass"] = false;
        return j;
    }
    j["theory"] = {{"value", r.theory.value}, {"stderr", r.theory.stderr_}, {"method", r.theory.method}};
    j["empirical"] = {{"mean", r.empirical.mean}, {"sd", r.empirical.sd}, {"replications", r.empirical.n}};
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    return j;
}

std::string summary_table(const std::vector<ExperimentReport>& reports) {
    std::ostringstream os;
    os << "name\tquantity\ttheory\tempirical\tsd\ttolerance\tresult\n";
    for (const auto& r : reports) {
        os << (r.name.empty() ? "-" : r.name) << '\t' << to_string(r.quantity) << '\t';
        if (!r.error.empty()) {
            os << "-\t-\t-\t-\tERROR: " << r.error << '\n';
            continue;
        }
        os << format_double(r.theory.value) << '\t' << format_double(r.empirical.mean) << '\t'
           << format_double(r.empirical.sd) << '\t' << format_double(r.tolerance) << '\t'
           << (r.pass ? "pass" : "FAIL") << '\n';
    }
    return os.str();
}

}  // namespace scalemix
