#include "cli_commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "scalemix/depfn.hpp"
#include "scalemix/estimators.hpp"
#include "scalemix/fitting.hpp"
#include "scalemix/harness.hpp"
#include "scalemix/heavy_tail_test.hpp"
#include "scalemix/market.hpp"
#include "scalemix/sample_path.hpp"
#include "scalemix/theory.hpp"

namespace scalemix::cli {

using nlohmann::json;

namespace {

json record(const std::string& quantity, json params, double value, double se, const std::string& method) {
    return {{"quantity", quantity}, {"params", std::move(params)}, {"value", value}, {"stderr", se}, {"method", method}};
}

std::string trace_csv(const EstimatorTrace& t) {
    std::ostringstream os;
    os << "k,estimate,critical_value\n";
    for (std::size_t i = 0; i < t.k.size(); ++i) {
        os << t.k[i] << ',' << format_double(t.value[i]) << ',';
        if (i < t.band.size()) os << format_double(t.band[i]);
        os << '\n';
    }
    return os.str();
}

json trace_at(const EstimatorTrace& t, std::size_t k) {
    for (std::size_t i = 0; i < t.k.size(); ++i)
        if (t.k[i] == k) return t.value[i];
    return nullptr;
}

struct Series {
    std::vector<double> x;
    json info;
};

Series load_series(const SeriesInput& in) {
    if (in.input.empty()) throw std::invalid_argument("--input is required");
    Series s;
    std::vector<double> raw;
    std::string transform = in.transform;
    if (in.kind == "prices") {
        const auto p = ingest_file(in.input, in.column);
        raw = to_volatility(p.prices).squared;
        if (transform.empty()) transform = "fit";
        s.info["prices"] = p.prices.size();
    } else if (in.kind == "series") {
        raw = read_series_column(in.input, in.column);
        if (transform.empty()) transform = "none";
    } else {
        throw std::invalid_argument("--kind must be prices or series");
    }
    s.info["n"] = raw.size();
    s.info["transform"] = transform;
    if (transform == "none") {
        s.x = std::move(raw);
    } else {
        std::optional<AffineTransform> fixed;
        if (transform == "sp500" || transform == "dj") fixed = affine_preset(transform);
        else if (transform != "fit") throw std::invalid_argument("--transform must be none, fit, sp500 or dj");
        auto r = affine_pareto_transform(raw, fixed);
        s.info["a"] = r.transform.a;
        s.info["b"] = r.transform.b;
        s.x = std::move(r.x);
    }
    return s;
}

}  // namespace

json model_flags_json(const ModelFlags& f) {
    json j;
    std::string base = f.model;
    json factor;
    if (f.model == "prarmax") {
        // pARMAX base times standard uniform factors.
        base = "parmax";
        factor = {{"law", "uniform01"}, {"coupling", "independent"}};
    } else {
        factor["law"] = f.factor;
        factor["coupling"] = f.coupling;
        if (f.factor == "bernoulli") factor["p"] = f.p;
        if (f.factor == "frechet") {
            factor["delta"] = f.delta;
            factor["xi"] = f.xi;
        }
        if (f.factor == "uniform") {
            factor["a"] = f.a;
            factor["b"] = f.b;
        }
    }
    j["base"] = base;
    j["d"] = f.d;
    if (base == "armax" || base == "parmax") j["c"] = f.c;
    if (base == "armax" || base == "parmax" || base == "movingmax") j["alpha"] = f.alpha;
    if (base == "iid" || base == "crossmax")
        j["beta"] = f.beta.empty() ? std::vector<double>(f.d, f.alpha) : f.beta;
    j["factor"] = factor;
    if (!f.gamma.empty()) j["gamma"] = f.gamma;
    return j;
}

ModelSpec build_model(const ModelFlags& f) {
    if (!f.model_json.empty()) {
        std::ifstream in(f.model_json);
        if (!in) throw DataError("cannot open " + f.model_json);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw DataError(std::string("malformed model JSON: ") + e.what());
        }
        return model_from_json(j);
    }
    return model_from_json(model_flags_json(f));
}

std::string resolve_output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("SCALEMIX_OUTPUT_DIR"); env && *env) return env;
    return "scalemix_out";
}

Output::Output(std::string dir, std::string command, std::uint64_t seed)
    : dir_(std::move(dir)), command_(std::move(command)), seed_(seed) {}

void Output::write(const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir_);
    const auto path = std::filesystem::path(dir_) / name;
    std::ofstream os(path, std::ios::binary);
    os << content;
    if (!os) throw std::runtime_error("cannot write " + path.string());
    files_.push_back(name);
}

void Output::write_manifest(const json& summary) {
    json m;
    m["schema_version"] = 1;
    m["command"] = command_;
    m["seed"] = seed_;
    m["files"] = files_;
    m["summary"] = summary;
    std::filesystem::create_directories(dir_);
    std::ofstream os(std::filesystem::path(dir_) / "manifest.json", std::ios::binary);
    os << m.dump(2) << '\n';
    if (!os) throw std::runtime_error("cannot write manifest");
}

int run_simulate(const SimulateArgs& a, Output& out, std::uint64_t seed) {
    const auto model = build_model(a.model);
    if (a.n < 1) throw std::invalid_argument("--n must be at least 1");
    const auto path = simulate_x(seed, model, a.n, a.replication);
    std::ostringstream os;
    std::string name;
    if (a.format == "csv") {
        write_csv(os, path);
        name = "x.csv";
    } else if (a.format == "bin") {
        write_binary(os, path);
        name = "x.bin";
    } else {
        throw std::invalid_argument("--format must be csv or bin");
    }
    out.write(name, os.str());
    out.write_manifest({{"model", model.describe()},
                        {"spec_hash", path.spec_hash()},
                        {"n", path.rows()},
                        {"d", path.cols()},
                        {"replication", a.replication}});
    return kOk;
}

int run_theta(const ThetaArgs& a, Output& out, std::uint64_t seed) {
    const auto model = build_model(a.model);
    const std::size_t d = model.dim();
    auto tau = a.tau.empty() ? std::vector<double>(d, 1.0) : a.tau;
    if (tau.size() != d) throw std::invalid_argument("--tau needs one value per margin");
    ExpectationOptions opt;
    opt.seed = seed;
    opt.mc_draws = a.mc_draws;
    const bool one_law = model.t.coupling == Coupling::Independent || (d == 1 && model.t.coupling == Coupling::Common);
    auto theta_at = [&](const std::vector<double>& t) -> ThetaResult {
        if (model.y.family == YFamily::MovingMax2 && one_law && model.gamma.empty())
            return theta_movingmax_mixture(model.y.alpha, model.t.law, t, opt);
        if (model.y.family == YFamily::ARMAX && one_law && model.gamma.empty()) {
            const double lo = model.t.law.lower(), hi = model.t.law.upper();
            if (lo > 0.0 && model.y.c < lo / hi) return theta_armax_mixture(model.y.c, model.y.alpha, model.t.law, t);
        }
        return theta_for_model(model, t, opt);
    };
    json records = json::array();
    const auto all = theta_at(tau);
    records.push_back(record("theta", {{"model", model.describe()}, {"tau", tau}}, all.value, all.value_se, all.method));
    for (std::size_t j = 0; j < d && d > 1; ++j) {
        std::vector<double> t(d, 0.0);
        t[j] = 1.0;
        ThetaResult r;
        if (model.y.family == YFamily::MovingMax2 && one_law && model.gamma.empty())
            r = theta_movingmax_mixture(model.y.alpha, model.t.law, {1.0}, opt);
        else if (model.y.family == YFamily::ARMAX && one_law && model.gamma.empty() && model.t.law.lower() > 0.0 &&
                 model.y.c < model.t.law.lower() / model.t.law.upper())
            r = theta_armax_mixture(model.y.c, model.y.alpha, model.t.law, {1.0});
        else
            r = theta_for_model(model, t, opt);
        records.push_back(record("theta_marginal", {{"model", model.describe()}, {"margin", j + 1}}, r.value,
                                 r.value_se, r.method));
    }
    out.write("theta.json", records.dump(2) + "\n");
    out.write_manifest({{"model", model.describe()}, {"theta", all.value}, {"method", all.method}});
    return kOk;
}

int run_tail_copula(const TailCopulaArgs& a, Output& out, std::uint64_t seed) {
    const auto model = build_model(a.model);
    const std::size_t d = model.dim();
    auto x = a.x.empty() ? std::vector<double>(d, 1.0) : a.x;
    if (x.size() != d) throw std::invalid_argument("--x needs one value per margin");
    ExpectationOptions opt;
    opt.seed = seed;
    const auto beta = effective_beta(model);
    const auto r = factor_moments(model.t, beta);
    const auto lam_y = model.y.is_common() ? TailCopulaFn::min(d) : TailCopulaFn::cross_max2(d);
    json records = json::array();
    const auto lx = tail_copula_mixture(lam_y, model.t, beta, r, x, opt);
    records.push_back(record("tail_copula_X", {{"model", model.describe()}, {"x", x}}, lx.value, lx.stderr_, lx.method));
    records.push_back(record("tail_copula_Y", {{"model", model.describe()}, {"x", x}}, lam_y(x), 0.0, "exact"));
    for (std::size_t m = 1; m <= a.max_lag; ++m) {
        const auto l = lambda_ms(model, m, 0);
        records.push_back(record("lambda_ms", {{"m", m}, {"s", 0}}, l.value, l.stderr_, l.method));
        try {
            const auto e = eta_mixture(model, m, 0);
            records.push_back(record("eta", {{"m", m}, {"s", 0}, {"multiplier", e.multiplier}}, e.eta, 0.0,
                                     "closed_form"));
        } catch (const std::domain_error&) {
            records.push_back(record("eta", {{"m", m}, {"s", 0}, {"tail_dependent", true}}, 1.0, 0.0, "closed_form"));
        }
    }
    out.write("tail_copula.json", records.dump(2) + "\n");
    out.write_manifest({{"model", model.describe()}, {"tail_copula_X", lx.value}});
    return kOk;
}

int run_depfn(const DepfnArgs& a, Output& out) {
    if (a.input.empty()) throw std::invalid_argument("--input is required");
    std::vector<double> x, y;
    if (a.kind == "prices") {
        x = to_volatility(ingest_file(a.input, a.column_x).prices).squared;
        y = to_volatility(ingest_file(a.input, a.column_y).prices).squared;
    } else if (a.kind == "series") {
        x = read_series_column(a.input, a.column_x);
        y = read_series_column(a.input, a.column_y);
    } else {
        throw std::invalid_argument("--kind must be prices or series");
    }
    const auto mx = block_maxima(x, a.block), my = block_maxima(y, a.block);
    const auto w = w_grid(a.points);
    LrOptions lr;
    lr.k = a.k;
    const auto e = depfn_estimate(mx, my, w, lr);
    std::ostringstream os;
    os << "w,A_pickands,A_cfg,A_ht,A_lr\n";
    for (std::size_t i = 0; i < w.size(); ++i)
        os << format_double(w[i]) << ',' << format_double(e.pickands[i]) << ',' << format_double(e.cfg[i]) << ','
           << format_double(e.ht[i]) << ',' << format_double(e.lr[i]) << '\n';
    out.write("depfn.csv", os.str());
    out.write_manifest({{"blocks", mx.size()}, {"block_length", a.block}, {"points", a.points}});
    return kOk;
}

int run_tail_index(const TailIndexArgs& a, Output& out) {
    const auto s = load_series(a.in);
    const std::size_t n = s.x.size();
    const std::size_t k = a.k ? a.k : default_k(n);
    const auto grid = default_k_grid(n);
    const auto h = hill_trace(s.x, grid);
    const auto m = moments_trace(s.x, grid);
    const auto t = heavy_tail_test(s.x, grid, a.level);
    out.write("hill.csv", trace_csv(h));
    out.write("moments.csv", trace_csv(m));
    out.write("heavy_tail.csv", trace_csv(t));
    const auto g = diagnostics(s.x);
    std::ostringstream qq, me;
    qq << "exp_quantile,order_stat,log_order_stat\n";
    for (std::size_t i = 0; i < g.order_stat.size(); ++i)
        qq << format_double(g.exp_quantile[i]) << ',' << format_double(g.order_stat[i]) << ','
           << format_double(g.log_order_stat[i]) << '\n';
    me << "k,threshold,mean_excess\n";
    for (std::size_t i = 0; i < g.me_k.size(); ++i)
        me << g.me_k[i] << ',' << format_double(g.me_threshold[i]) << ',' << format_double(g.mean_excess[i]) << '\n';
    out.write("qq.csv", qq.str());
    out.write("mean_excess.csv", me.str());
    const double gamma = hill(s.x, k);
    const double stat = heavy_tail_statistic(s.x, k);
    const double crit = heavy_tail_critical_value(k, a.level);
    json summary = s.info;
    summary["k"] = k;
    summary["hill"] = gamma;
    summary["beta_hat"] = 1.0 / gamma;
    summary["moments"] = trace_at(m, k).is_null() ? json(moments_estimator(s.x, k)) : trace_at(m, k);
    summary["heavy_tail_statistic"] = stat;
    summary["critical_value"] = crit;
    summary["heavy_tail_rejected"] = stat > crit;
    out.write_manifest(summary);
    return kOk;
}

int run_fit(const FitArgs& a, Output& out) {
    const auto s = load_series(a.in);
    FitConfig cfg;
    cfg.upsilon = a.upsilon;
    cfg.k = a.k;
    cfg.level = a.level;
    cfg.alt_exponent = a.alt_exponent;
    if (!(cfg.upsilon > 0.0 && cfg.upsilon < 1.0)) throw std::invalid_argument("--upsilon must lie in (0,1)");
    const auto fit = fit_prarmax(s.x, cfg);
    if (!fit.beta.hill.k.empty()) {
        out.write("hill.csv", trace_csv(fit.beta.hill));
        out.write("moments.csv", trace_csv(fit.beta.moments));
        out.write("heavy_tail.csv", trace_csv(fit.beta.heavy_tail));
    }
    if (!fit.c.hill.k.empty()) out.write("s_hill.csv", trace_csv(fit.c.hill));
    if (!fit.innovation_heavy_tail.k.empty()) out.write("innovation_heavy_tail.csv", trace_csv(fit.innovation_heavy_tail));
    if (!fit.capture.z.empty()) {
        std::ostringstream os;
        os << "t,z\n";
        for (std::size_t i = 0; i < fit.capture.z.size(); ++i)
            os << fit.capture.index[i] + 1 << ',' << format_double(fit.capture.z[i]) << '\n';
        out.write("captured_z.csv", os.str());
    }
    json j = s.info;
    j["ok"] = fit.ok;
    j["failed_step"] = fit.failed_step;
    j["message"] = fit.message;
    j["k"] = fit.k;
    j["upsilon"] = a.upsilon;
    if (fit.failed_step == 0 || fit.failed_step > 1) j["beta_hat"] = fit.beta_hat;
    if (fit.failed_step == 0 || fit.failed_step > 2) j["c_hat"] = fit.c_hat;
    if (fit.failed_step == 0 || fit.failed_step > 3) {
        j["innovations"] = fit.innovations.index.size();
        j["candidates"] = fit.innovations.candidates.size();
        j["pi1"] = fit.capture.pi1;
        j["captured"] = fit.capture.z.size();
    }
    if (fit.failed_step == 0 || fit.failed_step > 4)
        j["ks"] = {{"D", fit.ks.D}, {"p_value", fit.ks.p}, {"n", fit.ks.n}};
    out.write("fit.json", j.dump(2) + "\n");
    out.write_manifest(j);
    return fit.ok ? kOk : kRejected;
}

int run_validate(const ValidateArgs& a, Output& out) {
    if (a.suite.empty()) throw std::invalid_argument("--suite is required");
    std::ifstream in(a.suite);
    if (!in) throw DataError("cannot open " + a.suite);
    json suite;
    try {
        in >> suite;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed suite JSON: ") + e.what());
    }
    if (!suite.is_array()) throw DataError("suite must be a JSON array");
    const auto res = experiment_suite(suite);
    std::string lines;
    int failed = 0;
    for (const auto& r : res.reports) {
        lines += report_to_json(r).dump() + "\n";
        if (!r.pass) ++failed;
    }
    out.write("reports.jsonl", lines);
    out.write("summary.txt", summary_table(res.reports));
    out.write_manifest({{"experiments", res.reports.size()}, {"failed", failed}});
    return res.exit_code == 0 ? kOk : kRejected;
}

}  // namespace scalemix::cli
