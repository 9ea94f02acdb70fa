#include <iostream>
#include <stdexcept>

#include "CLI11.hpp"
#include "cli_commands.hpp"
#include "scalemix/market.hpp"
#include "scalemix/rng.hpp"

using namespace scalemix::cli;

namespace {

void add_model_options(CLI::App* app, ModelFlags& f) {
    app->add_option("--model", f.model, "movingmax | armax | parmax | iid | crossmax | prarmax")->capture_default_str();
    app->add_option("--model-json", f.model_json, "JSON model description (overrides the model flags)");
    app->add_option("--c", f.c, "autoregressive coefficient in (0,1)")->capture_default_str();
    app->add_option("--alpha", f.alpha, "tail exponent of the base process")->capture_default_str();
    app->add_option("--beta", f.beta, "per-margin tail exponents (iid, crossmax)")->delimiter(',');
    app->add_option("--d", f.d, "dimension")->capture_default_str();
    app->add_option("--factor", f.factor, "degenerate | bernoulli | frechet | uniform01 | uniform")
        ->capture_default_str();
    app->add_option("--coupling", f.coupling, "independent | common")->capture_default_str();
    app->add_option("--p", f.p, "Bernoulli parameter")->capture_default_str();
    app->add_option("--delta", f.delta, "Frechet scale")->capture_default_str();
    app->add_option("--xi", f.xi, "Frechet shape")->capture_default_str();
    app->add_option("--a", f.a, "uniform factor lower end")->capture_default_str();
    app->add_option("--b", f.b, "uniform factor upper end")->capture_default_str();
    app->add_option("--gamma", f.gamma, "common-factor powers gamma_j")->delimiter(',');
}

void add_series_options(CLI::App* app, SeriesInput& s) {
    app->add_option("--input", s.input, "CSV file")->required();
    app->add_option("--column", s.column, "column name or 1-based index")->capture_default_str();
    app->add_option("--kind", s.kind, "prices (squared log-returns are analysed) or series")->capture_default_str();
    app->add_option("--transform", s.transform, "none | fit | sp500 | dj (default: fit for prices, none for series)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scale-mixture heavy-tailed time series: simulation, theory, estimation and fitting"};
    app.require_subcommand(1);
    std::uint64_t seed = scalemix::kDefaultSeed;
    std::string out_dir;
    app.add_option("--seed", seed, "master seed")->capture_default_str();
    app.add_option("--out", out_dir, "output directory (default $SCALEMIX_OUTPUT_DIR or ./scalemix_out)");

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "simulate a path of X");
    add_model_options(c_sim, sim.model);
    c_sim->add_option("--n", sim.n, "path length")->capture_default_str();
    c_sim->add_option("--replication", sim.replication, "replication index of the stream")->capture_default_str();
    c_sim->add_option("--format", sim.format, "csv | bin")->capture_default_str();

    ThetaArgs theta;
    auto* c_theta = app.add_subcommand("theta", "extremal index of a model");
    add_model_options(c_theta, theta.model);
    c_theta->add_option("--tau", theta.tau, "level vector (default all ones)")->delimiter(',');
    c_theta->add_option("--mc-draws", theta.mc_draws, "Monte Carlo draws for continuous factors")
        ->capture_default_str();

    TailCopulaArgs tc;
    auto* c_tc = app.add_subcommand("tail-copula", "tail copula, lag tail dependence and eta of a model");
    add_model_options(c_tc, tc.model);
    c_tc->add_option("--x", tc.x, "argument of the tail copula (default all ones)")->delimiter(',');
    c_tc->add_option("--max-lag", tc.max_lag, "largest lag m reported")->capture_default_str();

    DepfnArgs dep;
    auto* c_dep = app.add_subcommand("depfn", "Pickands dependence function estimates from block maxima");
    c_dep->add_option("--input", dep.input, "CSV file")->required();
    c_dep->add_option("--x", dep.column_x, "first column")->capture_default_str();
    c_dep->add_option("--y", dep.column_y, "second column")->capture_default_str();
    c_dep->add_option("--kind", dep.kind, "series or prices")->capture_default_str();
    c_dep->add_option("--block", dep.block, "block length")->capture_default_str();
    c_dep->add_option("--points", dep.points, "number of w grid points")->capture_default_str();
    c_dep->add_option("--k", dep.k, "joint-exceedance threshold index (default floor(n/15))");

    TailIndexArgs ti;
    auto* c_ti = app.add_subcommand("tail-index", "Hill, moments and heavy-tail test traces");
    add_series_options(c_ti, ti.in);
    c_ti->add_option("--k", ti.k, "k for the summary (default floor(n/15))");
    c_ti->add_option("--level", ti.level, "test level: 0.10, 0.05 or 0.01")->capture_default_str();

    FitArgs fit;
    auto* c_fit = app.add_subcommand("fit-prarmax", "fit the pRARMAX model in five steps");
    add_series_options(c_fit, fit.in);
    c_fit->add_option("--upsilon", fit.upsilon, "capture region level")->capture_default_str();
    c_fit->add_option("--k", fit.k, "number of upper order statistics (default floor(n/15))");
    c_fit->add_option("--level", fit.level, "test level")->capture_default_str();
    c_fit->add_flag("--alt-exponent", fit.alt_exponent, "read the capture exponent as -(beta/c - 1)");

    ValidateArgs val;
    auto* c_val = app.add_subcommand("validate", "run a harness suite");
    c_val->add_option("--suite", val.suite, "JSON array of experiments")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        const std::string dir = resolve_output_dir(out_dir);
        auto* sub = app.get_subcommands().front();
        Output out(dir, sub->get_name(), seed);
        if (sub == c_sim) return run_simulate(sim, out, seed);
        if (sub == c_theta) return run_theta(theta, out, seed);
        if (sub == c_tc) return run_tail_copula(tc, out, seed);
        if (sub == c_dep) return run_depfn(dep, out);
        if (sub == c_ti) return run_tail_index(ti, out);
        if (sub == c_fit) return run_fit(fit, out);
        if (sub == c_val) return run_validate(val, out);
    } catch (const scalemix::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}
