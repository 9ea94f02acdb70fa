#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "scalemix/processes.hpp"

namespace scalemix::cli {

// Exit codes shared by every subcommand.
enum Exit { kOk = 0, kUsage = 1, kData = 2, kRejected = 3 };

struct ModelFlags {
    std::string model = "parmax";  // movingmax | armax | parmax | iid | crossmax | prarmax
    std::string model_json;        // path to a JSON model description, overrides the flags
    double c = 0.8;
    double alpha = 2.0;
    std::vector<double> beta;
    std::size_t d = 1;
    std::string factor = "degenerate";  // degenerate | bernoulli | frechet | uniform01 | uniform
    std::string coupling = "independent";
    double p = 0.5;
    double delta = 1.0;
    double xi = 2.0;
    double a = 0.9;
    double b = 1.0;
    std::vector<double> gamma;
};

nlohmann::json model_flags_json(const ModelFlags& f);
ModelSpec build_model(const ModelFlags& f);

// Collects every file a subcommand writes; the manifest lists exactly these.
class Output {
public:
    Output(std::string dir, std::string command, std::uint64_t seed);
    void write(const std::string& name, const std::string& content);
    void write_manifest(const nlohmann::json& summary);
    [[nodiscard]] const std::string& dir() const { return dir_; }

private:
    std::string dir_;
    std::string command_;
    std::uint64_t seed_;
    std::vector<std::string> files_;
};

// Output directory: the flag when given, else $SCALEMIX_OUTPUT_DIR, else ./scalemix_out.
std::string resolve_output_dir(const std::string& flag);

struct SimulateArgs {
    ModelFlags model;
    std::size_t n = 1000;
    std::uint64_t replication = 0;
    std::string format = "csv";
};
struct ThetaArgs {
    ModelFlags model;
    std::vector<double> tau;
    std::size_t mc_draws = 1'000'000;
};
struct TailCopulaArgs {
    ModelFlags model;
    std::vector<double> x;
    std::size_t max_lag = 3;
};
struct SeriesInput {
    std::string input;
    std::string column = "close";
    std::string kind = "prices";  // prices | series
    std::string transform;        // none | fit | sp500 | dj; default fit for prices
};
struct DepfnArgs {
    std::string input;
    std::string column_x = "x1";
    std::string column_y = "x2";
    std::string kind = "series";
    std::size_t block = 42;
    std::size_t points = 21;
    std::size_t k = 0;
};
struct TailIndexArgs {
    SeriesInput in;
    std::size_t k = 0;
    double level = 0.05;
};
struct FitArgs {
    SeriesInput in;
    double upsilon = 0.15;
    std::size_t k = 0;
    double level = 0.05;
    bool alt_exponent = false;
};
struct ValidateArgs {
    std::string suite;
};

int run_simulate(const SimulateArgs& a, Output& out, std::uint64_t seed);
int run_theta(const ThetaArgs& a, Output& out, std::uint64_t seed);
int run_tail_copula(const TailCopulaArgs& a, Output& out, std::uint64_t seed);
int run_depfn(const DepfnArgs& a, Output& out);
int run_tail_index(const TailIndexArgs& a, Output& out);
int run_fit(const FitArgs& a, Output& out);
int run_validate(const ValidateArgs& a, Output& out);

}  // namespace scalemix::cli
