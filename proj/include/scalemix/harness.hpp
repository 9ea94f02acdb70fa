#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "scalemix/numerics.hpp"
#include "scalemix/processes.hpp"
#include "scalemix/theory.hpp"

namespace scalemix {

enum class Quantity { Theta, LambdaMs, TailCopula, Mev, Eta };

Quantity quantity_from_string(const std::string& s);
std::string to_string(Quantity q);

// Tolerance at the default 50 replications.
constexpr double kDefaultTolerance = 0.05;

struct ExperimentSpec {
    std::string name;
    ModelSpec model;
    std::size_t n = 100'000;
    std::size_t replications = 50;
    Quantity quantity = Quantity::Theta;
    double threshold_quantile = 0.999;  // theta: runs threshold
    std::size_t run_gap = 5;
    std::size_t k = 1000;               // lambda_ms, tail_copula, eta
    std::size_t lag = 1;                // m
    std::size_t offset = 0;             // s
    std::size_t margin = 0;             // theta
    std::vector<double> x;              // tail_copula / mev argument
    std::size_t block = 1000;           // mev block length
    double tolerance = kDefaultTolerance;
    std::uint64_t seed = kDefaultSeed;
    std::size_t threads = 0;            // 0: hardware concurrency
};

struct ExperimentReport {
    std::string name;
    Quantity quantity = Quantity::Theta;
    TheoryValue theory;
    MeanSd empirical;
    double tolerance = 0.0;
    bool pass = false;
    std::string error;
};

// Closed-form side of an experiment.
TheoryValue experiment_theory(const ExperimentSpec& spec);
// Empirical estimate from one replication.
double experiment_replication(const ExperimentSpec& spec, std::uint64_t rep);
ExperimentReport run_experiment(const ExperimentSpec& spec);

struct SuiteResult {
    std::vector<ExperimentReport> reports;
    int exit_code = 0;
};

SuiteResult experiment_suite(const std::string& path);
SuiteResult experiment_suite(const nlohmann::json& suite);

// JSON <-> specs. Unknown keys are rejected so typos surface.
ModelSpec model_from_json(const nlohmann::json& j);
ExperimentSpec experiment_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const ExperimentReport& r);
std::string summary_table(const std::vector<ExperimentReport>& reports);

}  // namespace scalemix
