#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgdlab/assumptions.hpp"
#include "sgdlab/config.hpp"
#include "sgdlab/ensemble.hpp"
#include "sgdlab/lemmas.hpp"
#include "sgdlab/rates.hpp"
#include "sgdlab/trajectory.hpp"

namespace sgdlab {

struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> runs;
    std::optional<std::string> out;
};

ExperimentConfig apply_overrides(ExperimentConfig cfg, const CliOverrides& ov);

// Run i of R uses the stream (base_seed, substream i).
std::vector<TrajectoryRecord> run_many(const ExperimentConfig& cfg);

// Ensemble aggregation; requires runs >= 2 and at least one completed run.
EnsembleSummary run_ensemble(const ExperimentConfig& cfg);

RateFit fit_rate(const EnsembleSummary& summary, double burn_in_fraction = 0.1);

struct RunArtifacts {
    int exit_code = 0;
    std::vector<std::string> failures;
    std::string csv_path;
    std::string json_path;
};

// Writes trajectory.csv and summary.json into out_dir, runs the requested
// checks, exit code 0 only when every requested check passed.
RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

enum class CompareMetric { decay_exponent, final_dist_j, time_average_slope };

CompareMetric compare_metric_from_name(const std::string& name);
std::string compare_metric_name(CompareMetric m);

struct CompareRow {
    std::string config_path;
    Algorithm algorithm = Algorithm::sgd;
    std::optional<double> alpha;         // msgd momentum (0 for sgd)
    std::optional<double> mapped_alpha;  // shb: limiting mapped momentum
    std::optional<double> mapped_eps_c0; // shb: mapped step-size scale
    double value = 0.0;
};

struct CompareResult {
    std::vector<CompareRow> rows;  // sorted ascending by value, stable
    std::string csv_path;
};

// Runs every config (same objective id and oracle kind required) and writes
// a ranking table compare.csv into out_dir.
CompareResult run_compare(const std::vector<std::string>& config_paths, CompareMetric metric,
                          const std::string& out_dir, const CliOverrides& ov);

// Writes assumptions.json; returns the report.
AssumptionReport run_verify_assumptions(const ExperimentConfig& cfg, const std::string& out_dir);

// Writes rate.json; returns the fit.
RateFit run_fit_rate(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace sgdlab
