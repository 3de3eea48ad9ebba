#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgdlab/objectives.hpp"
#include "sgdlab/optimizers.hpp"
#include "sgdlab/oracles.hpp"
#include "sgdlab/vec.hpp"

namespace sgdlab {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& key, const std::string& message)
        : std::runtime_error("config key '" + key + "': " + message), key(key) {}
    std::string key;
};

struct ObjectiveSpec {
    std::string id;
    double c = 1.0;                 // quad only
    int dim = 1;                    // quad only
    std::vector<Vec> centers;       // finite_sum_quad only
};

struct OracleSpec {
    OracleKind kind = OracleKind::exact;
    double sigma = 0.0;  // additive_gaussian only
};

struct ChecksSpec {
    bool lemmas = true;
    bool rate_fit = true;    // forced off for adagrad algorithms
    bool assumptions = false;
};

struct ExperimentConfig {
    ObjectiveSpec objective;
    OracleSpec oracle;
    Algorithm algorithm = Algorithm::sgd;
    HyperParams hp;
    std::int64_t horizon = 0;
    std::int64_t runs = 100;
    std::int64_t stride = 1;
    std::uint64_t base_seed = 0;
    Vec init_theta;
    Vec init_v;
    std::string output_dir;
    bool output_dir_set = false;
    ChecksSpec checks;
};

// Strict JSON parsing: unknown keys are rejected by name, hyperparameters
// must match the chosen algorithm, defaults runs=100 and
// stride=max(1, horizon/10000) are applied.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical echo: fixed key order, 17-significant-digit numbers. Feeding it
// back through parse_config reproduces the same config.
std::string serialize_config(const ExperimentConfig& cfg);

Objective objective_from_spec(const ObjectiveSpec& spec);
GradientOracle oracle_from_spec(const OracleSpec& spec, const Objective& obj);

std::string algorithm_name(Algorithm a);

}  // namespace sgdlab
