#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgdlab/optimizers.hpp"
#include "sgdlab/trajectory.hpp"

namespace sgdlab {

struct LemmaOptions {
    double bounded_mean_factor = 10.0;  // mean loss must stay under factor * (1 + initial)
    double plateau_tail_fraction = 0.5;
    double plateau_threshold = 0.05;
    double loss_ratio_exponent = 0.1;   // (g - g*) / S^e bounded
    double grad_ratio_exponent = 0.25;  // |grad g|^2 / S^e0 vanishing
    double inconclusive_divergence_fraction = 0.05;
    double infimum = 0.0;  // g* of the objective, for the loss ratio check
};

struct LemmaCheck {
    std::string name;
    bool applicable = false;
    bool pass = false;
    bool inconclusive = false;
    double statistic = 0.0;
    std::string detail;
};

struct LemmaReport {
    std::vector<LemmaCheck> checks;
    std::int64_t runs = 0;
    std::int64_t diverged = 0;
    bool all_applicable_pass = false;
};

// Finite-horizon surrogates of the convergence lemmas, evaluated on
// ensemble-mean series:
//   bounded_mean_loss          mean g stays within factor * (1 + initial mean g);
//                              computed over all runs including diverged
//                              partial series, so blow-ups register here
//   momentum_energy_summable   cumulative |v_t|^2 plateaus           (msgd, shb)
//   step_weighted_grad_summable cumulative eps_t |grad g|^2 plateaus (sgd, msgd, shb)
//   adagrad_ratio_summable     cumulative |grad g|^2 / S^0.6 plateaus (adagrad)
//   loss_accumulator_ratio_bounded  (g - g*) / S^0.1 bounded, no upward tail
//   grad_accumulator_ratio_vanishes |grad g|^2 / S^0.25 last-tenth max below
//                                   first-tenth max
// Checks other than bounded_mean_loss use completed runs only and are marked
// inconclusive when more than 5% of runs diverged.
LemmaReport lemma_suite(const std::vector<TrajectoryRecord>& records, Algorithm algorithm,
                        const LemmaOptions& options = {});

}  // namespace sgdlab
