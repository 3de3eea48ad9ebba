#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sgdlab/config.hpp"
#include "sgdlab/objectives.hpp"
#include "sgdlab/oracles.hpp"
#include "sgdlab/rng.hpp"
#include "sgdlab/schedule.hpp"

namespace sgdlab {

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::string region;
};

struct ComponentPl {
    int component = 0;
    double s_hat = 0.0;
    std::int64_t samples = 0;
};

struct AssumptionReport {
    Estimate lipschitz_hat;
    Estimate m_hat;
    Estimate m_prime_hat;
    Estimate a_hat;
    std::vector<ComponentPl> s_hat;
    double s_hat_min = 0.0;
    ScheduleValidity schedule;
    NoiseConstants closed_form;
    bool thm_momentum_convergence = false;  // Robbins-Monro sgd/msgd hypotheses
    bool thm_rate_envelope = false;         // + uniform finite-sum noise, s > 0
    bool thm_adagrad_convergence = false;   // adagrad + finite second-moment fit
    std::string thm_momentum_reason;
    std::string thm_rate_reason;
    std::string thm_adagrad_reason;
};

// Max over sampled pairs of |grad g(x) - grad g(y)| / |x - y|, pairs uniform
// in [lo, hi]^N with separation at least 1e-6. One-sided empirical bound.
double estimate_lipschitz(const Objective& obj, double lo, double hi, std::int64_t pairs,
                          RngStream& rng);

// Max over sampled theta of E|sample - grad|^2 / (1 + g). Finite-sum oracles
// are enumerated exactly (std_error 0); sampling oracles use Monte Carlo.
Estimate estimate_noise_M(const GradientOracle& oracle, const Objective& obj,
                          std::int64_t points, std::int64_t samples_per_point, RngStream& rng);

struct MprimeFit {
    Estimate m_prime;
    Estimate a;
    std::int64_t violations = 0;  // points above the fit line by > 3 std errors
};

// Least squares of E|sample|^2 against |grad g|^2 over sampled theta:
// slope M', intercept a. The first form scans the objective's window.
MprimeFit estimate_Mprime_a(const GradientOracle& oracle, const Objective& obj,
                            std::int64_t points, std::int64_t samples_per_point,
                            RngStream& rng);
MprimeFit estimate_Mprime_a_region(const GradientOracle& oracle, const Objective& obj,
                                   double lo, double hi, std::int64_t points,
                                   std::int64_t samples_per_point, RngStream& rng);

// Min over sampled theta with 1e-4 < d(theta, J_i) < radius of
// |grad g|^2 / |g - g_i| for component i.
double estimate_local_pl_s(const Objective& obj, int component, double radius,
                           std::int64_t samples, RngStream& rng);

AssumptionReport build_assumption_report(const ExperimentConfig& cfg);

}  // namespace sgdlab
