#pragma once

#include <cstdint>
#include <vector>

#include "sgdlab/objectives.hpp"
#include "sgdlab/optimizers.hpp"
#include "sgdlab/oracles.hpp"
#include "sgdlab/rng.hpp"
#include "sgdlab/run_status.hpp"
#include "sgdlab/vec.hpp"

namespace sgdlab {

// Exponent in the adagrad cumulative ratio sum |grad g|^2 / S^(1/2 + 0.1).
inline constexpr double kAdagradCumExponent = 0.6;

// Thinned per-iterate series. Entry k describes iterate n[k]; n = 1 is the
// initial point and the final iterate is always recorded. Gradient-based
// series use the true gradient at the iterate, not the sampled one.
// Cumulative series accumulate every step and are sampled at record points;
// the value stored at iterate n covers steps 1..n-1.
struct TrajectoryRecord {
    std::vector<std::int64_t> n;
    std::vector<double> g;
    std::vector<double> grad_sq;
    std::vector<double> dist_j;
    std::vector<double> v_sq;             // msgd / shb only
    std::vector<double> s_accum;          // adagrad only (coord form: sum of Q)
    std::vector<double> cum_eps_grad_sq;  // sum of eps_t |grad g(theta_t)|^2
    std::vector<double> cum_v_sq;         // sum of |v_t|^2 (msgd / shb)
    std::vector<double> cum_adagrad_ratio;  // sum of |grad g(theta_k)|^2 / S^0.6
    std::vector<double> cum_eps;            // sum of eps_t (shb: gamma_t (1 - beta_t))
    Vec theta_final;
    RunStatus status;
    std::uint64_t base_seed = 0;
    std::uint64_t substream = 0;
};

struct RunInputs {
    Algorithm algorithm = Algorithm::sgd;
    HyperParams hp;
    Vec theta1;
    Vec v0;  // msgd / shb starting buffer; defaults to zeros
    std::int64_t horizon = 0;
    std::int64_t stride = 1;
};

// Deterministic given (objective, oracle, inputs, stream). Stops early when
// an iterate leaves the divergence guard or turns non-finite; the partial
// record carries status diverged rather than throwing.
TrajectoryRecord run_trajectory(const Objective& obj, const GradientOracle& oracle,
                                const RunInputs& inputs, RngStream& rng);

}  // namespace sgdlab
