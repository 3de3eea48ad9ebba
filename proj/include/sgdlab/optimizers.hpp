#pragma once

#include <cstdint>
#include <optional>

#include "sgdlab/schedule.hpp"
#include "sgdlab/vec.hpp"

namespace sgdlab {

enum class Algorithm { sgd, msgd, shb, adagrad_norm, adagrad_coord };

struct HyperParams {
    double alpha = 0.0;                      // msgd momentum, in [0, 1)
    std::optional<StepSchedule> epsilon;     // sgd / msgd step sizes
    std::optional<StepSchedule> beta;        // shb momentum, values in (0, 1)
    std::optional<StepSchedule> gamma_step;  // shb step sizes
    double alpha0 = 0.0;                     // adagrad scale, > 0
};

// States carry the iterate index n (1-based): n = 1 is the initial point,
// each step increments it.
struct SgdState {
    Vec theta;
    std::int64_t n = 1;
};

struct MsgdState {
    Vec theta;
    Vec v;
    std::int64_t n = 1;
};

struct ShbState {
    Vec theta;
    Vec v;
    std::int64_t n = 1;
};

struct AdagradNormState {
    Vec theta;
    double s = 0.0;
    std::int64_t n = 1;
};

struct AdagradCoordState {
    Vec theta;
    Vec q;
    std::int64_t n = 1;
};

// theta' = theta - eps * grad
SgdState sgd_step(const SgdState& state, const Vec& grad, double eps);

// v' = alpha * v + eps * grad; theta' = theta - v'
MsgdState msgd_step(const MsgdState& state, const Vec& grad, double alpha, double eps);

// v' = beta * v + (1 - beta) * grad; theta' = theta - gamma * v'
ShbState shb_step(const ShbState& state, const Vec& grad, double beta, double gamma);

// S' = S + |grad|^2; theta' = theta - (alpha0 / sqrt(S')) * grad,
// skipped while S' = 0.
AdagradNormState adagrad_norm_step(const AdagradNormState& state, const Vec& grad, double alpha0);

// Per coordinate j: Q_j' = Q_j + grad_j^2;
// theta_j' = theta_j - alpha0 * grad_j / sqrt(Q_j'), skipped while Q_j' = 0.
AdagradCoordState adagrad_coord_step(const AdagradCoordState& state, const Vec& grad,
                                     double alpha0);

// Heavy-ball parameters re-expressed as momentum-SGD parameters:
// alpha_n = (gamma_n / gamma_prev) * beta_n, eps_n = gamma_n * (1 - beta_n).
struct MappedMomentum {
    double alpha = 0.0;
    double eps = 0.0;
};

MappedMomentum map_shb_to_msgd(double gamma_n, double gamma_prev, double beta_n);

}  // namespace sgdlab
