#include "sgdlab/optimizers.hpp"

#include <cmath>
#include <stdexcept>

namespace sgdlab {

namespace {

void check_dims(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

SgdState sgd_step(const SgdState& state, const Vec& grad, double eps) {
    check_dims(state.theta.size(), grad.size(), "sgd_step");
    if (!(eps > 0.0)) throw std::invalid_argument("sgd_step: eps must be positive");
    SgdState next = state;
    for (std::size_t j = 0; j < grad.size(); ++j) next.theta[j] = state.theta[j] - eps * grad[j];
    ++next.n;
    return next;
}

MsgdState msgd_step(const MsgdState& state, const Vec& grad, double alpha, double eps) {
    check_dims(state.theta.size(), grad.size(), "msgd_step");
    check_dims(state.theta.size(), state.v.size(), "msgd_step");
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("msgd_step: alpha must lie in [0,1)");
    }
    if (!(eps > 0.0)) throw std::invalid_argument("msgd_step: eps must be positive");
    MsgdState next = state;
    for (std::size_t j = 0; j < grad.size(); ++j) {
        next.v[j] = alpha * state.v[j] + eps * grad[j];
        next.theta[j] = state.theta[j] - next.v[j];
    }
    ++next.n;
    return next;
}

ShbState shb_step(const ShbState& state, const Vec& grad, double beta, double gamma) {
    check_dims(state.theta.size(), grad.size(), "shb_step");
    check_dims(state.theta.size(), state.v.size(), "shb_step");
    if (!(beta > 0.0 && beta < 1.0)) {
        throw std::invalid_argument("shb_step: beta must lie in (0,1)");
    }
    if (!(gamma > 0.0)) throw std::invalid_argument("shb_step: gamma must be positive");
    ShbState next = state;
    for (std::size_t j = 0; j < grad.size(); ++j) {
        next.v[j] = beta * state.v[j] + (1.0 - beta) * grad[j];
        next.theta[j] = state.theta[j] - gamma * next.v[j];
    }
    ++next.n;
    return next;
}

AdagradNormState adagrad_norm_step(const AdagradNormState& state, const Vec& grad,
                                   double alpha0) {
    check_dims(state.theta.size(), grad.size(), "adagrad_norm_step");
    if (!(alpha0 > 0.0)) throw std::invalid_argument("adagrad_norm_step: alpha0 must be positive");
    if (!(state.s >= 0.0)) throw std::invalid_argument("adagrad_norm_step: S must be >= 0");
    AdagradNormState next = state;
    next.s = state.s + norm_sq(grad);
    if (next.s > 0.0) {
        const double scale = alpha0 / std::sqrt(next.s);
        for (std::size_t j = 0; j < grad.size(); ++j) {
            next.theta[j] = state.theta[j] - scale * grad[j];
        }
    }
    ++next.n;
    return next;
}

AdagradCoordState adagrad_coord_step(const AdagradCoordState& state, const Vec& grad,
                                     double alpha0) {
    check_dims(state.theta.size(), grad.size(), "adagrad_coord_step");
    check_dims(state.theta.size(), state.q.size(), "adagrad_coord_step");
    if (!(alpha0 > 0.0)) {
        throw std::invalid_argument("adagrad_coord_step: alpha0 must be positive");
    }
    AdagradCoordState next = state;
    for (std::size_t j = 0; j < grad.size(); ++j) {
        if (!(state.q[j] >= 0.0)) {
            throw std::invalid_argument("adagrad_coord_step: Q must be >= 0");
        }
        next.q[j] = state.q[j] + grad[j] * grad[j];
        if (next.q[j] > 0.0) {
            // Same expression shape as the norm form so the two coincide
            // bit-exactly in one dimension.
            next.theta[j] = state.theta[j] - (alpha0 / std::sqrt(next.q[j])) * grad[j];
        }
    }
    ++next.n;
    return next;
}

MappedMomentum map_shb_to_msgd(double gamma_n, double gamma_prev, double beta_n) {
    if (!(gamma_prev > 0.0)) {
        throw std::invalid_argument("map_shb_to_msgd: gamma_prev must be positive");
    }
    if (!(gamma_n > 0.0)) throw std::invalid_argument("map_shb_to_msgd: gamma_n must be positive");
    if (!(beta_n > 0.0 && beta_n < 1.0)) {
        throw std::invalid_argument("map_shb_to_msgd: beta_n must lie in (0,1)");
    }
    return {(gamma_n / gamma_prev) * beta_n, gamma_n * (1.0 - beta_n)};
}

}  // namespace sgdlab
