#include "sgdlab/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace sgdlab {

namespace {

bool needs_epsilon(Algorithm a) { return a == Algorithm::sgd || a == Algorithm::msgd; }
bool is_momentum(Algorithm a) { return a == Algorithm::msgd || a == Algorithm::shb; }
bool is_adagrad(Algorithm a) {
    return a == Algorithm::adagrad_norm || a == Algorithm::adagrad_coord;
}

void validate_inputs(const Objective& obj, const RunInputs& in) {
    if (in.horizon < 1) throw std::invalid_argument("run_trajectory: horizon must be >= 1");
    if (in.stride < 1) throw std::invalid_argument("run_trajectory: stride must be >= 1");
    if (static_cast<int>(in.theta1.size()) != obj.dimension) {
        throw std::invalid_argument("run_trajectory: theta1 dimension mismatch");
    }
    if (!all_finite(in.theta1)) throw std::invalid_argument("run_trajectory: theta1 not finite");
    if (needs_epsilon(in.algorithm) && !in.hp.epsilon) {
        throw std::invalid_argument("run_trajectory: missing step-size schedule");
    }
    if (in.algorithm == Algorithm::msgd &&
        !(in.hp.alpha >= 0.0 && in.hp.alpha < 1.0)) {
        throw std::invalid_argument("run_trajectory: alpha must lie in [0,1)");
    }
    if (in.algorithm == Algorithm::shb && (!in.hp.beta || !in.hp.gamma_step)) {
        throw std::invalid_argument("run_trajectory: shb needs beta and gamma schedules");
    }
    if (is_adagrad(in.algorithm) && !(in.hp.alpha0 > 0.0)) {
        throw std::invalid_argument("run_trajectory: alpha0 must be positive");
    }
    if (is_momentum(in.algorithm) && !in.v0.empty() &&
        in.v0.size() != in.theta1.size()) {
        throw std::invalid_argument("run_trajectory: v0 dimension mismatch");
    }
}

}  // namespace

TrajectoryRecord run_trajectory(const Objective& obj, const GradientOracle& oracle,
                                const RunInputs& in, RngStream& rng) {
    validate_inputs(obj, in);

    const Algorithm algo = in.algorithm;
    const std::size_t dim = in.theta1.size();
    Vec theta = in.theta1;
    Vec v = in.v0.empty() ? zeros(dim) : in.v0;
    Vec q = zeros(dim);
    double s = 0.0;

    double cum_eps_grad_sq = 0.0;
    double cum_v_sq = 0.0;
    double cum_adagrad_ratio = 0.0;
    double cum_eps = 0.0;

    TrajectoryRecord rec;
    rec.base_seed = rng.base_seed();
    rec.substream = rng.substream_id();
    const std::int64_t expected = in.horizon / in.stride + 2;
    rec.n.reserve(static_cast<std::size_t>(expected));
    rec.g.reserve(static_cast<std::size_t>(expected));

    auto record = [&](std::int64_t iterate) {
        rec.n.push_back(iterate);
        rec.g.push_back(obj.eval(theta));
        const Vec tg = obj.grad(theta);
        rec.grad_sq.push_back(norm_sq(tg));
        rec.dist_j.push_back(distance_to_stationary_set_unchecked(obj, theta));
        if (is_momentum(algo)) {
            rec.v_sq.push_back(norm_sq(v));
            rec.cum_v_sq.push_back(cum_v_sq);
        }
        if (is_adagrad(algo)) {
            double acc = s;
            if (algo == Algorithm::adagrad_coord) {
                acc = 0.0;
                for (double x : q) acc += x;
            }
            rec.s_accum.push_back(acc);
            rec.cum_adagrad_ratio.push_back(cum_adagrad_ratio);
        }
        if (!is_adagrad(algo)) {
            rec.cum_eps_grad_sq.push_back(cum_eps_grad_sq);
            rec.cum_eps.push_back(cum_eps);
        }
    };

    record(1);

    for (std::int64_t t = 1; t <= in.horizon; ++t) {
        const Vec true_grad = obj.grad(theta);
        const double true_grad_sq = norm_sq(true_grad);
        const Vec sample = sample_gradient_from_mean(oracle, theta, true_grad, rng);

        switch (algo) {
            case Algorithm::sgd: {
                const double eps = in.hp.epsilon->value(t);
                for (std::size_t j = 0; j < dim; ++j) theta[j] -= eps * sample[j];
                cum_eps_grad_sq += eps * true_grad_sq;
                cum_eps += eps;
                break;
            }
            case Algorithm::msgd: {
                const double eps = in.hp.epsilon->value(t);
                for (std::size_t j = 0; j < dim; ++j) {
                    v[j] = in.hp.alpha * v[j] + eps * sample[j];
                    theta[j] -= v[j];
                }
                cum_v_sq += norm_sq(v);
                cum_eps_grad_sq += eps * true_grad_sq;
                cum_eps += eps;
                break;
            }
            case Algorithm::shb: {
                const double beta = in.hp.beta->value(t);
                const double gamma = in.hp.gamma_step->value(t);
                for (std::size_t j = 0; j < dim; ++j) {
                    v[j] = beta * v[j] + (1.0 - beta) * sample[j];
                    theta[j] -= gamma * v[j];
                }
                cum_v_sq += norm_sq(v);
                const double eff_eps = gamma * (1.0 - beta);
                cum_eps_grad_sq += eff_eps * true_grad_sq;
                cum_eps += eff_eps;
                break;
            }
            case Algorithm::adagrad_norm: {
                if (s > 0.0) cum_adagrad_ratio += true_grad_sq / std::pow(s, kAdagradCumExponent);
                s += norm_sq(sample);
                if (s > 0.0) {
                    const double scale = in.hp.alpha0 / std::sqrt(s);
                    for (std::size_t j = 0; j < dim; ++j) theta[j] -= scale * sample[j];
                }
                break;
            }
            case Algorithm::adagrad_coord: {
                double acc = 0.0;
                for (double x : q) acc += x;
                if (acc > 0.0) {
                    cum_adagrad_ratio += true_grad_sq / std::pow(acc, kAdagradCumExponent);
                }
                for (std::size_t j = 0; j < dim; ++j) {
                    q[j] += sample[j] * sample[j];
                    if (q[j] > 0.0) theta[j] -= (in.hp.alpha0 / std::sqrt(q[j])) * sample[j];
                }
                break;
            }
        }

        const std::int64_t iterate = t + 1;
        if (!all_finite(theta) || !within_guard(theta)) {
            if (all_finite(theta)) {
                const double g_val = obj.eval(theta);
                if (std::isfinite(g_val) && std::isfinite(norm_sq(obj.grad(theta)))) {
                    record(iterate);
                }
                rec.theta_final = theta;
            }
            rec.status.outcome = RunOutcome::diverged;
            rec.status.steps_executed = t;
            rec.status.divergence_step = t;
            return rec;
        }

        if (t % in.stride == 0 || t == in.horizon) record(iterate);
    }

    rec.theta_final = theta;
    rec.status.outcome = RunOutcome::completed;
    rec.status.steps_executed = in.horizon;
    return rec;
}

}  // namespace sgdlab
