#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sgdlab/objectives.hpp"
#include "sgdlab/rng.hpp"
#include "sgdlab/vec.hpp"

namespace sgdlab {

enum class OracleKind { exact, additive_gaussian, finite_sum_uniform };

struct GradientOracle {
    OracleKind kind = OracleKind::exact;
    std::string objective_id;
    double sigma = 0.0;
    std::function<Vec(const Vec&)> mean_grad;
    std::vector<std::function<Vec(const Vec&)>> component_grads;
};

GradientOracle make_exact_oracle(const Objective& obj);
GradientOracle make_gaussian_oracle(const Objective& obj, double sigma);
// Requires obj.finite_sum_centers to be nonempty.
GradientOracle make_finite_sum_oracle(const Objective& obj);

// One stochastic gradient draw. exact: the true gradient; additive_gaussian:
// true gradient plus i.i.d. N(0, sigma^2) per coordinate; finite_sum_uniform:
// the gradient of one component chosen uniformly.
Vec sample_gradient(const GradientOracle& oracle, const Vec& theta, RngStream& rng);

// Same draw, reusing a precomputed true gradient so callers that already
// evaluated it do not pay twice. Must return bit-identical samples to
// sample_gradient under the same stream.
Vec sample_gradient_from_mean(const GradientOracle& oracle, const Vec& theta,
                              const Vec& mean, RngStream& rng);

// Constants for the second-moment noise bounds:
//   E|sample - grad|^2 <= M (1 + g)   and   E|sample|^2 <= M' |grad|^2 + a.
struct NoiseConstants {
    double M = 0.0;
    double M_prime = 1.0;
    double a = 0.0;
    bool closed_form = true;
    std::string note;
};

NoiseConstants theoretical_noise_constants(const GradientOracle& oracle, const Objective& obj);

}  // namespace sgdlab
