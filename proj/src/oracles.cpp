#include "sgdlab/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace sgdlab {

namespace {

// Deterministic scan points for window-restricted numeric constants.
std::vector<Vec> window_scan_points(const Objective& obj, std::int64_t count) {
    std::vector<Vec> points;
    points.reserve(static_cast<std::size_t>(count));
    RngStream rng(0x5ca11ab5u, 0);
    const double lo = obj.stationary.window_lo;
    const double hi = obj.stationary.window_hi;
    for (std::int64_t i = 0; i < count; ++i) {
        Vec p(static_cast<std::size_t>(obj.dimension));
        for (double& x : p) x = lo + (hi - lo) * rng.next_uniform();
        points.push_back(std::move(p));
    }
    // Include the stationary anchors, where the M ratio typically peaks.
    for (const StationaryComponent& comp : obj.stationary.components) {
        if (comp.kind == ComponentKind::point) points.push_back(comp.anchor);
    }
    return points;
}

}  // namespace

GradientOracle make_exact_oracle(const Objective& obj) {
    GradientOracle o;
    o.kind = OracleKind::exact;
    o.objective_id = obj.id;
    o.mean_grad = obj.grad;
    return o;
}

GradientOracle make_gaussian_oracle(const Objective& obj, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian oracle sigma must be positive");
    GradientOracle o;
    o.kind = OracleKind::additive_gaussian;
    o.objective_id = obj.id;
    o.sigma = sigma;
    o.mean_grad = obj.grad;
    return o;
}

GradientOracle make_finite_sum_oracle(const Objective& obj) {
    if (obj.finite_sum_centers.empty()) {
        throw std::invalid_argument("objective '" + obj.id +
                                    "' has no finite-sum components for a uniform oracle");
    }
    GradientOracle o;
    o.kind = OracleKind::finite_sum_uniform;
    o.objective_id = obj.id;
    o.mean_grad = obj.grad;
    for (const Vec& center : obj.finite_sum_centers) {
        o.component_grads.push_back([center](const Vec& t) {
            Vec g(t.size());
            for (std::size_t j = 0; j < t.size(); ++j) g[j] = t[j] - center[j];
            return g;
        });
    }
    return o;
}

Vec sample_gradient_from_mean(const GradientOracle& oracle, const Vec& theta, const Vec& mean,
                              RngStream& rng) {
    switch (oracle.kind) {
        case OracleKind::exact:
            return mean;
        case OracleKind::additive_gaussian: {
            Vec out = mean;
            for (double& x : out) x += oracle.sigma * rng.next_normal();
            return out;
        }
        case OracleKind::finite_sum_uniform: {
            const std::uint64_t i = rng.next_below(oracle.component_grads.size());
            return oracle.component_grads[static_cast<std::size_t>(i)](theta);
        }
    }
    throw std::logic_error("unknown oracle kind");
}

Vec sample_gradient(const GradientOracle& oracle, const Vec& theta, RngStream& rng) {
    if (!all_finite(theta)) throw std::invalid_argument("sample_gradient needs finite theta");
    if (oracle.kind == OracleKind::finite_sum_uniform) {
        return sample_gradient_from_mean(oracle, theta, theta, rng);
    }
    return sample_gradient_from_mean(oracle, theta, oracle.mean_grad(theta), rng);
}

NoiseConstants theoretical_noise_constants(const GradientOracle& oracle, const Objective& obj) {
    NoiseConstants c;
    const double n = static_cast<double>(obj.dimension);
    switch (oracle.kind) {
        case OracleKind::exact:
            c.M = 0.0;
            c.M_prime = 1.0;
            c.a = 0.0;
            c.closed_form = true;
            c.note = "zero-noise oracle: M = 0 satisfies the bound only vacuously";
            return c;
        case OracleKind::additive_gaussian:
            c.M = n * oracle.sigma * oracle.sigma;
            c.M_prime = 1.0;
            c.a = n * oracle.sigma * oracle.sigma;
            c.closed_form = true;
            c.note = "independent per-coordinate noise: second moments add";
            return c;
        case OracleKind::finite_sum_uniform: {
            // No closed form in general: scan the window, enumerating the
            // component mixture exactly at each point.
            const std::size_t m = oracle.component_grads.size();
            double max_ratio = 0.0;
            double sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0, sum_xy = 0.0;
            const std::vector<Vec> points = window_scan_points(obj, 4096);
            for (const Vec& p : points) {
                const Vec mean = obj.grad(p);
                double var = 0.0;
                double second = 0.0;
                for (const auto& comp_grad : oracle.component_grads) {
                    const Vec gi = comp_grad(p);
                    second += norm_sq(gi);
                    double d2 = 0.0;
                    for (std::size_t j = 0; j < gi.size(); ++j) {
                        const double d = gi[j] - mean[j];
                        d2 += d * d;
                    }
                    var += d2;
                }
                var /= static_cast<double>(m);
                second /= static_cast<double>(m);
                max_ratio = std::max(var / (1.0 + obj.eval(p)), max_ratio);
                const double x = norm_sq(mean);
                sum_x += x;
                sum_y += second;
                sum_xx += x * x;
                sum_xy += x * second;
            }
            const double np = static_cast<double>(points.size());
            const double denom = np * sum_xx - sum_x * sum_x;
            c.M = max_ratio;
            if (denom > 0.0) {
                c.M_prime = (np * sum_xy - sum_x * sum_y) / denom;
                c.a = (sum_y - c.M_prime * sum_x) / np;
            } else {
                c.M_prime = 1.0;
                c.a = sum_y / np;
            }
            c.closed_form = false;
            c.note = "empirical: window scan with exact component enumeration";
            return c;
        }
    }
    throw std::logic_error("unknown oracle kind");
}

}  // namespace sgdlab
