#include "sgdlab/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgdlab {

namespace {

// Substream offsets for estimator streams, far above any run index.
constexpr std::uint64_t kEstimatorSubstreamBase = 1'000'000'000'000ULL;

std::string region_label(double lo, double hi, int dim) {
    return "[" + std::to_string(lo) + "," + std::to_string(hi) + "]^" + std::to_string(dim);
}

Vec uniform_point(double lo, double hi, int dim, RngStream& rng) {
    Vec p(static_cast<std::size_t>(dim));
    for (double& x : p) x = lo + (hi - lo) * rng.next_uniform();
    return p;
}

// Mean and standard error of |sample - mean_grad|^2 at theta. Finite-sum
// oracles are enumerated exactly; others are sampled.
struct MomentAtPoint {
    double mean = 0.0;
    double std_error = 0.0;
};

MomentAtPoint centered_second_moment(const GradientOracle& oracle, const Objective& obj,
                                     const Vec& theta, std::int64_t samples, RngStream& rng) {
    const Vec mean_grad = obj.grad(theta);
    if (oracle.kind == OracleKind::finite_sum_uniform) {
        double total = 0.0;
        for (const auto& comp : oracle.component_grads) {
            const Vec gi = comp(theta);
            double d2 = 0.0;
            for (std::size_t j = 0; j < gi.size(); ++j) {
                const double d = gi[j] - mean_grad[j];
                d2 += d * d;
            }
            total += d2;
        }
        return {total / static_cast<double>(oracle.component_grads.size()), 0.0};
    }
    double sum = 0.0, sum_sq = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const Vec g = sample_gradient_from_mean(oracle, theta, mean_grad, rng);
        double d2 = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double d = g[j] - mean_grad[j];
            d2 += d * d;
        }
        sum += d2;
        sum_sq += d2 * d2;
    }
    const double np = static_cast<double>(samples);
    const double mean = sum / np;
    const double var = std::max(0.0, sum_sq / np - mean * mean);
    return {mean, std::sqrt(var / np)};
}

MomentAtPoint raw_second_moment(const GradientOracle& oracle, const Objective& obj,
                                const Vec& theta, std::int64_t samples, RngStream& rng) {
    const Vec mean_grad = obj.grad(theta);
    if (oracle.kind == OracleKind::finite_sum_uniform) {
        double total = 0.0;
        for (const auto& comp : oracle.component_grads) total += norm_sq(comp(theta));
        return {total / static_cast<double>(oracle.component_grads.size()), 0.0};
    }
    if (oracle.kind == OracleKind::exact) {
        return {norm_sq(mean_grad), 0.0};
    }
    double sum = 0.0, sum_sq = 0.0;
    for (std::int64_t i = 0; i < samples; ++i) {
        const double m = norm_sq(sample_gradient_from_mean(oracle, theta, mean_grad, rng));
        sum += m;
        sum_sq += m * m;
    }
    const double np = static_cast<double>(samples);
    const double mean = sum / np;
    const double var = std::max(0.0, sum_sq / np - mean * mean);
    return {mean, std::sqrt(var / np)};
}

}  // namespace

double estimate_lipschitz(const Objective& obj, double lo, double hi, std::int64_t pairs,
                          RngStream& rng) {
    if (!(hi > lo)) throw std::invalid_argument("estimate_lipschitz: degenerate region");
    if (pairs < 1000) throw std::invalid_argument("estimate_lipschitz: needs >= 1000 pairs");
    double worst = 0.0;
    for (std::int64_t i = 0; i < pairs; ++i) {
        const Vec x = uniform_point(lo, hi, obj.dimension, rng);
        Vec y;
        double separation = 0.0;
        do {
            y = uniform_point(lo, hi, obj.dimension, rng);
            double d2 = 0.0;
            for (std::size_t j = 0; j < y.size(); ++j) {
                const double d = x[j] - y[j];
                d2 += d * d;
            }
            separation = std::sqrt(d2);
        } while (separation < 1e-6);
        const Vec gx = obj.grad(x);
        const Vec gy = obj.grad(y);
        double gd2 = 0.0;
        for (std::size_t j = 0; j < gx.size(); ++j) {
            const double d = gx[j] - gy[j];
            gd2 += d * d;
        }
        worst = std::max(worst, std::sqrt(gd2) / separation);
    }
    return worst;
}

Estimate estimate_noise_M(const GradientOracle& oracle, const Objective& obj,
                          std::int64_t points, std::int64_t samples_per_point, RngStream& rng) {
    if (samples_per_point < 1000) {
        throw std::invalid_argument("estimate_noise_M: needs >= 1000 samples per point");
    }
    const double lo = obj.stationary.window_lo;
    const double hi = obj.stationary.window_hi;
    Estimate est;
    est.region = region_label(lo, hi, obj.dimension);
    est.samples = points * samples_per_point;
    double best = 0.0, best_se = 0.0;
    for (std::int64_t i = 0; i < points; ++i) {
        const Vec theta = uniform_point(lo, hi, obj.dimension, rng);
        const MomentAtPoint m =
            centered_second_moment(oracle, obj, theta, samples_per_point, rng);
        const double denom = 1.0 + obj.eval(theta);
        const double ratio = m.mean / denom;
        if (ratio >= best) {
            best = ratio;
            best_se = m.std_error / denom;
        }
    }
    // The ratio peaks where g is smallest; include stationary anchors so the
    // scan reaches that regime.
    for (const StationaryComponent& comp : obj.stationary.components) {
        Vec theta = comp.anchor;
        if (comp.kind == ComponentKind::periodic_lattice || !inside_window(obj, theta)) continue;
        const MomentAtPoint m =
            centered_second_moment(oracle, obj, theta, samples_per_point, rng);
        const double denom = 1.0 + obj.eval(theta);
        const double ratio = m.mean / denom;
        if (ratio >= best) {
            best = ratio;
            best_se = m.std_error / denom;
        }
    }
    est.value = best;
    est.std_error = best_se;
    return est;
}

MprimeFit estimate_Mprime_a(const GradientOracle& oracle, const Objective& obj,
                            std::int64_t points, std::int64_t samples_per_point, RngStream& rng) {
    return estimate_Mprime_a_region(oracle, obj, obj.stationary.window_lo,
                                    obj.stationary.window_hi, points, samples_per_point, rng);
}

MprimeFit estimate_Mprime_a_region(const GradientOracle& oracle, const Objective& obj, double lo,
                                   double hi, std::int64_t points,
                                   std::int64_t samples_per_point, RngStream& rng) {
    if (points < 20) throw std::invalid_argument("estimate_Mprime_a: needs >= 20 points");
    std::vector<double> x(static_cast<std::size_t>(points));
    std::vector<double> y(static_cast<std::size_t>(points));
    std::vector<double> se(static_cast<std::size_t>(points));
    for (std::int64_t i = 0; i < points; ++i) {
        const Vec theta = uniform_point(lo, hi, obj.dimension, rng);
        x[static_cast<std::size_t>(i)] = norm_sq(obj.grad(theta));
        const MomentAtPoint m = raw_second_moment(oracle, obj, theta, samples_per_point, rng);
        y[static_cast<std::size_t>(i)] = m.mean;
        se[static_cast<std::size_t>(i)] = m.std_error;
    }
    const double np = static_cast<double>(points);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= np;
    my /= np;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument(
            "estimate_Mprime_a: all sampled gradient norms equal (rank-deficient fit)");
    }
    MprimeFit fit;
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double resid = y[i] - (slope * x[i] + intercept);
        rss += resid * resid;
        if (se[i] > 0.0 && resid > 3.0 * se[i]) ++fit.violations;
    }
    const double dof = std::max(1.0, np - 2.0);
    const double sigma2 = rss / dof;
    fit.m_prime.value = slope;
    fit.m_prime.std_error = std::sqrt(sigma2 / sxx);
    fit.m_prime.samples = points * samples_per_point;
    fit.m_prime.region = region_label(lo, hi, obj.dimension);
    fit.a.value = intercept;
    fit.a.std_error = std::sqrt(sigma2 * (1.0 / np + mx * mx / sxx));
    fit.a.samples = fit.m_prime.samples;
    fit.a.region = fit.m_prime.region;
    return fit;
}

double estimate_local_pl_s(const Objective& obj, int component, double radius,
                           std::int64_t samples, RngStream& rng) {
    if (component < 0 ||
        component >= static_cast<int>(obj.stationary.components.size())) {
        throw std::invalid_argument("estimate_local_pl_s: component index out of range");
    }
    if (!(radius > 0.0 && radius <= 0.5)) {
        throw std::invalid_argument("estimate_local_pl_s: radius must lie in (0, 0.5]");
    }
    if (samples < 1000) throw std::invalid_argument("estimate_local_pl_s: needs >= 1000 samples");
    const StationaryComponent& comp =
        obj.stationary.components[static_cast<std::size_t>(component)];
    double best = std::numeric_limits<double>::infinity();
    std::int64_t accepted = 0;
    std::int64_t attempts = 0;
    const std::int64_t max_attempts = samples * 100;
    while (accepted < samples && attempts < max_attempts) {
        ++attempts;
        Vec theta = comp.anchor;
        for (double& c : theta) c += radius * (2.0 * rng.next_uniform() - 1.0);
        const double d = distance_to_component(comp, theta);
        if (!(d > 1e-4 && d < radius)) continue;
        if (nearest_component(obj, theta) != component) continue;
        if (!inside_window(obj, theta)) continue;
        const double denom = std::abs(obj.eval(theta) - comp.value);
        if (denom == 0.0) continue;
        best = std::min(best, norm_sq(obj.grad(theta)) / denom);
        ++accepted;
    }
    if (accepted == 0) {
        throw std::runtime_error("estimate_local_pl_s: no admissible samples in the shell");
    }
    return best;
}

AssumptionReport build_assumption_report(const ExperimentConfig& cfg) {
    const Objective obj = objective_from_spec(cfg.objective);
    const GradientOracle oracle = oracle_from_spec(cfg.oracle, obj);
    AssumptionReport report;

    RngStream lip_rng(cfg.base_seed, kEstimatorSubstreamBase);
    const double lo = obj.stationary.window_lo;
    const double hi = obj.stationary.window_hi;
    report.lipschitz_hat.value = estimate_lipschitz(obj, lo, hi, 4096, lip_rng);
    report.lipschitz_hat.samples = 4096;
    report.lipschitz_hat.region = region_label(lo, hi, obj.dimension);

    RngStream m_rng(cfg.base_seed, kEstimatorSubstreamBase + 1);
    report.m_hat = estimate_noise_M(oracle, obj, 64, 2048, m_rng);

    RngStream mp_rng(cfg.base_seed, kEstimatorSubstreamBase + 2);
    const MprimeFit mp = estimate_Mprime_a(oracle, obj, 48, 2048, mp_rng);
    report.m_prime_hat = mp.m_prime;
    report.a_hat = mp.a;

    report.s_hat_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < obj.stationary.components.size(); ++i) {
        RngStream s_rng(cfg.base_seed, kEstimatorSubstreamBase + 3 + i);
        ComponentPl pl;
        pl.component = static_cast<int>(i);
        pl.samples = 1024;
        pl.s_hat = estimate_local_pl_s(obj, static_cast<int>(i), 0.1, 1024, s_rng);
        report.s_hat_min = std::min(report.s_hat_min, pl.s_hat);
        report.s_hat.push_back(pl);
    }

    report.closed_form = theoretical_noise_constants(oracle, obj);

    const bool has_eps = cfg.algorithm == Algorithm::sgd || cfg.algorithm == Algorithm::msgd;
    report.schedule = has_eps && cfg.hp.epsilon
                          ? schedule_validate(*cfg.hp.epsilon)
                          : ScheduleValidity{};

    // Momentum convergence hypotheses: Robbins-Monro steps, fixed momentum
    // coefficient in [0,1), finite noise constant.
    {
        std::vector<std::string> why;
        if (cfg.algorithm == Algorithm::shb) {
            why.push_back("mapped momentum coefficient is time-varying for heavy ball");
        } else if (cfg.algorithm != Algorithm::sgd && cfg.algorithm != Algorithm::msgd) {
            why.push_back("algorithm is not sgd or msgd");
        }
        if (has_eps && !report.schedule.robbins_monro_ok) {
            why.push_back("step schedule fails the Robbins-Monro conditions");
        }
        if (cfg.algorithm == Algorithm::msgd && !(cfg.hp.alpha >= 0.0 && cfg.hp.alpha < 1.0)) {
            why.push_back("momentum coefficient outside [0,1)");
        }
        if (!std::isfinite(report.m_hat.value)) why.push_back("noise constant estimate not finite");
        report.thm_momentum_convergence = why.empty();
        report.thm_momentum_reason = why.empty() ? "hypotheses satisfied" : why.front();
        for (std::size_t i = 1; i < why.size(); ++i) report.thm_momentum_reason += "; " + why[i];
    }

    // Rate envelope additionally needs uniform finite-sum noise and a
    // positive local gradient-dominance constant.
    {
        std::vector<std::string> why;
        if (!report.thm_momentum_convergence) {
            why.push_back("momentum convergence hypotheses fail: " + report.thm_momentum_reason);
        }
        if (cfg.oracle.kind != OracleKind::finite_sum_uniform) {
            why.push_back("noise is not uniform finite-sum sampling");
        }
        if (!(report.s_hat_min > 0.0)) why.push_back("estimated local constant s is not positive");
        report.thm_rate_envelope = why.empty();
        report.thm_rate_reason = why.empty() ? "hypotheses satisfied" : why.front();
        for (std::size_t i = 1; i < why.size(); ++i) report.thm_rate_reason += "; " + why[i];
    }

    {
        std::vector<std::string> why;
        if (cfg.algorithm != Algorithm::adagrad_norm && cfg.algorithm != Algorithm::adagrad_coord) {
            why.push_back("algorithm is not adagrad");
        }
        if (!std::isfinite(report.m_prime_hat.value) || !std::isfinite(report.a_hat.value)) {
            why.push_back("second-moment fit constants not finite");
        }
        report.thm_adagrad_convergence = why.empty();
        report.thm_adagrad_reason = why.empty() ? "hypotheses satisfied" : why.front();
        for (std::size_t i = 1; i < why.size(); ++i) report.thm_adagrad_reason += "; " + why[i];
    }

    return report;
}

}  // namespace sgdlab
