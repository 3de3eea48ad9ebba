#pragma once

#include <cstdint>
#include <vector>

#include "sgdlab/schedule.hpp"

namespace sgdlab {

// Riemann zeta for real s > 1 via Borwein's alternating-series
// acceleration (n = 48 terms; error falls like (3 + sqrt 8)^-n, far below
// 1e-10 over the range used here).
double riemann_zeta(double s);

// p = exp(M * sum_k eps_k^2), closed form through the zeta function for
// power schedules. Throws when the squared schedule is not summable.
double compute_p(double M, const StepSchedule& schedule);

// exp(-sum_{i<=n} s eps_i / (p (1 - alpha)^2)); the bound shape for the
// expected squared gradient norm after n steps.
double predicted_rate_envelope(std::int64_t n, double s, double p, double alpha,
                               const StepSchedule& schedule);

enum class TimeAverageOrder { power, log_over_T, one_over_T };

struct TimeAverageClass {
    TimeAverageOrder order = TimeAverageOrder::power;
    double q = 0.0;
};

// q = s / (p (1 - alpha)^2): q < 1 gives O(T^-q), q = 1 gives O(ln T / T),
// q > 1 gives O(1/T).
TimeAverageClass classify_time_average_order(double q);

// Running average (1/T) sum_{n<=T} series over a possibly thinned grid;
// gaps are weighted by their width so the thinned curve tracks the dense one.
std::vector<double> time_average_curve(const std::vector<std::int64_t>& n,
                                       const std::vector<double>& series);

struct RateFit {
    double lambda_hat = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::int64_t first_index = 0;
    std::int64_t last_index = 0;
    std::int64_t points = 0;
};

// OLS of ln(mean_grad_sq) against the cumulative step-size sum, over the
// window after dropping the leading burn_in_fraction of entries. Throws on
// nonpositive values in the window or fewer than 20 points.
RateFit fit_decay_exponent(const std::vector<double>& cum_eps,
                           const std::vector<double>& mean_grad_sq,
                           double burn_in_fraction);

struct PlateauResult {
    bool pass = false;
    double tail_increment_ratio = 0.0;
};

// For a nondecreasing cumulative series: the fraction of the total added
// over the trailing tail_fraction of entries. Small ratio = summable-looking.
// Throws on decreasing input or length < 100.
PlateauResult plateau_check(const std::vector<double>& cumulative, double tail_fraction,
                            double threshold);

// Slope of a log-log fit of y against n over the trailing half; used for
// time-average order measurements.
double log_log_slope(const std::vector<std::int64_t>& n, const std::vector<double>& y,
                     double burn_in_fraction);

}  // namespace sgdlab
