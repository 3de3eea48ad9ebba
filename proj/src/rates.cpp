#include "sgdlab/rates.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sgdlab {

double riemann_zeta(double s) {
    if (!(s > 1.0)) throw std::invalid_argument("riemann_zeta requires s > 1");
    // Borwein's alternating-series acceleration: eta(s) first, then
    // zeta = eta / (1 - 2^(1-s)).
    constexpr int n = 48;
    double d[n + 1];
    double term = 1.0;  // n! / n! starting point of the recurrence
    d[0] = term;
    for (int j = 1; j <= n; ++j) {
        term *= 4.0 * static_cast<double>(n + j - 1) * static_cast<double>(n - j + 1) /
                (static_cast<double>(2 * j - 1) * static_cast<double>(2 * j));
        d[j] = d[j - 1] + term;
    }
    double eta = 0.0;
    double sign = 1.0;
    for (int k = 0; k < n; ++k) {
        eta += sign * (d[k] - d[n]) / std::pow(static_cast<double>(k + 1), s);
        sign = -sign;
    }
    eta /= -d[n];
    return eta / (1.0 - std::pow(2.0, 1.0 - s));
}

double compute_p(double M, const StepSchedule& schedule) {
    if (!(M >= 0.0) || !std::isfinite(M)) {
        throw std::invalid_argument("compute_p: M must be finite and >= 0");
    }
    const ScheduleValidity validity = schedule_validate(schedule);
    if (!validity.sum_sq_converges) {
        throw std::invalid_argument("compute_p: squared step sizes are not summable");
    }
    const double two_gamma = 2.0 * schedule.gamma();
    double tail = riemann_zeta(two_gamma);
    for (std::int64_t j = 1; j <= schedule.n0(); ++j) {
        tail -= std::pow(static_cast<double>(j), -two_gamma);
    }
    const double c0 = schedule.c0();
    return std::exp(M * c0 * c0 * tail);
}

double predicted_rate_envelope(std::int64_t n, double s, double p, double alpha,
                               const StepSchedule& schedule) {
    if (!(s > 0.0)) throw std::invalid_argument("envelope: s must be positive");
    if (!(p >= 1.0)) throw std::invalid_argument("envelope: p must be >= 1");
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("envelope: alpha must lie in [0,1)");
    }
    if (n < 0) throw std::invalid_argument("envelope: n must be >= 0");
    double sum = 0.0;
    for (std::int64_t i = 1; i <= n; ++i) sum += schedule.value(i);
    const double one_minus = 1.0 - alpha;
    return std::exp(-s * sum / (p * one_minus * one_minus));
}

TimeAverageClass classify_time_average_order(double q) {
    if (!(q > 0.0)) throw std::invalid_argument("classify_time_average_order: q must be > 0");
    TimeAverageClass out;
    out.q = q;
    if (q < 1.0) {
        out.order = TimeAverageOrder::power;
    } else if (q == 1.0) {
        out.order = TimeAverageOrder::log_over_T;
    } else {
        out.order = TimeAverageOrder::one_over_T;
    }
    return out;
}

std::vector<double> time_average_curve(const std::vector<std::int64_t>& n,
                                       const std::vector<double>& series) {
    if (n.size() != series.size()) {
        throw std::invalid_argument("time_average_curve: length mismatch");
    }
    std::vector<double> curve(series.size());
    double weighted = 0.0;
    std::int64_t prev = 0;
    for (std::size_t k = 0; k < series.size(); ++k) {
        if (n[k] <= prev) throw std::invalid_argument("time_average_curve: n must increase");
        weighted += static_cast<double>(n[k] - prev) * series[k];
        curve[k] = weighted / static_cast<double>(n[k]);
        prev = n[k];
    }
    return curve;
}

namespace {

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

OlsFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const double np = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / np;
    const double my = sy / np;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("regression x values are all equal");
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

}  // namespace

RateFit fit_decay_exponent(const std::vector<double>& cum_eps,
                           const std::vector<double>& mean_grad_sq, double burn_in_fraction) {
    if (cum_eps.size() != mean_grad_sq.size()) {
        throw std::invalid_argument("fit_decay_exponent: length mismatch");
    }
    if (!(burn_in_fraction >= 0.0 && burn_in_fraction < 1.0)) {
        throw std::invalid_argument("fit_decay_exponent: burn-in fraction must lie in [0,1)");
    }
    const std::size_t start =
        static_cast<std::size_t>(burn_in_fraction * static_cast<double>(cum_eps.size()));
    if (cum_eps.size() - start < 20) {
        throw std::invalid_argument("fit_decay_exponent: needs >= 20 points after burn-in");
    }
    std::vector<double> x, y;
    x.reserve(cum_eps.size() - start);
    y.reserve(cum_eps.size() - start);
    for (std::size_t i = start; i < cum_eps.size(); ++i) {
        if (!(mean_grad_sq[i] > 0.0)) {
            throw std::invalid_argument(
                "fit_decay_exponent: nonpositive mean in the fit window");
        }
        x.push_back(cum_eps[i]);
        y.push_back(std::log(mean_grad_sq[i]));
    }
    const OlsFit f = ols(x, y);
    RateFit out;
    out.lambda_hat = f.slope;
    out.intercept = f.intercept;
    out.r_squared = f.r_squared;
    out.first_index = static_cast<std::int64_t>(start);
    out.last_index = static_cast<std::int64_t>(cum_eps.size()) - 1;
    out.points = static_cast<std::int64_t>(x.size());
    return out;
}

PlateauResult plateau_check(const std::vector<double>& cumulative, double tail_fraction,
                            double threshold) {
    if (cumulative.size() < 100) throw std::invalid_argument("plateau_check: length must be >= 100");
    if (!(tail_fraction > 0.0 && tail_fraction < 1.0)) {
        throw std::invalid_argument("plateau_check: tail fraction must lie in (0,1)");
    }
    for (std::size_t i = 1; i < cumulative.size(); ++i) {
        if (cumulative[i] < cumulative[i - 1]) {
            throw std::invalid_argument("plateau_check: series must be nondecreasing");
        }
    }
    const std::size_t cut = static_cast<std::size_t>(
        (1.0 - tail_fraction) * static_cast<double>(cumulative.size() - 1));
    const double last = cumulative.back();
    const double ratio = (last - cumulative[cut]) / std::max(last, 1e-12);
    return {ratio < threshold, ratio};
}

double log_log_slope(const std::vector<std::int64_t>& n, const std::vector<double>& y,
                     double burn_in_fraction) {
    if (n.size() != y.size()) throw std::invalid_argument("log_log_slope: length mismatch");
    const std::size_t start =
        static_cast<std::size_t>(burn_in_fraction * static_cast<double>(n.size()));
    std::vector<double> lx, ly;
    for (std::size_t i = start; i < n.size(); ++i) {
        if (!(y[i] > 0.0)) throw std::invalid_argument("log_log_slope: nonpositive value");
        lx.push_back(std::log(static_cast<double>(n[i])));
        ly.push_back(std::log(y[i]));
    }
    if (lx.size() < 2) throw std::invalid_argument("log_log_slope: too few points");
    return ols(lx, ly).slope;
}

}  // namespace sgdlab
