#include "sgdlab/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace sgdlab {

StepSchedule::StepSchedule(ScheduleFamily family, double c0, double gamma, std::int64_t n0)
    : family_(family), c0_(c0), gamma_(gamma), n0_(n0) {
    if (!(c0 > 0.0) || !std::isfinite(c0)) {
        throw std::invalid_argument("schedule c0 must be positive and finite");
    }
    if (family == ScheduleFamily::power) {
        if (!(gamma > 0.5) || !(gamma <= 1.0)) {
            throw std::invalid_argument("schedule gamma must lie in (0.5, 1]");
        }
        if (n0 < 0) {
            throw std::invalid_argument("schedule n0 must be nonnegative");
        }
    }
}

StepSchedule StepSchedule::constant(double c0) {
    return StepSchedule(ScheduleFamily::constant, c0, 0.0, 0);
}

StepSchedule StepSchedule::power(double c0, double gamma, std::int64_t n0) {
    return StepSchedule(ScheduleFamily::power, c0, gamma, n0);
}

double StepSchedule::value(std::int64_t n) const {
    if (family_ == ScheduleFamily::constant) return c0_;
    const double base = static_cast<double>(n + n0_);
    if (gamma_ == 1.0) return c0_ / base;
    return c0_ / std::pow(base, gamma_);
}

double StepSchedule::partial_sum(std::int64_t n) const {
    if (family_ == ScheduleFamily::constant) return c0_ * static_cast<double>(n);
    double s = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) s += value(k);
    return s;
}

std::string StepSchedule::describe() const {
    if (family_ == ScheduleFamily::constant) {
        return "constant(c0=" + std::to_string(c0_) + ")";
    }
    return "power(c0=" + std::to_string(c0_) + ", gamma=" + std::to_string(gamma_) +
           ", n0=" + std::to_string(n0_) + ")";
}

ScheduleValidity schedule_validate(const StepSchedule& s) {
    ScheduleValidity v;
    switch (s.family()) {
        case ScheduleFamily::constant:
            v.sum_diverges = true;
            v.sum_sq_converges = false;
            v.monotone = true;
            break;
        case ScheduleFamily::power:
            // gamma <= 1: p-series with p <= 1 diverges; 2*gamma > 1: squares converge.
            v.sum_diverges = true;
            v.sum_sq_converges = true;
            v.monotone = true;
            break;
    }
    v.robbins_monro_ok = v.sum_diverges && v.sum_sq_converges && v.monotone;
    return v;
}

}  // namespace sgdlab
