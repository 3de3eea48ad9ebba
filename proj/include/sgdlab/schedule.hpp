#pragma once

#include <cstdint>
#include <string>

namespace sgdlab {

enum class ScheduleFamily { constant, power };

// Step-size sequence eps_n. Two families:
//   constant: eps_n = c0
//   power:    eps_n = c0 / (n + n0)^gamma, gamma in (0.5, 1]
// The power-family exponent range keeps sum(eps) divergent and sum(eps^2)
// convergent, which is what the classification below reports.
class StepSchedule {
public:
    static StepSchedule constant(double c0);
    static StepSchedule power(double c0, double gamma, std::int64_t n0 = 0);

    ScheduleFamily family() const { return family_; }
    double c0() const { return c0_; }
    double gamma() const { return gamma_; }
    std::int64_t n0() const { return n0_; }

    // eps_n for n >= 1; always positive and finite.
    double value(std::int64_t n) const;

    // Exact partial sum of eps_1..eps_n.
    double partial_sum(std::int64_t n) const;

    std::string describe() const;

private:
    StepSchedule(ScheduleFamily family, double c0, double gamma, std::int64_t n0);

    ScheduleFamily family_;
    double c0_;
    double gamma_;
    std::int64_t n0_;
};

struct ScheduleValidity {
    bool sum_diverges = false;
    bool sum_sq_converges = false;
    bool monotone = false;
    bool robbins_monro_ok = false;
};

// Analytic classification by family (p-series tests); no numeric summation.
ScheduleValidity schedule_validate(const StepSchedule& s);

}  // namespace sgdlab
