#pragma once

#include <cstdint>
#include <vector>

#include "sgdlab/trajectory.hpp"

namespace sgdlab {

struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> q10;
    std::vector<double> q50;
    std::vector<double> q90;
    bool present() const { return !mean.empty(); }
};

// Cross-run statistics over the shared record grid. Diverged runs are
// excluded and counted; building a summary with zero completed runs throws.
struct EnsembleSummary {
    std::vector<std::int64_t> n;
    SeriesStats g;
    SeriesStats grad_sq;
    SeriesStats dist_j;
    SeriesStats v_sq;
    SeriesStats s_accum;
    SeriesStats cum_eps_grad_sq;
    SeriesStats cum_v_sq;
    SeriesStats cum_adagrad_ratio;
    std::vector<double> cum_eps;
    std::int64_t runs = 0;
    std::int64_t completed = 0;
    std::int64_t diverged = 0;
};

// Interpolated order statistic: with R sorted values, quantile p sits at
// rank (R - 1) p, linearly interpolated between neighbors.
double quantile_linear(std::vector<double> values, double p);

EnsembleSummary summarize(const std::vector<TrajectoryRecord>& records);

}  // namespace sgdlab
