#include "sgdlab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgdlab {

double quantile_linear(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile p must lie in [0,1]");
    std::sort(values.begin(), values.end());
    const double rank = p * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = rank - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

using SeriesGetter = const std::vector<double>& (*)(const TrajectoryRecord&);

SeriesStats aggregate(const std::vector<const TrajectoryRecord*>& runs, SeriesGetter get) {
    SeriesStats stats;
    if (runs.empty() || get(*runs.front()).empty()) return stats;
    const std::size_t len = get(*runs.front()).size();
    stats.mean.resize(len);
    stats.q10.resize(len);
    stats.q50.resize(len);
    stats.q90.resize(len);
    std::vector<double> column(runs.size());
    for (std::size_t k = 0; k < len; ++k) {
        double sum = 0.0;
        for (std::size_t r = 0; r < runs.size(); ++r) {
            column[r] = get(*runs[r])[k];
            sum += column[r];
        }
        stats.mean[k] = sum / static_cast<double>(runs.size());
        stats.q10[k] = quantile_linear(column, 0.10);
        stats.q50[k] = quantile_linear(column, 0.50);
        stats.q90[k] = quantile_linear(column, 0.90);
    }
    return stats;
}

}  // namespace

EnsembleSummary summarize(const std::vector<TrajectoryRecord>& records) {
    if (records.size() < 2) throw std::invalid_argument("summarize needs >= 2 runs");
    EnsembleSummary out;
    out.runs = static_cast<std::int64_t>(records.size());

    std::vector<const TrajectoryRecord*> completed;
    for (const TrajectoryRecord& r : records) {
        if (r.status.outcome == RunOutcome::completed) {
            completed.push_back(&r);
        } else {
            ++out.diverged;
        }
    }
    out.completed = static_cast<std::int64_t>(completed.size());
    if (completed.empty()) throw std::runtime_error("all runs diverged; no summary");

    const std::vector<std::int64_t>& grid = completed.front()->n;
    for (const TrajectoryRecord* r : completed) {
        if (r->n != grid) throw std::logic_error("completed runs disagree on the record grid");
    }
    out.n = grid;

    out.g = aggregate(completed, [](const TrajectoryRecord& r) -> const std::vector<double>& {
        return r.g;
    });
    out.grad_sq =
        aggregate(completed, [](const TrajectoryRecord& r) -> const std::vector<double>& {
            return r.grad_sq;
        });
    out.dist_j =
        aggregate(completed, [](const TrajectoryRecord& r) -> const std::vector<double>& {
            return r.dist_j;
        });
    out.v_sq = aggregate(completed, [](const TrajectoryRecord& r) -> const std::vector<double>& {
        return r.v_sq;
    });
    out.s_accum =
        aggregate(completed, [](const TrajectoryRecord& r) -> const std::vector<double>& {
            return r.s_accum;
        });
    out.cum_eps_grad_sq =
        aggregate(completed, [](const TrajectoryRecord& r) -> const std::vector<double>& {
            return r.cum_eps_grad_sq;
        });
    out.cum_v_sq =
        aggregate(completed, [](const TrajectoryRecord& r) -> const std::vector<double>& {
            return r.cum_v_sq;
        });
    out.cum_adagrad_ratio =
        aggregate(completed, [](const TrajectoryRecord& r) -> const std::vector<double>& {
            return r.cum_adagrad_ratio;
        });
    out.cum_eps = completed.front()->cum_eps;
    return out;
}

}  // namespace sgdlab
