#include "sgdlab/lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sgdlab/rates.hpp"

namespace sgdlab {

namespace {

bool is_momentum(Algorithm a) { return a == Algorithm::msgd || a == Algorithm::shb; }
bool uses_epsilon(Algorithm a) { return a != Algorithm::adagrad_norm && a != Algorithm::adagrad_coord; }
bool is_adagrad(Algorithm a) {
    return a == Algorithm::adagrad_norm || a == Algorithm::adagrad_coord;
}

std::vector<const TrajectoryRecord*> completed_runs(const std::vector<TrajectoryRecord>& records) {
    std::vector<const TrajectoryRecord*> out;
    for (const TrajectoryRecord& r : records) {
        if (r.status.outcome == RunOutcome::completed) out.push_back(&r);
    }
    return out;
}

// Mean over completed runs of a per-run derived series.
template <typename F>
std::vector<double> mean_series(const std::vector<const TrajectoryRecord*>& runs, F&& per_run) {
    if (runs.empty()) return {};
    std::vector<double> first = per_run(*runs.front());
    std::vector<double> acc = std::move(first);
    for (std::size_t r = 1; r < runs.size(); ++r) {
        const std::vector<double> s = per_run(*runs[r]);
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += s[k];
    }
    for (double& x : acc) x /= static_cast<double>(runs.size());
    return acc;
}

LemmaCheck plateau_lemma(const std::string& name, const std::vector<double>& mean_cumulative,
                         const LemmaOptions& opt) {
    LemmaCheck check;
    check.name = name;
    check.applicable = true;
    try {
        const PlateauResult res =
            plateau_check(mean_cumulative, opt.plateau_tail_fraction, opt.plateau_threshold);
        check.pass = res.pass;
        check.statistic = res.tail_increment_ratio;
        check.detail = "tail increment ratio vs threshold " + std::to_string(opt.plateau_threshold);
    } catch (const std::exception& e) {
        check.inconclusive = true;
        check.detail = e.what();
    }
    return check;
}

void mark_inconclusive(LemmaCheck& check, const std::string& why) {
    check.pass = false;
    check.inconclusive = true;
    check.detail = why;
}

}  // namespace

LemmaReport lemma_suite(const std::vector<TrajectoryRecord>& records, Algorithm algorithm,
                        const LemmaOptions& opt) {
    if (records.empty()) throw std::invalid_argument("lemma_suite needs at least one run");
    LemmaReport report;
    report.runs = static_cast<std::int64_t>(records.size());
    for (const TrajectoryRecord& r : records) {
        if (r.status.outcome != RunOutcome::completed) ++report.diverged;
    }
    const std::vector<const TrajectoryRecord*> done = completed_runs(records);
    const bool too_many_diverged =
        static_cast<double>(report.diverged) >
        opt.inconclusive_divergence_fraction * static_cast<double>(report.runs);

    // Bounded mean loss. Evaluated over every run including diverged partial
    // series: a blow-up must register here, not vanish by exclusion.
    {
        LemmaCheck check;
        check.name = "bounded_mean_loss";
        check.applicable = true;
        std::size_t longest = 0;
        for (const TrajectoryRecord& r : records) longest = std::max(longest, r.g.size());
        if (longest == 0) {
            mark_inconclusive(check, "no recorded values");
        } else {
            double max_mean = 0.0;
            for (std::size_t k = 0; k < longest; ++k) {
                double sum = 0.0;
                std::int64_t count = 0;
                for (const TrajectoryRecord& r : records) {
                    if (k < r.g.size()) {
                        sum += r.g[k];
                        ++count;
                    }
                }
                max_mean = std::max(max_mean, sum / static_cast<double>(count));
            }
            double initial = 0.0;
            for (const TrajectoryRecord& r : records) initial += r.g.front();
            initial /= static_cast<double>(records.size());
            const double bound = opt.bounded_mean_factor * (1.0 + initial);
            check.statistic = max_mean / (1.0 + initial);
            check.pass = std::isfinite(max_mean) && max_mean <= bound;
            check.detail = "max mean loss " + std::to_string(max_mean) + " vs bound " +
                           std::to_string(bound);
        }
        report.checks.push_back(std::move(check));
    }

    if (is_momentum(algorithm)) {
        LemmaCheck check = plateau_lemma(
            "momentum_energy_summable",
            mean_series(done, [](const TrajectoryRecord& r) { return r.cum_v_sq; }), opt);
        if (done.empty()) mark_inconclusive(check, "all runs diverged");
        else if (too_many_diverged) mark_inconclusive(check, "divergence fraction above 5%");
        report.checks.push_back(std::move(check));
    }

    if (uses_epsilon(algorithm)) {
        LemmaCheck check = plateau_lemma(
            "step_weighted_grad_summable",
            mean_series(done, [](const TrajectoryRecord& r) { return r.cum_eps_grad_sq; }), opt);
        if (done.empty()) mark_inconclusive(check, "all runs diverged");
        else if (too_many_diverged) mark_inconclusive(check, "divergence fraction above 5%");
        report.checks.push_back(std::move(check));
    }

    if (is_adagrad(algorithm)) {
        {
            LemmaCheck check = plateau_lemma(
                "adagrad_ratio_summable",
                mean_series(done, [](const TrajectoryRecord& r) { return r.cum_adagrad_ratio; }),
                opt);
            if (done.empty()) mark_inconclusive(check, "all runs diverged");
            else if (too_many_diverged) mark_inconclusive(check, "divergence fraction above 5%");
            report.checks.push_back(std::move(check));
        }

        // (g - g*) / S^e stays bounded and does not trend up.
        {
            LemmaCheck check;
            check.name = "loss_accumulator_ratio_bounded";
            check.applicable = true;
            if (done.empty()) {
                mark_inconclusive(check, "all runs diverged");
            } else if (too_many_diverged) {
                mark_inconclusive(check, "divergence fraction above 5%");
            } else {
                const double e = opt.loss_ratio_exponent;
                const double gstar = opt.infimum;
                const std::vector<double> ratio =
                    mean_series(done, [&](const TrajectoryRecord& r) {
                        std::vector<double> out(r.g.size(), 0.0);
                        for (std::size_t k = 0; k < r.g.size(); ++k) {
                            if (r.s_accum[k] > 0.0) {
                                out[k] = (r.g[k] - gstar) / std::pow(r.s_accum[k], e);
                            }
                        }
                        return out;
                    });
                const std::size_t half = ratio.size() / 2;
                double sup_first = 0.0, sup_last = 0.0;
                bool finite = true;
                for (std::size_t k = 0; k < ratio.size(); ++k) {
                    if (!std::isfinite(ratio[k])) finite = false;
                    if (k < half) sup_first = std::max(sup_first, ratio[k]);
                    else sup_last = std::max(sup_last, ratio[k]);
                }
                check.statistic = sup_last;
                check.pass = finite && sup_last <= sup_first + 1e-12;
                check.detail = "sup over last half " + std::to_string(sup_last) +
                               " vs first half " + std::to_string(sup_first);
            }
            report.checks.push_back(std::move(check));
        }

        // |grad g|^2 / S^e0 vanishes: last-tenth max under first-tenth max.
        {
            LemmaCheck check;
            check.name = "grad_accumulator_ratio_vanishes";
            check.applicable = true;
            if (done.empty()) {
                mark_inconclusive(check, "all runs diverged");
            } else if (too_many_diverged) {
                mark_inconclusive(check, "divergence fraction above 5%");
            } else {
                const double e0 = opt.grad_ratio_exponent;
                const std::vector<double> ratio =
                    mean_series(done, [&](const TrajectoryRecord& r) {
                        std::vector<double> out(r.grad_sq.size(), 0.0);
                        for (std::size_t k = 0; k < r.grad_sq.size(); ++k) {
                            if (r.s_accum[k] > 0.0) {
                                out[k] = r.grad_sq[k] / std::pow(r.s_accum[k], e0);
                            }
                        }
                        return out;
                    });
                const std::size_t tenth = std::max<std::size_t>(1, ratio.size() / 10);
                double first_max = 0.0, last_max = 0.0;
                for (std::size_t k = 0; k < tenth; ++k) first_max = std::max(first_max, ratio[k]);
                for (std::size_t k = ratio.size() - tenth; k < ratio.size(); ++k) {
                    last_max = std::max(last_max, ratio[k]);
                }
                check.statistic =
                    first_max > 0.0 ? last_max / first_max
                                    : (last_max > 0.0 ? std::numeric_limits<double>::infinity()
                                                      : 0.0);
                check.pass = last_max < first_max || (first_max == 0.0 && last_max == 0.0);
                check.detail = "last-tenth max " + std::to_string(last_max) +
                               " vs first-tenth max " + std::to_string(first_max);
            }
            report.checks.push_back(std::move(check));
        }
    }

    report.all_applicable_pass = true;
    for (const LemmaCheck& c : report.checks) {
        if (c.applicable && (!c.pass || c.inconclusive)) report.all_applicable_pass = false;
    }
    return report;
}

}  // namespace sgdlab
