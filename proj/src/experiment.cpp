#include "sgdlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "sgdlab/format.hpp"

namespace sgdlab {

namespace {

bool is_adagrad(Algorithm a) {
    return a == Algorithm::adagrad_norm || a == Algorithm::adagrad_coord;
}

bool is_momentum(Algorithm a) { return a == Algorithm::msgd || a == Algorithm::shb; }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string trajectory_csv(const EnsembleSummary* summary, Algorithm algorithm) {
    std::string out = "n,mean_g,q10_g,q50_g,q90_g,mean_grad_sq,mean_dist_J";
    if (is_momentum(algorithm)) out += ",mean_v_sq";
    if (is_adagrad(algorithm)) out += ",mean_S";
    out += '\n';
    if (summary == nullptr) return out;
    for (std::size_t k = 0; k < summary->n.size(); ++k) {
        out += std::to_string(summary->n[k]);
        out += ',';
        out += fmt17(summary->g.mean[k]);
        out += ',';
        out += fmt17(summary->g.q10[k]);
        out += ',';
        out += fmt17(summary->g.q50[k]);
        out += ',';
        out += fmt17(summary->g.q90[k]);
        out += ',';
        out += fmt17(summary->grad_sq.mean[k]);
        out += ',';
        out += fmt17(summary->dist_j.mean[k]);
        if (is_momentum(algorithm)) {
            out += ',';
            out += fmt17(summary->v_sq.mean[k]);
        }
        if (is_adagrad(algorithm)) {
            out += ',';
            out += fmt17(summary->s_accum.mean[k]);
        }
        out += '\n';
    }
    return out;
}

void write_estimate(JsonWriter& w, const Estimate& e) {
    w.begin_object();
    w.key("value").value(e.value);
    w.key("std_error").value(e.std_error);
    w.key("samples").value(e.samples);
    w.key("region").value(e.region);
    w.end_object();
}

void write_assumption_report(JsonWriter& w, const AssumptionReport& rep) {
    w.begin_object();
    w.key("lipschitz_hat");
    write_estimate(w, rep.lipschitz_hat);
    w.key("m_hat");
    write_estimate(w, rep.m_hat);
    w.key("m_prime_hat");
    write_estimate(w, rep.m_prime_hat);
    w.key("a_hat");
    write_estimate(w, rep.a_hat);
    w.key("s_hat").begin_array();
    for (const ComponentPl& pl : rep.s_hat) {
        w.begin_object();
        w.key("component").value(static_cast<std::int64_t>(pl.component));
        w.key("s_hat").value(pl.s_hat);
        w.key("samples").value(pl.samples);
        w.end_object();
    }
    w.end_array();
    w.key("s_hat_min").value(rep.s_hat_min);
    w.key("schedule").begin_object();
    w.key("sum_diverges").value(rep.schedule.sum_diverges);
    w.key("sum_sq_converges").value(rep.schedule.sum_sq_converges);
    w.key("monotone").value(rep.schedule.monotone);
    w.key("robbins_monro_ok").value(rep.schedule.robbins_monro_ok);
    w.end_object();
    w.key("closed_form").begin_object();
    w.key("M").value(rep.closed_form.M);
    w.key("M_prime").value(rep.closed_form.M_prime);
    w.key("a").value(rep.closed_form.a);
    w.key("closed_form").value(rep.closed_form.closed_form);
    w.key("note").value(rep.closed_form.note);
    w.end_object();
    w.key("thm_momentum_convergence").value(rep.thm_momentum_convergence);
    w.key("thm_momentum_reason").value(rep.thm_momentum_reason);
    w.key("thm_rate_envelope").value(rep.thm_rate_envelope);
    w.key("thm_rate_reason").value(rep.thm_rate_reason);
    w.key("thm_adagrad_convergence").value(rep.thm_adagrad_convergence);
    w.key("thm_adagrad_reason").value(rep.thm_adagrad_reason);
    w.end_object();
}

void write_rate_fit(JsonWriter& w, const RateFit& fit) {
    w.begin_object();
    w.key("lambda_hat").value(fit.lambda_hat);
    w.key("intercept").value(fit.intercept);
    w.key("r_squared").value(fit.r_squared);
    w.key("first_index").value(fit.first_index);
    w.key("last_index").value(fit.last_index);
    w.key("points").value(fit.points);
    w.end_object();
}

bool estimates_finite(const AssumptionReport& rep) {
    if (!std::isfinite(rep.lipschitz_hat.value)) return false;
    if (!std::isfinite(rep.m_hat.value)) return false;
    if (!std::isfinite(rep.m_prime_hat.value)) return false;
    if (!std::isfinite(rep.a_hat.value)) return false;
    if (!std::isfinite(rep.s_hat_min)) return false;
    for (const ComponentPl& pl : rep.s_hat) {
        if (!std::isfinite(pl.s_hat)) return false;
    }
    return true;
}

std::string csv_field(const std::optional<double>& x) { return x ? fmt17(*x) : std::string(); }

}  // namespace

ExperimentConfig apply_overrides(ExperimentConfig cfg, const CliOverrides& ov) {
    if (ov.seed) cfg.base_seed = *ov.seed;
    if (ov.runs) {
        if (*ov.runs < 2) throw ConfigError("runs", "must be at least 2");
        cfg.runs = *ov.runs;
    }
    return cfg;
}

std::vector<TrajectoryRecord> run_many(const ExperimentConfig& cfg) {
    const Objective obj = objective_from_spec(cfg.objective);
    const GradientOracle oracle = oracle_from_spec(cfg.oracle, obj);
    RunInputs inputs;
    inputs.algorithm = cfg.algorithm;
    inputs.hp = cfg.hp;
    inputs.theta1 = cfg.init_theta;
    inputs.v0 = cfg.init_v;
    inputs.horizon = cfg.horizon;
    inputs.stride = cfg.stride;
    std::vector<TrajectoryRecord> records;
    records.reserve(static_cast<std::size_t>(cfg.runs));
    for (std::int64_t i = 0; i < cfg.runs; ++i) {
        RngStream rng(cfg.base_seed, static_cast<std::uint64_t>(i));
        records.push_back(run_trajectory(obj, oracle, inputs, rng));
    }
    return records;
}

EnsembleSummary run_ensemble(const ExperimentConfig& cfg) { return summarize(run_many(cfg)); }

RateFit fit_rate(const EnsembleSummary& summary, double burn_in_fraction) {
    if (summary.cum_eps.empty()) {
        throw std::runtime_error("rate fit requires a step-size schedule");
    }
    return fit_decay_exponent(summary.cum_eps, summary.grad_sq.mean, burn_in_fraction);
}

RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const Objective obj = objective_from_spec(cfg.objective);

    const std::vector<TrajectoryRecord> records = run_many(cfg);
    std::int64_t completed = 0, diverged = 0, degenerate = 0;
    for (const TrajectoryRecord& r : records) {
        switch (r.status.outcome) {
            case RunOutcome::completed: ++completed; break;
            case RunOutcome::diverged: ++diverged; break;
            case RunOutcome::degenerate: ++degenerate; break;
        }
    }

    RunArtifacts artifacts;
    std::optional<EnsembleSummary> summary;
    if (completed > 0) summary = summarize(records);
    if (completed == 0) artifacts.failures.push_back("all runs diverged");

    artifacts.csv_path = (std::filesystem::path(out_dir) / "trajectory.csv").string();
    write_file(artifacts.csv_path, trajectory_csv(summary ? &*summary : nullptr, cfg.algorithm));

    std::optional<LemmaReport> lemmas;
    if (cfg.checks.lemmas) {
        LemmaOptions opt;
        opt.infimum = obj.infimum;
        lemmas = lemma_suite(records, cfg.algorithm, opt);
        for (const LemmaCheck& check : lemmas->checks) {
            if (check.applicable && !check.inconclusive && !check.pass) {
                artifacts.failures.push_back("lemma " + check.name + " failed (statistic=" +
                                             fmt17(check.statistic) + ")");
            }
        }
    }

    std::optional<RateFit> rate;
    if (cfg.checks.rate_fit) {
        if (summary) {
            try {
                rate = fit_rate(*summary, 0.1);
            } catch (const std::exception& e) {
                artifacts.failures.push_back(std::string("rate fit failed: ") + e.what());
            }
        } else {
            artifacts.failures.push_back("rate fit skipped: no completed runs");
        }
    }

    std::optional<AssumptionReport> assumptions;
    if (cfg.checks.assumptions) {
        try {
            assumptions = build_assumption_report(cfg);
            if (!estimates_finite(*assumptions)) {
                artifacts.failures.push_back("assumption estimates not finite");
            }
        } catch (const std::exception& e) {
            artifacts.failures.push_back(std::string("assumptions check failed: ") + e.what());
        }
    }

    JsonWriter w;
    w.begin_object();
    w.key("config").raw(serialize_config(cfg));
    w.key("seed").value_u64(cfg.base_seed);
    w.key("status_counts").begin_object();
    w.key("completed").value(completed);
    w.key("diverged").value(diverged);
    w.key("degenerate").value(degenerate);
    w.end_object();
    w.key("rate_fit");
    if (rate) {
        write_rate_fit(w, *rate);
    } else {
        w.null();
    }
    w.key("lemmas");
    if (lemmas) {
        w.begin_array();
        for (const LemmaCheck& check : lemmas->checks) {
            w.begin_object();
            w.key("name").value(check.name);
            w.key("applicable").value(check.applicable);
            w.key("pass").value(check.pass);
            w.key("inconclusive").value(check.inconclusive);
            w.key("statistic").value(check.statistic);
            w.key("detail").value(check.detail);
            w.end_object();
        }
        w.end_array();
    } else {
        w.null();
    }
    w.key("assumptions");
    if (assumptions) {
        write_assumption_report(w, *assumptions);
    } else {
        w.null();
    }
    w.key("failures").begin_array();
    for (const std::string& f : artifacts.failures) w.value(f);
    w.end_array();
    w.end_object();

    artifacts.json_path = (std::filesystem::path(out_dir) / "summary.json").string();
    write_file(artifacts.json_path, w.str() + "\n");
    artifacts.exit_code = artifacts.failures.empty() ? 0 : 1;
    return artifacts;
}

CompareMetric compare_metric_from_name(const std::string& name) {
    if (name == "decay_exponent") return CompareMetric::decay_exponent;
    if (name == "final_dist_J") return CompareMetric::final_dist_j;
    if (name == "time_average_slope") return CompareMetric::time_average_slope;
    throw std::invalid_argument("unknown compare metric '" + name + "'");
}

std::string compare_metric_name(CompareMetric m) {
    switch (m) {
        case CompareMetric::decay_exponent: return "decay_exponent";
        case CompareMetric::final_dist_j: return "final_dist_J";
        case CompareMetric::time_average_slope: return "time_average_slope";
    }
    return "decay_exponent";
}

CompareResult run_compare(const std::vector<std::string>& config_paths, CompareMetric metric,
                          const std::string& out_dir, const CliOverrides& ov) {
    if (config_paths.size() < 2) {
        throw std::invalid_argument("compare needs at least two configs");
    }
    std::vector<ExperimentConfig> configs;
    for (const std::string& path : config_paths) {
        configs.push_back(apply_overrides(parse_config_file(path), ov));
    }
    for (std::size_t i = 1; i < configs.size(); ++i) {
        const bool same_objective = configs[i].objective.id == configs[0].objective.id &&
                                    configs[i].objective.c == configs[0].objective.c &&
                                    configs[i].objective.dim == configs[0].objective.dim &&
                                    configs[i].objective.centers == configs[0].objective.centers;
        const bool same_oracle = configs[i].oracle.kind == configs[0].oracle.kind &&
                                 configs[i].oracle.sigma == configs[0].oracle.sigma;
        if (!same_objective || !same_oracle) {
            throw std::invalid_argument("compare configs must share the objective and oracle (" +
                                        config_paths[i] + " differs)");
        }
    }

    CompareResult result;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const ExperimentConfig& cfg = configs[i];
        EnsembleSummary summary;
        try {
            summary = run_ensemble(cfg);
        } catch (const std::exception& e) {
            throw std::runtime_error(config_paths[i] + ": " + e.what());
        }
        CompareRow row;
        row.config_path = config_paths[i];
        row.algorithm = cfg.algorithm;
        if (cfg.algorithm == Algorithm::sgd) row.alpha = 0.0;
        if (cfg.algorithm == Algorithm::msgd) row.alpha = cfg.hp.alpha;
        if (cfg.algorithm == Algorithm::shb) {
            const double beta_end = cfg.hp.beta->value(cfg.horizon);
            const double g_end = cfg.hp.gamma_step->value(cfg.horizon);
            const double g_prev =
                cfg.horizon > 1 ? cfg.hp.gamma_step->value(cfg.horizon - 1) : g_end;
            const MappedMomentum mapped = map_shb_to_msgd(g_end, g_prev, beta_end);
            row.mapped_alpha = mapped.alpha;
            row.mapped_eps_c0 = cfg.hp.gamma_step->c0() * (1.0 - cfg.hp.beta->value(cfg.horizon));
        }
        switch (metric) {
            case CompareMetric::decay_exponent:
                row.value = std::abs(fit_rate(summary, 0.1).lambda_hat);
                break;
            case CompareMetric::final_dist_j:
                row.value = summary.dist_j.mean.back();
                break;
            case CompareMetric::time_average_slope:
                row.value =
                    log_log_slope(summary.n, time_average_curve(summary.n, summary.grad_sq.mean),
                                  0.5);
                break;
        }
        result.rows.push_back(std::move(row));
    }

    std::stable_sort(result.rows.begin(), result.rows.end(),
                     [](const CompareRow& a, const CompareRow& b) { return a.value < b.value; });

    std::filesystem::create_directories(out_dir);
    std::string csv = "rank,config,algorithm,alpha,mapped_alpha,mapped_eps_c0,metric,value\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const CompareRow& row = result.rows[i];
        csv += std::to_string(i + 1);
        csv += ',';
        csv += row.config_path;
        csv += ',';
        csv += algorithm_name(row.algorithm);
        csv += ',';
        csv += csv_field(row.alpha);
        csv += ',';
        csv += csv_field(row.mapped_alpha);
        csv += ',';
        csv += csv_field(row.mapped_eps_c0);
        csv += ',';
        csv += compare_metric_name(metric);
        csv += ',';
        csv += fmt17(row.value);
        csv += '\n';
    }
    result.csv_path = (std::filesystem::path(out_dir) / "compare.csv").string();
    write_file(result.csv_path, csv);
    return result;
}

AssumptionReport run_verify_assumptions(const ExperimentConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const AssumptionReport report = build_assumption_report(cfg);
    JsonWriter w;
    w.begin_object();
    w.key("config").raw(serialize_config(cfg));
    w.key("seed").value_u64(cfg.base_seed);
    w.key("assumptions");
    write_assumption_report(w, report);
    w.key("estimates_finite").value(estimates_finite(report));
    w.end_object();
    write_file((std::filesystem::path(out_dir) / "assumptions.json").string(), w.str() + "\n");
    return report;
}

RateFit run_fit_rate(const ExperimentConfig& cfg, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const EnsembleSummary summary = run_ensemble(cfg);
    const RateFit fit = fit_rate(summary, 0.1);
    JsonWriter w;
    w.begin_object();
    w.key("config").raw(serialize_config(cfg));
    w.key("seed").value_u64(cfg.base_seed);
    w.key("rate_fit");
    write_rate_fit(w, fit);
    w.end_object();
    write_file((std::filesystem::path(out_dir) / "rate.json").string(), w.str() + "\n");
    return fit;
}

}  // namespace sgdlab
