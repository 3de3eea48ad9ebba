#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sgdlab/experiment.hpp"
#include "sgdlab/format.hpp"

namespace {

using namespace sgdlab;

struct CommonArgs {
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    std::int64_t runs = 0;
    CLI::Option* out_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* runs_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_runs) {
    args.out_opt = cmd->add_option("--out", args.out, "output directory");
    args.seed_opt = cmd->add_option("--seed", args.seed, "override the base seed");
    if (with_runs) {
        args.runs_opt = cmd->add_option("--runs", args.runs, "override the run count");
    }
}

CliOverrides to_overrides(const CommonArgs& args) {
    CliOverrides ov;
    if (args.seed_opt != nullptr && args.seed_opt->count() > 0) ov.seed = args.seed;
    if (args.runs_opt != nullptr && args.runs_opt->count() > 0) ov.runs = args.runs;
    if (args.out_opt != nullptr && args.out_opt->count() > 0) ov.out = args.out;
    return ov;
}

std::string resolve_out_dir(const ExperimentConfig& cfg, const CliOverrides& ov) {
    if (ov.out) return *ov.out;
    if (cfg.output_dir_set) return cfg.output_dir;
    return ".";
}

bool report_estimates_finite(const AssumptionReport& rep) {
    bool ok = std::isfinite(rep.lipschitz_hat.value) && std::isfinite(rep.m_hat.value) &&
              std::isfinite(rep.m_prime_hat.value) && std::isfinite(rep.a_hat.value) &&
              std::isfinite(rep.s_hat_min);
    for (const ComponentPl& pl : rep.s_hat) ok = ok && std::isfinite(pl.s_hat);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic-optimization laboratory"};
    app.require_subcommand(1);

    CommonArgs run_args;
    CLI::App* run_cmd =
        app.add_subcommand("run", "run an experiment; writes trajectory.csv and summary.json");
    run_cmd->add_option("--config", run_args.config, "experiment config (JSON)")->required();
    add_common(run_cmd, run_args, true);

    std::vector<std::string> cmp_configs;
    std::string cmp_metric;
    CommonArgs cmp_args;
    CLI::App* cmp_cmd =
        app.add_subcommand("compare", "rank two or more configs by a convergence metric");
    cmp_cmd->add_option("--config", cmp_configs, "config paths (repeat for each entrant)")
        ->required();
    cmp_cmd->add_option("--metric", cmp_metric,
                        "decay_exponent | final_dist_J | time_average_slope")
        ->required();
    add_common(cmp_cmd, cmp_args, true);

    CommonArgs va_args;
    CLI::App* va_cmd = app.add_subcommand("verify-assumptions",
                                          "estimate smoothness, noise, and local curvature "
                                          "constants; writes assumptions.json");
    va_cmd->add_option("--config", va_args.config, "experiment config (JSON)")->required();
    add_common(va_cmd, va_args, false);

    CommonArgs fr_args;
    CLI::App* fr_cmd =
        app.add_subcommand("fit-rate", "fit the gradient-decay exponent; writes rate.json");
    fr_cmd->add_option("--config", fr_args.config, "experiment config (JSON)")->required();
    add_common(fr_cmd, fr_args, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const CliOverrides ov = to_overrides(run_args);
            const ExperimentConfig cfg =
                apply_overrides(parse_config_file(run_args.config), ov);
            const RunArtifacts artifacts = run_experiment(cfg, resolve_out_dir(cfg, ov));
            std::cout << "wrote " << artifacts.csv_path << "\n";
            std::cout << "wrote " << artifacts.json_path << "\n";
            for (const std::string& f : artifacts.failures) {
                std::cout << "FAILED: " << f << "\n";
            }
            std::cout << (artifacts.failures.empty() ? "all requested checks passed"
                                                     : "some checks failed")
                      << "\n";
            return artifacts.exit_code;
        }
        if (cmp_cmd->parsed()) {
            const CliOverrides ov = to_overrides(cmp_args);
            const CompareMetric metric = compare_metric_from_name(cmp_metric);
            const std::string out_dir = ov.out ? *ov.out : ".";
            const CompareResult result = run_compare(cmp_configs, metric, out_dir, ov);
            std::cout << "wrote " << result.csv_path << "\n";
            for (std::size_t i = 0; i < result.rows.size(); ++i) {
                std::cout << (i + 1) << ". " << result.rows[i].config_path << "  "
                          << compare_metric_name(metric) << "=" << fmt17(result.rows[i].value)
                          << "\n";
            }
            return 0;
        }
        if (va_cmd->parsed()) {
            const CliOverrides ov = to_overrides(va_args);
            const ExperimentConfig cfg =
                apply_overrides(parse_config_file(va_args.config), ov);
            const AssumptionReport rep =
                run_verify_assumptions(cfg, resolve_out_dir(cfg, ov));
            std::cout << "lipschitz_hat=" << fmt17(rep.lipschitz_hat.value) << "\n";
            std::cout << "m_hat=" << fmt17(rep.m_hat.value) << "\n";
            std::cout << "m_prime_hat=" << fmt17(rep.m_prime_hat.value) << "\n";
            std::cout << "a_hat=" << fmt17(rep.a_hat.value) << "\n";
            std::cout << "s_hat_min=" << fmt17(rep.s_hat_min) << "\n";
            std::cout << "thm_momentum_convergence="
                      << (rep.thm_momentum_convergence ? "yes" : "no") << " ("
                      << rep.thm_momentum_reason << ")\n";
            std::cout << "thm_rate_envelope=" << (rep.thm_rate_envelope ? "yes" : "no") << " ("
                      << rep.thm_rate_reason << ")\n";
            std::cout << "thm_adagrad_convergence="
                      << (rep.thm_adagrad_convergence ? "yes" : "no") << " ("
                      << rep.thm_adagrad_reason << ")\n";
            return report_estimates_finite(rep) ? 0 : 1;
        }
        if (fr_cmd->parsed()) {
            const CliOverrides ov = to_overrides(fr_args);
            const ExperimentConfig cfg =
                apply_overrides(parse_config_file(fr_args.config), ov);
            const RateFit fit = run_fit_rate(cfg, resolve_out_dir(cfg, ov));
            std::cout << "lambda_hat=" << fmt17(fit.lambda_hat) << "\n";
            std::cout << "intercept=" << fmt17(fit.intercept) << "\n";
            std::cout << "r_squared=" << fmt17(fit.r_squared) << "\n";
            std::cout << "points=" << fit.points << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
