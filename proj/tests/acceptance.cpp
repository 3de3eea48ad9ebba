// End-to-end acceptance suite. Each criterion prints one [PASS]/[FAIL] line;
// the process exits nonzero if any criterion fails.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sgdlab/experiment.hpp"

using namespace sgdlab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int id, const std::string& label, bool pass, const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", id, label.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++g_failures;
}

double median(std::vector<double> v) {
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + m, v.end());
    double hi = v[m];
    if (v.size() % 2 == 0) {
        const double lo = *std::max_element(v.begin(), v.begin() + m);
        return 0.5 * (lo + hi);
    }
    return hi;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig sin2_msgd_config() {
    ExperimentConfig cfg;
    cfg.objective.id = "sin2";
    cfg.oracle.kind = OracleKind::additive_gaussian;
    cfg.oracle.sigma = 0.1;
    cfg.algorithm = Algorithm::msgd;
    cfg.hp.alpha = 0.9;
    cfg.hp.epsilon = StepSchedule::power(0.5, 1.0);
    cfg.horizon = 100000;
    cfg.runs = 200;
    cfg.stride = 10;
    cfg.base_seed = 20240;
    cfg.init_theta = {0.8};
    return cfg;
}

ExperimentConfig sin2_adagrad_config() {
    ExperimentConfig cfg = sin2_msgd_config();
    cfg.algorithm = Algorithm::adagrad_norm;
    cfg.hp = HyperParams{};
    cfg.hp.alpha0 = 0.5;
    cfg.base_seed = 20241;
    return cfg;
}

// Median across runs of a per-record series, restricted to record indices
// with n >= n_min, then averaged over four consecutive blocks.
std::vector<double> block_means_of_median(const std::vector<TrajectoryRecord>& records,
                                          std::int64_t n_min) {
    const std::vector<std::int64_t>& grid = records.front().n;
    std::vector<double> med;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid[k] < n_min) continue;
        std::vector<double> col;
        col.reserve(records.size());
        for (const TrajectoryRecord& r : records) col.push_back(r.dist_j[k]);
        med.push_back(median(std::move(col)));
    }
    std::vector<double> blocks(4, 0.0);
    const std::size_t per = med.size() / 4;
    for (std::size_t b = 0; b < 4; ++b) {
        double s = 0.0;
        for (std::size_t k = b * per; k < (b + 1) * per; ++k) s += med[k];
        blocks[b] = s / static_cast<double>(per);
    }
    return blocks;
}

bool lemmas_pass(const LemmaReport& rep, const std::vector<std::string>& names,
                 std::string& why) {
    bool all = true;
    for (const std::string& want : names) {
        bool found = false;
        for (const LemmaCheck& c : rep.checks) {
            if (c.name != want) continue;
            found = true;
            if (!c.applicable || c.inconclusive || !c.pass) {
                std::ostringstream oss;
                oss << want << " did not pass (statistic " << c.statistic << "; " << c.detail
                    << "); ";
                why += oss.str();
                all = false;
            }
        }
        if (!found) {
            why += want + " missing; ";
            all = false;
        }
    }
    return all;
}

std::string cli_path() { return LAB_BINARY_PATH; }

int run_cli(const std::string& args) {
    const std::string cmd = "\"" + cli_path() + "\" " + args + " > acceptance_tmp/cli_out.txt 2>&1";
    const int raw = std::system(cmd.c_str());
    return (raw != -1 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void criterion_1_and_7_part(bool& c7_msgd, std::string& c7_detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = sin2_msgd_config();
    const std::vector<TrajectoryRecord> records = run_many(cfg);
    const double elapsed = seconds_since(t0);

    int close = 0, completed = 0;
    for (const TrajectoryRecord& r : records) {
        if (r.status.outcome != RunOutcome::completed) continue;
        ++completed;
        if (r.dist_j.back() < 0.05) ++close;
    }
    const bool all_completed = completed == static_cast<int>(records.size());
    const double frac = static_cast<double>(close) / static_cast<double>(records.size());

    bool monotone = all_completed;
    std::vector<double> blocks;
    if (all_completed) {
        blocks = block_means_of_median(records, cfg.horizon / 10);
        for (std::size_t b = 1; b < blocks.size(); ++b) {
            if (blocks[b] > blocks[b - 1]) monotone = false;
        }
    }

    std::ostringstream detail;
    detail << "final d(theta,J) < 0.05 in " << 100.0 * frac << "% of " << records.size()
           << " runs; last-decade median blocks";
    for (double b : blocks) detail << " " << b;
    detail << "; " << elapsed << " s";
    report(1, "momentum runs settle on the sine valleys", frac >= 0.95 && monotone &&
           all_completed && elapsed < 60.0, detail.str());

    const LemmaReport rep = lemma_suite(records, Algorithm::msgd);
    c7_msgd = lemmas_pass(rep,
                          {"bounded_mean_loss", "momentum_energy_summable",
                           "step_weighted_grad_summable"},
                          c7_detail);
}

void criterion_2() {
    struct Setup {
        const Objective* obj;
        Vec theta1;
        double c0;
    };
    const std::vector<Objective> objs = catalog();
    std::vector<Setup> setups = {
        {&objs[0], {1.0}, 0.5},  {&objs[1], {0.8}, 0.5}, {&objs[2], {0.8}, 0.5},
        {&objs[3], {2.5}, 0.05}, {&objs[4], {0.8}, 0.5},
    };
    bool all_equal = true;
    std::string bad;
    for (const Setup& s : setups) {
        const GradientOracle oracle = make_gaussian_oracle(*s.obj, 0.1);
        for (std::uint64_t run = 0; run < 2; ++run) {
            RunInputs sgd_in;
            sgd_in.algorithm = Algorithm::sgd;
            sgd_in.hp.epsilon = StepSchedule::power(s.c0, 1.0);
            sgd_in.theta1 = s.theta1;
            sgd_in.horizon = 10000;
            RunInputs msgd_in = sgd_in;
            msgd_in.algorithm = Algorithm::msgd;
            msgd_in.hp.alpha = 0.0;
            RngStream ra(901, run), rb(901, run);
            const TrajectoryRecord a = run_trajectory(*s.obj, oracle, sgd_in, ra);
            const TrajectoryRecord b = run_trajectory(*s.obj, oracle, msgd_in, rb);
            const bool same = a.n == b.n && a.g == b.g && a.grad_sq == b.grad_sq &&
                              a.dist_j == b.dist_j && a.cum_eps_grad_sq == b.cum_eps_grad_sq &&
                              a.theta_final == b.theta_final &&
                              a.status.outcome == b.status.outcome;
            if (!same) {
                all_equal = false;
                bad += s.obj->id + " ";
            }
        }
    }
    report(2, "zero-momentum msgd is bit-identical to sgd on the whole catalog", all_equal,
           all_equal ? "10000 steps, 2 seeds per objective" : "mismatch on: " + bad);
}

void criterion_3() {
    const Objective q = make_quad(1.0, 1);
    const GradientOracle oracle = make_gaussian_oracle(q, 0.01);
    const std::int64_t n_steps = 10000;
    const double beta = 0.9;
    const StepSchedule gamma = StepSchedule::power(0.5, 1.0);

    RngStream shb_rng(777, 0), msgd_rng(777, 0);
    ShbState shb{{0.5}, {0.0}, 1};
    MsgdState msgd{{0.5}, {0.0}, 1};
    double gamma_prev = gamma.value(1);
    double max_dev_theta = 0.0, max_dev_w = 0.0;
    for (std::int64_t t = 1; t <= n_steps; ++t) {
        const double gamma_t = gamma.value(t);
        const Vec gs = sample_gradient(oracle, shb.theta, shb_rng);
        const Vec gm = sample_gradient(oracle, msgd.theta, msgd_rng);
        shb = shb_step(shb, gs, beta, gamma_t);
        const MappedMomentum m = map_shb_to_msgd(gamma_t, gamma_prev, beta);
        msgd = msgd_step(msgd, gm, m.alpha, m.eps);
        gamma_prev = gamma_t;

        const double w = gamma_t * shb.v[0];
        max_dev_theta = std::max(max_dev_theta,
                                 std::abs(shb.theta[0] - msgd.theta[0]) /
                                     std::max(std::abs(shb.theta[0]), 1e-300));
        max_dev_w = std::max(max_dev_w,
                             std::abs(w - msgd.v[0]) / std::max(std::abs(w), 1e-300));
    }
    std::ostringstream detail;
    detail << "max rel dev: theta " << max_dev_theta << ", gamma*v " << max_dev_w;
    report(3, "heavy ball equals momentum sgd under the coefficient mapping",
           max_dev_theta < 1e-9 && max_dev_w < 1e-9, detail.str());
}

void criterion_4() {
    fs::create_directories("acceptance_tmp/c4");
    std::vector<std::string> paths;
    for (double alpha : {0.0, 0.5, 0.9}) {
        std::ostringstream cfg;
        cfg << "{\n"
            << "  \"objective\": {\"id\": \"finite_sum_quad\", \"centers\": [[-1.0], [1.0]]},\n"
            << "  \"oracle\": {\"kind\": \"finite_sum_uniform\"},\n"
            << "  \"algorithm\": \"msgd\",\n"
            << "  \"hyperparams\": {\"alpha\": " << alpha
            << ", \"epsilon\": {\"family\": \"power\", \"c0\": 0.5, \"gamma\": 1.0}},\n"
            << "  \"horizon\": 100000,\n  \"runs\": 200,\n  \"base_seed\": 1234,\n"
            << "  \"init\": {\"theta\": [0.8]},\n"
            << "  \"checks\": {\"lemmas\": false}\n"
            << "}\n";
        const std::string path =
            "acceptance_tmp/c4/alpha_" + std::to_string(alpha).substr(0, 3) + ".json";
        std::ofstream(path) << cfg.str();
        paths.push_back(path);
    }
    const CompareResult res =
        run_compare(paths, CompareMetric::decay_exponent, "acceptance_tmp/c4", CliOverrides{});
    double v0 = 0.0, v5 = 0.0, v9 = 0.0;
    for (const CompareRow& row : res.rows) {
        if (!row.alpha.has_value()) continue;
        if (*row.alpha == 0.0) v0 = row.value;
        if (*row.alpha == 0.5) v5 = row.value;
        if (*row.alpha == 0.9) v9 = row.value;
    }
    const bool headline = v9 >= v0 - 0.05;
    // Nondecreasing in alpha up to fit noise: no later value may sit more
    // than 0.05 below an earlier one.
    const bool ordered = v5 >= v0 - 0.05 && v9 >= v5 - 0.05 && headline;
    std::ostringstream detail;
    detail << "|lambda|: alpha 0 -> " << v0 << ", 0.5 -> " << v5 << ", 0.9 -> " << v9;
    report(4, "fitted decay is at least as fast with momentum", headline && ordered,
           detail.str());
}

void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::int64_t T = 1000000;
    std::vector<std::int64_t> n(T);
    for (std::int64_t k = 0; k < T; ++k) n[k] = k + 1;
    bool ok = true;
    std::ostringstream detail;
    const double expected[] = {-0.3, -1.0, -1.0};
    const TimeAverageOrder orders[] = {TimeAverageOrder::power, TimeAverageOrder::log_over_T,
                                       TimeAverageOrder::one_over_T};
    const double qs[] = {0.3, 1.0, 2.0};
    for (int i = 0; i < 3; ++i) {
        std::vector<double> y(T);
        for (std::int64_t k = 0; k < T; ++k) {
            y[k] = std::pow(static_cast<double>(k + 1), -qs[i]);
        }
        const std::vector<double> avg = time_average_curve(n, y);
        const double slope = log_log_slope(n, avg, 0.5);
        const TimeAverageOrder order = classify_time_average_order(qs[i]).order;
        if (std::abs(slope - expected[i]) > 0.1 || order != orders[i]) ok = false;
        detail << "q=" << qs[i] << " slope " << slope << "; ";
    }
    const double elapsed = seconds_since(t0);
    detail << elapsed << " s";
    report(5, "time-average slopes match the predicted trichotomy", ok && elapsed < 5.0,
           detail.str());
}

void criterion_6_and_7_part(bool& c7_ada, std::string& c7_detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = sin2_adagrad_config();
    const std::vector<TrajectoryRecord> records = run_many(cfg);
    const double elapsed = seconds_since(t0);

    std::vector<double> final_grad_sq, final_dist;
    bool s_monotone = true;
    bool all_completed = true;
    for (const TrajectoryRecord& r : records) {
        if (r.status.outcome != RunOutcome::completed) all_completed = false;
        final_grad_sq.push_back(r.grad_sq.back());
        final_dist.push_back(r.dist_j.back());
        for (std::size_t k = 1; k < r.s_accum.size(); ++k) {
            if (r.s_accum[k] < r.s_accum[k - 1]) s_monotone = false;
        }
    }
    const double med_grad = std::sqrt(median(final_grad_sq));
    const double med_dist = median(final_dist);
    std::ostringstream detail;
    detail << "median |grad| " << med_grad << ", median d " << med_dist << ", " << elapsed
           << " s";
    report(6, "adagrad settles on the sine valleys with a monotone accumulator",
           med_grad < 0.05 && med_dist < 0.1 && s_monotone && all_completed && elapsed < 60.0,
           detail.str());

    const LemmaReport rep = lemma_suite(records, Algorithm::adagrad_norm);
    c7_ada = lemmas_pass(rep,
                         {"adagrad_ratio_summable", "loss_accumulator_ratio_bounded",
                          "grad_accumulator_ratio_vanishes"},
                         c7_detail);
}

void criterion_7_finish(bool c7_msgd, bool c7_ada, std::string detail) {
    ExperimentConfig cfg;
    cfg.objective.id = "quad";
    cfg.objective.c = 1.0;
    cfg.objective.dim = 1;
    cfg.oracle.kind = OracleKind::exact;
    cfg.algorithm = Algorithm::sgd;
    cfg.hp.epsilon = StepSchedule::constant(3.0);
    cfg.horizon = 1000;
    cfg.runs = 10;
    cfg.base_seed = 5;
    cfg.init_theta = {1.0};
    const LemmaReport rep = lemma_suite(run_many(cfg), Algorithm::sgd);
    bool divergent_flagged = false;
    for (const LemmaCheck& c : rep.checks) {
        if (c.name == "bounded_mean_loss" && c.applicable && !c.inconclusive && !c.pass) {
            divergent_flagged = true;
        }
    }
    if (!divergent_flagged) detail += "divergent config not flagged by bounded_mean_loss; ";
    report(7, "lemma checks pass on healthy runs and flag the divergent one",
           c7_msgd && c7_ada && divergent_flagged, detail);
}

void criterion_8() {
    bool ok = true;
    std::ostringstream detail;

    RngStream r_quad2(31, 0);
    const double c_quad2 = estimate_lipschitz(make_quad(2.0, 1), -10.0, 10.0, 4096, r_quad2);
    if (c_quad2 != 2.0) ok = false;
    detail << "c(quad(2))=" << c_quad2 << "; ";

    RngStream r_squad(32, 0);
    const double s_quad1 = estimate_local_pl_s(make_quad(1.0, 1), 0, 0.1, 2000, r_squad);
    if (std::abs(s_quad1 - 2.0) > 1e-3) ok = false;
    detail << "s(quad(1))=" << s_quad1 << "; ";

    RngStream r_sin(33, 0);
    const double s_sin2 = estimate_local_pl_s(make_sin2(), 0, 0.1, 2000, r_sin);
    if (!(s_sin2 >= 3.8 && s_sin2 <= 4.0)) ok = false;
    detail << "s(sin2)=" << s_sin2 << "; ";

    int idx = 0;
    for (const Objective& obj : catalog()) {
        RngStream rc(34, static_cast<std::uint64_t>(idx));
        const double c_hat = estimate_lipschitz(obj, obj.stationary.window_lo,
                                                obj.stationary.window_hi, 20000, rc);
        double s_min = 1e300;
        for (std::size_t comp = 0; comp < obj.stationary.components.size(); ++comp) {
            RngStream rs(35, static_cast<std::uint64_t>(100 * idx + comp));
            s_min = std::min(s_min, estimate_local_pl_s(obj, static_cast<int>(comp), 0.1,
                                                        2000, rs));
        }
        if (!(s_min <= 2.0 * c_hat + 1e-3)) {
            ok = false;
            detail << obj.id << " violates s<=2c (s=" << s_min << ", c=" << c_hat << "); ";
        }
        ++idx;
    }

    const Objective q = make_quad(1.0, 1);
    RngStream r_fit(36, 0);
    const MprimeFit fit = estimate_Mprime_a_region(make_gaussian_oracle(q, 0.5), q, -1.0, 1.0,
                                                   50, 20000, r_fit);
    if (std::abs(fit.m_prime.value - 1.0) > 0.05) ok = false;
    if (std::abs(fit.a.value - 0.25) > 0.025) ok = false;
    detail << "M'=" << fit.m_prime.value << ", a=" << fit.a.value;

    report(8, "constant estimators hit their closed-form targets", ok, detail.str());
}

void criterion_9() {
    const StepSchedule inv_k = StepSchedule::power(1.0, 1.0);
    const double p = compute_p(1.0, inv_k);
    double partial = 0.0;
    for (std::int64_t k = 10000000; k >= 1; --k) {
        const double e = 1.0 / static_cast<double>(k);
        partial += e * e;
    }
    const double brute = std::exp(partial);
    const double rel = std::abs(p - brute) / p;
    std::ostringstream detail;
    detail << "p=" << p << ", brute exp(sum to 1e7)=" << brute << ", rel diff " << rel;
    report(9, "closed-form noise inflation matches brute-force summation", rel < 1e-6,
           detail.str());
}

void criterion_10() {
    fs::create_directories("acceptance_tmp");
    std::ofstream("acceptance_tmp/repro.json")
        << "{\n"
        << "  \"objective\": {\"id\": \"sin2\"},\n"
        << "  \"oracle\": {\"kind\": \"additive_gaussian\", \"sigma\": 0.1},\n"
        << "  \"algorithm\": \"msgd\",\n"
        << "  \"hyperparams\": {\"alpha\": 0.9, \"epsilon\": {\"family\": \"power\", "
           "\"c0\": 0.5, \"gamma\": 1.0}},\n"
        << "  \"horizon\": 5000,\n  \"runs\": 8,\n  \"base_seed\": 31415,\n"
        << "  \"init\": {\"theta\": [0.8]},\n"
        << "  \"checks\": {\"assumptions\": true}\n"
        << "}\n";
    const int e1 = run_cli("run --config acceptance_tmp/repro.json --out acceptance_tmp/r1");
    const int e2 = run_cli("run --config acceptance_tmp/repro.json --out acceptance_tmp/r2");
    const bool same_csv = slurp("acceptance_tmp/r1/trajectory.csv") ==
                          slurp("acceptance_tmp/r2/trajectory.csv") &&
                          !slurp("acceptance_tmp/r1/trajectory.csv").empty();
    const bool same_json = slurp("acceptance_tmp/r1/summary.json") ==
                           slurp("acceptance_tmp/r2/summary.json") &&
                           !slurp("acceptance_tmp/r1/summary.json").empty();
    std::ostringstream detail;
    detail << "exit codes " << e1 << "/" << e2 << ", csv "
           << (same_csv ? "identical" : "DIFFER") << ", json "
           << (same_json ? "identical" : "DIFFER");
    report(10, "identical config and seed reproduce byte-identical artifacts",
           e1 == 0 && e2 == 0 && same_csv && same_json, detail.str());
}

}  // namespace

int main() {
    fs::create_directories("acceptance_tmp");
    bool c7_msgd = false, c7_ada = false;
    std::string c7_detail;
    criterion_1_and_7_part(c7_msgd, c7_detail);
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6_and_7_part(c7_ada, c7_detail);
    criterion_7_finish(c7_msgd, c7_ada, c7_detail);
    criterion_8();
    criterion_9();
    criterion_10();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 10 criteria passed\n");
    return 0;
}
