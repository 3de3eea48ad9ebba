#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgdlab/experiment.hpp"

using namespace sgdlab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json base_json() {
    return json{
        {"objective", {{"id", "quad"}, {"c", 1.0}, {"dim", 1}}},
        {"oracle", {{"kind", "exact"}}},
        {"algorithm", "sgd"},
        {"hyperparams",
         {{"epsilon", {{"family", "power"}, {"c0", 0.5}, {"gamma", 1.0}}}}},
        {"horizon", 200},
        {"runs", 3},
        {"base_seed", 11},
        {"init", {{"theta", {1.0}}}},
    };
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::path("exp_tmp") / name;
    fs::remove_all(dir);
    return dir;
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

}  // namespace

TEST_CASE("run index selects the substream") {
    const ExperimentConfig cfg = parse_config(base_json().dump());
    const std::vector<TrajectoryRecord> records = run_many(cfg);
    REQUIRE(records.size() == 3);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].base_seed == 11);
        CHECK(records[i].substream == i);
    }
    const std::vector<TrajectoryRecord> again = run_many(cfg);
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].g == again[i].g);
        CHECK(records[i].theta_final == again[i].theta_final);
    }
}

TEST_CASE("overrides replace seed and runs, and runs stays validated") {
    ExperimentConfig cfg = parse_config(base_json().dump());
    CliOverrides ov;
    ov.seed = 99;
    ov.runs = 5;
    const ExperimentConfig out = apply_overrides(cfg, ov);
    CHECK(out.base_seed == 99);
    CHECK(out.runs == 5);
    CliOverrides bad;
    bad.runs = 1;
    CHECK_THROWS_AS(apply_overrides(cfg, bad), ConfigError);
}

TEST_CASE("experiment artifacts carry the closed-form trajectory") {
    json j = base_json();
    j["horizon"] = 200;
    j["runs"] = 2;
    const ExperimentConfig cfg = parse_config(j.dump());
    const fs::path dir = fresh_dir("closed_form");
    const RunArtifacts art = run_experiment(cfg, dir.string());
    CHECK(art.exit_code == 0);
    CHECK(art.failures.empty());

    const std::string csv = slurp(art.csv_path);
    CHECK(first_line(csv) == "n,mean_g,q10_g,q50_g,q90_g,mean_grad_sq,mean_dist_J");
    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);
    // The harmonic 0.5/n schedule contracts theta by (1 - 0.5/n) each step;
    // both runs are identical under the exact oracle.
    double theta = 1.0;
    std::int64_t n = 1;
    int data_rows = 0;
    while (std::getline(rows, line)) {
        std::istringstream cells(line);
        std::string cell;
        std::getline(cells, cell, ',');
        CHECK(std::stoll(cell) == n);
        std::getline(cells, cell, ',');
        CHECK(std::stod(cell) == 0.5 * (theta * theta));
        std::getline(cells, cell, ',');
        CHECK(std::stod(cell) == 0.5 * (theta * theta));
        theta = theta - (0.5 / static_cast<double>(n)) * theta;
        ++n;
        ++data_rows;
    }
    CHECK(data_rows == 201);

    const json summary = json::parse(slurp(art.json_path));
    CHECK(summary["status_counts"]["completed"] == 2);
    CHECK(summary["status_counts"]["diverged"] == 0);
    CHECK(summary["seed"] == 11);
    CHECK(summary["config"]["horizon"] == 200);
    CHECK_FALSE(summary["config"].contains("output_dir"));
    CHECK(summary["failures"].empty());
    CHECK(summary["lemmas"].is_array());
    CHECK(summary["rate_fit"].is_object());
}

TEST_CASE("momentum and adagrad add their csv column") {
    json j = base_json();
    j["algorithm"] = "msgd";
    j["hyperparams"]["alpha"] = 0.5;
    j["horizon"] = 50;
    const fs::path d1 = fresh_dir("cols_msgd");
    const RunArtifacts a1 = run_experiment(parse_config(j.dump()), d1.string());
    CHECK(first_line(slurp(a1.csv_path)) ==
          "n,mean_g,q10_g,q50_g,q90_g,mean_grad_sq,mean_dist_J,mean_v_sq");

    json k = base_json();
    k["algorithm"] = "adagrad_norm";
    k["hyperparams"] = {{"alpha0", 0.5}};
    k["horizon"] = 50;
    const fs::path d2 = fresh_dir("cols_ada");
    const RunArtifacts a2 = run_experiment(parse_config(k.dump()), d2.string());
    CHECK(first_line(slurp(a2.csv_path)) ==
          "n,mean_g,q10_g,q50_g,q90_g,mean_grad_sq,mean_dist_J,mean_S");
}

TEST_CASE("library-level reruns are byte-identical") {
    json j = base_json();
    j["oracle"] = {{"kind", "additive_gaussian"}, {"sigma", 0.1}};
    j["runs"] = 4;
    j["checks"] = {{"assumptions", true}};
    const ExperimentConfig cfg = parse_config(j.dump());
    const fs::path d1 = fresh_dir("bytes_a");
    const fs::path d2 = fresh_dir("bytes_b");
    const RunArtifacts a1 = run_experiment(cfg, d1.string());
    const RunArtifacts a2 = run_experiment(cfg, d2.string());
    CHECK(slurp(a1.csv_path) == slurp(a2.csv_path));
    CHECK(slurp(a1.json_path) == slurp(a2.json_path));
}

TEST_CASE("an all-divergent experiment reports failure but still writes artifacts") {
    json j = base_json();
    j["hyperparams"]["epsilon"] = {{"family", "constant"}, {"c0", 3.0}};
    const ExperimentConfig cfg = parse_config(j.dump());
    const fs::path dir = fresh_dir("divergent");
    const RunArtifacts art = run_experiment(cfg, dir.string());
    CHECK(art.exit_code == 1);
    REQUIRE_FALSE(art.failures.empty());
    bool mentions_divergence = false;
    for (const std::string& f : art.failures) {
        if (f.find("diverged") != std::string::npos) mentions_divergence = true;
    }
    CHECK(mentions_divergence);

    const json summary = json::parse(slurp(art.json_path));
    CHECK(summary["status_counts"]["diverged"] == 3);
    CHECK(summary["status_counts"]["completed"] == 0);
    bool bounded_failed = false;
    for (const auto& c : summary["lemmas"]) {
        if (c["name"] == "bounded_mean_loss" && c["applicable"] == true &&
            c["pass"] == false) {
            bounded_failed = true;
        }
    }
    CHECK(bounded_failed);
    const std::string csv = slurp(art.csv_path);
    CHECK(first_line(csv) == "n,mean_g,q10_g,q50_g,q90_g,mean_grad_sq,mean_dist_J");
}

TEST_CASE("rate fitting needs a step-size schedule") {
    json j = base_json();
    j["algorithm"] = "adagrad_norm";
    j["hyperparams"] = {{"alpha0", 0.5}};
    const EnsembleSummary ada = run_ensemble(parse_config(j.dump()));
    CHECK_THROWS_AS(fit_rate(ada), std::runtime_error);

    json k = base_json();
    k["horizon"] = 3000;
    const EnsembleSummary sgd = run_ensemble(parse_config(k.dump()));
    const RateFit fit = fit_rate(sgd);
    CHECK(fit.lambda_hat < -1.5);
    CHECK(fit.lambda_hat > -3.0);
    CHECK(fit.r_squared > 0.9);
}

TEST_CASE("comparison ranks configs by the chosen metric") {
    const fs::path dir = fresh_dir("compare");
    fs::create_directories(dir);
    std::vector<std::string> paths;
    for (double c0 : {0.1, 0.3, 0.5}) {
        json j = base_json();
        j["hyperparams"]["epsilon"] = {{"family", "power"}, {"c0", c0}, {"gamma", 1.0}};
        j["horizon"] = 500;
        const fs::path p = dir / ("c" + std::to_string(c0).substr(0, 3) + ".json");
        std::ofstream(p) << j.dump(2);
        paths.push_back(p.string());
    }
    const CompareResult res =
        run_compare(paths, CompareMetric::final_dist_j, dir.string(), CliOverrides{});
    REQUIRE(res.rows.size() == 3);
    // Bigger harmonic steps contract faster, so the c0 = 0.5 config lands
    // closest to the minimizer and ranks first.
    CHECK(res.rows[0].config_path == paths[2]);
    CHECK(res.rows[2].config_path == paths[0]);
    CHECK(res.rows[0].value <= res.rows[1].value);
    CHECK(res.rows[1].value <= res.rows[2].value);
    REQUIRE(res.rows[0].alpha.has_value());
    CHECK(*res.rows[0].alpha == 0.0);
    const std::string csv = slurp(res.csv_path);
    CHECK(first_line(csv) ==
          "rank,config,algorithm,alpha,mapped_alpha,mapped_eps_c0,metric,value");

    // Equal-value ties keep input order.
    const CompareResult tie = run_compare({paths[0], paths[0]}, CompareMetric::final_dist_j,
                                          (dir / "tie").string(), CliOverrides{});
    CHECK(tie.rows[0].config_path == paths[0]);
    CHECK(tie.rows[0].value == tie.rows[1].value);

    CHECK_THROWS_AS(run_compare({paths[0]}, CompareMetric::final_dist_j, dir.string(),
                                CliOverrides{}),
                    std::invalid_argument);
    json other = base_json();
    other["objective"]["c"] = 2.0;
    const fs::path op = dir / "other.json";
    std::ofstream(op) << other.dump(2);
    CHECK_THROWS_AS(run_compare({paths[0], op.string()}, CompareMetric::final_dist_j,
                                dir.string(), CliOverrides{}),
                    std::invalid_argument);
}

TEST_CASE("metric names round-trip") {
    for (const char* name : {"decay_exponent", "final_dist_J", "time_average_slope"}) {
        CHECK(compare_metric_name(compare_metric_from_name(name)) == name);
    }
    CHECK_THROWS_AS(compare_metric_from_name("speed"), std::invalid_argument);
}

TEST_CASE("assumption and rate artifacts are parseable json") {
    json j = base_json();
    j["oracle"] = {{"kind", "additive_gaussian"}, {"sigma", 0.1}};
    const ExperimentConfig cfg = parse_config(j.dump());
    const fs::path dir = fresh_dir("artifacts");
    const AssumptionReport rep = run_verify_assumptions(cfg, dir.string());
    CHECK(rep.lipschitz_hat.value == 1.0);
    const json aj = json::parse(slurp(dir / "assumptions.json"));
    CHECK(aj["assumptions"]["lipschitz_hat"]["value"] == 1.0);
    CHECK(aj["assumptions"].contains("thm_momentum_convergence"));

    const RateFit fit = run_fit_rate(cfg, dir.string());
    const json rj = json::parse(slurp(dir / "rate.json"));
    CHECK(rj["rate_fit"]["lambda_hat"] == fit.lambda_hat);
    CHECK(rj["rate_fit"].contains("r_squared"));
}
