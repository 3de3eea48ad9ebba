#include "sgdlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "sgdlab/format.hpp"

namespace sgdlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& message) {
    throw ConfigError(key, message);
}

void check_keys(const json& j, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        const bool known =
            std::any_of(allowed.begin(), allowed.end(),
                        [&](const char* k) { return item.key() == k; });
        if (!known) {
            fail(prefix.empty() ? item.key() : prefix + "." + item.key(), "unknown key");
        }
    }
}

const json& member(const json& j, const std::string& prefix, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) {
        fail(prefix.empty() ? name : prefix + "." + name, "missing required key");
    }
    return *it;
}

double get_double(const json& v, const std::string& key) {
    if (!v.is_number()) fail(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "expected a finite number");
    return x;
}

std::int64_t get_int(const json& v, const std::string& key) {
    if (v.is_number_unsigned()) {
        const std::uint64_t u = v.get<std::uint64_t>();
        if (u > 9223372036854775807ULL) fail(key, "integer out of range");
        return static_cast<std::int64_t>(u);
    }
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (std::isfinite(x) && std::floor(x) == x && std::abs(x) < 9.0e15) {
            return static_cast<std::int64_t>(x);
        }
    }
    fail(key, "expected an integer");
}

std::uint64_t get_u64(const json& v, const std::string& key) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const std::int64_t x = v.get<std::int64_t>();
        if (x < 0) fail(key, "expected a nonnegative integer");
        return static_cast<std::uint64_t>(x);
    }
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (std::isfinite(x) && std::floor(x) == x && x >= 0.0 && x < 9.0e15) {
            return static_cast<std::uint64_t>(x);
        }
    }
    fail(key, "expected a nonnegative integer");
}

bool get_bool(const json& v, const std::string& key) {
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
}

std::string get_string(const json& v, const std::string& key) {
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
}

Vec get_vec(const json& v, const std::string& key) {
    if (!v.is_array() || v.empty()) fail(key, "expected a nonempty array of numbers");
    Vec out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(get_double(v[i], key + "[" + std::to_string(i) + "]"));
    }
    return out;
}

StepSchedule parse_schedule(const json& j, const std::string& prefix) {
    if (!j.is_object()) fail(prefix, "expected a schedule object");
    check_keys(j, prefix, {"family", "c0", "gamma", "n0"});
    const std::string family = get_string(member(j, prefix, "family"), prefix + ".family");
    const double c0 = get_double(member(j, prefix, "c0"), prefix + ".c0");
    if (!(c0 > 0.0)) fail(prefix + ".c0", "must be positive");
    if (family == "constant") {
        if (j.contains("gamma")) fail(prefix + ".gamma", "not used by a constant schedule");
        if (j.contains("n0")) fail(prefix + ".n0", "not used by a constant schedule");
        return StepSchedule::constant(c0);
    }
    if (family == "power") {
        const double gamma = get_double(member(j, prefix, "gamma"), prefix + ".gamma");
        if (!(gamma > 0.5 && gamma <= 1.0)) fail(prefix + ".gamma", "must lie in (0.5, 1]");
        std::int64_t n0 = 0;
        if (j.contains("n0")) {
            n0 = get_int(j.at("n0"), prefix + ".n0");
            if (n0 < 0) fail(prefix + ".n0", "must be nonnegative");
        }
        return StepSchedule::power(c0, gamma, n0);
    }
    fail(prefix + ".family", "unknown schedule family '" + family + "'");
}

Algorithm algorithm_from_name(const std::string& name, const std::string& key) {
    if (name == "sgd") return Algorithm::sgd;
    if (name == "msgd") return Algorithm::msgd;
    if (name == "shb") return Algorithm::shb;
    if (name == "adagrad_norm") return Algorithm::adagrad_norm;
    if (name == "adagrad_coord") return Algorithm::adagrad_coord;
    fail(key, "unknown algorithm '" + name + "'");
}

void write_schedule(JsonWriter& w, const StepSchedule& s) {
    w.begin_object();
    w.key("family").value(s.family() == ScheduleFamily::constant ? "constant" : "power");
    w.key("c0").value(s.c0());
    if (s.family() == ScheduleFamily::power) {
        w.key("gamma").value(s.gamma());
        w.key("n0").value(static_cast<std::int64_t>(s.n0()));
    }
    w.end_object();
}

}  // namespace

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::sgd: return "sgd";
        case Algorithm::msgd: return "msgd";
        case Algorithm::shb: return "shb";
        case Algorithm::adagrad_norm: return "adagrad_norm";
        case Algorithm::adagrad_coord: return "adagrad_coord";
    }
    return "sgd";
}

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        fail("(document)", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("(document)", "top level must be a JSON object");
    check_keys(j, "", {"objective", "oracle", "algorithm", "hyperparams", "horizon", "runs",
                       "stride", "base_seed", "init", "output_dir", "checks"});

    ExperimentConfig cfg;

    {
        const json& jo = member(j, "", "objective");
        if (!jo.is_object()) fail("objective", "expected an object");
        check_keys(jo, "objective", {"id", "c", "dim", "centers"});
        cfg.objective.id = get_string(member(jo, "objective", "id"), "objective.id");
        const bool is_quad = cfg.objective.id == "quad";
        const bool is_fsq = cfg.objective.id == "finite_sum_quad";
        if (cfg.objective.id != "sin2" && cfg.objective.id != "cos2" &&
            cfg.objective.id != "quartic" && !is_quad && !is_fsq) {
            fail("objective.id", "unknown objective '" + cfg.objective.id + "'");
        }
        if (jo.contains("c")) {
            if (!is_quad) fail("objective.c", "only the quad objective takes c");
            cfg.objective.c = get_double(jo.at("c"), "objective.c");
            if (!(cfg.objective.c > 0.0)) fail("objective.c", "must be positive");
        }
        if (jo.contains("dim")) {
            if (!is_quad) fail("objective.dim", "only the quad objective takes dim");
            const std::int64_t d = get_int(jo.at("dim"), "objective.dim");
            if (d < 1) fail("objective.dim", "must be at least 1");
            cfg.objective.dim = static_cast<int>(d);
        }
        if (is_fsq) {
            const json& jc = member(jo, "objective", "centers");
            if (!jc.is_array() || jc.empty()) {
                fail("objective.centers", "expected a nonempty array of points");
            }
            for (std::size_t i = 0; i < jc.size(); ++i) {
                const std::string key = "objective.centers[" + std::to_string(i) + "]";
                Vec center = get_vec(jc[i], key);
                if (!cfg.objective.centers.empty() &&
                    center.size() != cfg.objective.centers.front().size()) {
                    fail(key, "all centers must share one dimension");
                }
                cfg.objective.centers.push_back(std::move(center));
            }
            cfg.objective.dim = static_cast<int>(cfg.objective.centers.front().size());
        } else if (jo.contains("centers")) {
            fail("objective.centers", "only the finite_sum_quad objective takes centers");
        }
        if (!is_quad && !is_fsq) cfg.objective.dim = 1;
    }

    {
        const json& jo = member(j, "", "oracle");
        if (!jo.is_object()) fail("oracle", "expected an object");
        check_keys(jo, "oracle", {"kind", "sigma"});
        const std::string kind = get_string(member(jo, "oracle", "kind"), "oracle.kind");
        if (kind == "exact") {
            cfg.oracle.kind = OracleKind::exact;
        } else if (kind == "additive_gaussian") {
            cfg.oracle.kind = OracleKind::additive_gaussian;
        } else if (kind == "finite_sum_uniform") {
            cfg.oracle.kind = OracleKind::finite_sum_uniform;
        } else {
            fail("oracle.kind", "unknown oracle kind '" + kind + "'");
        }
        if (cfg.oracle.kind == OracleKind::additive_gaussian) {
            cfg.oracle.sigma = get_double(member(jo, "oracle", "sigma"), "oracle.sigma");
            if (!(cfg.oracle.sigma > 0.0)) fail("oracle.sigma", "must be positive");
        } else if (jo.contains("sigma")) {
            fail("oracle.sigma", "only the additive_gaussian oracle takes sigma");
        }
        if (cfg.oracle.kind == OracleKind::finite_sum_uniform &&
            cfg.objective.id != "finite_sum_quad") {
            fail("oracle.kind", "finite_sum_uniform requires the finite_sum_quad objective");
        }
    }

    cfg.algorithm =
        algorithm_from_name(get_string(member(j, "", "algorithm"), "algorithm"), "algorithm");

    {
        const json& jh = member(j, "", "hyperparams");
        if (!jh.is_object()) fail("hyperparams", "expected an object");
        check_keys(jh, "hyperparams", {"alpha", "epsilon", "beta", "gamma", "alpha0"});
        const bool is_msgd = cfg.algorithm == Algorithm::msgd;
        const bool takes_eps = cfg.algorithm == Algorithm::sgd || is_msgd;
        const bool is_shb = cfg.algorithm == Algorithm::shb;
        const bool is_adagrad = cfg.algorithm == Algorithm::adagrad_norm ||
                                cfg.algorithm == Algorithm::adagrad_coord;

        if (jh.contains("alpha")) {
            if (!is_msgd) fail("hyperparams.alpha", "only msgd takes alpha");
            cfg.hp.alpha = get_double(jh.at("alpha"), "hyperparams.alpha");
            if (!(cfg.hp.alpha >= 0.0 && cfg.hp.alpha < 1.0)) {
                fail("hyperparams.alpha", "must lie in [0, 1)");
            }
        } else if (is_msgd) {
            fail("hyperparams.alpha", "missing required key");
        }

        if (jh.contains("epsilon")) {
            if (!takes_eps) fail("hyperparams.epsilon", "only sgd and msgd take epsilon");
            cfg.hp.epsilon = parse_schedule(jh.at("epsilon"), "hyperparams.epsilon");
        } else if (takes_eps) {
            fail("hyperparams.epsilon", "missing required key");
        }

        if (jh.contains("beta")) {
            if (!is_shb) fail("hyperparams.beta", "only shb takes beta");
            cfg.hp.beta = parse_schedule(jh.at("beta"), "hyperparams.beta");
            if (!(cfg.hp.beta->c0() < 1.0)) {
                fail("hyperparams.beta.c0", "heavy-ball momentum values must lie in (0, 1)");
            }
        } else if (is_shb) {
            fail("hyperparams.beta", "missing required key");
        }

        if (jh.contains("gamma")) {
            if (!is_shb) fail("hyperparams.gamma", "only shb takes gamma");
            cfg.hp.gamma_step = parse_schedule(jh.at("gamma"), "hyperparams.gamma");
        } else if (is_shb) {
            fail("hyperparams.gamma", "missing required key");
        }

        if (jh.contains("alpha0")) {
            if (!is_adagrad) fail("hyperparams.alpha0", "only adagrad algorithms take alpha0");
            cfg.hp.alpha0 = get_double(jh.at("alpha0"), "hyperparams.alpha0");
            if (!(cfg.hp.alpha0 > 0.0)) fail("hyperparams.alpha0", "must be positive");
        } else if (is_adagrad) {
            fail("hyperparams.alpha0", "missing required key");
        }
    }

    cfg.horizon = get_int(member(j, "", "horizon"), "horizon");
    if (cfg.horizon < 1) fail("horizon", "must be at least 1");

    if (j.contains("runs")) {
        cfg.runs = get_int(j.at("runs"), "runs");
        if (cfg.runs < 2) fail("runs", "must be at least 2");
    }

    cfg.stride = std::max<std::int64_t>(1, cfg.horizon / 10000);
    if (j.contains("stride")) {
        cfg.stride = get_int(j.at("stride"), "stride");
        if (cfg.stride < 1) fail("stride", "must be at least 1");
    }

    if (j.contains("base_seed")) cfg.base_seed = get_u64(j.at("base_seed"), "base_seed");

    {
        const json& ji = member(j, "", "init");
        if (!ji.is_object()) fail("init", "expected an object");
        check_keys(ji, "init", {"theta", "v"});
        cfg.init_theta = get_vec(member(ji, "init", "theta"), "init.theta");
        if (static_cast<int>(cfg.init_theta.size()) != cfg.objective.dim) {
            fail("init.theta", "dimension mismatch: objective has dimension " +
                                   std::to_string(cfg.objective.dim));
        }
        const bool momentum =
            cfg.algorithm == Algorithm::msgd || cfg.algorithm == Algorithm::shb;
        if (ji.contains("v")) {
            if (!momentum) fail("init.v", "only msgd and shb take an initial velocity");
            cfg.init_v = get_vec(ji.at("v"), "init.v");
            if (cfg.init_v.size() != cfg.init_theta.size()) {
                fail("init.v", "dimension mismatch with init.theta");
            }
        } else if (momentum) {
            cfg.init_v = zeros(cfg.init_theta.size());
        }
    }

    if (j.contains("output_dir")) {
        cfg.output_dir = get_string(j.at("output_dir"), "output_dir");
        if (cfg.output_dir.empty()) fail("output_dir", "must not be empty");
        cfg.output_dir_set = true;
    }

    {
        const bool is_adagrad = cfg.algorithm == Algorithm::adagrad_norm ||
                                cfg.algorithm == Algorithm::adagrad_coord;
        cfg.checks.rate_fit = !is_adagrad;
        if (j.contains("checks")) {
            const json& jc = j.at("checks");
            if (!jc.is_object()) fail("checks", "expected an object");
            check_keys(jc, "checks", {"lemmas", "rate_fit", "assumptions"});
            if (jc.contains("lemmas")) {
                cfg.checks.lemmas = get_bool(jc.at("lemmas"), "checks.lemmas");
            }
            if (jc.contains("rate_fit")) {
                cfg.checks.rate_fit = get_bool(jc.at("rate_fit"), "checks.rate_fit");
                if (cfg.checks.rate_fit && is_adagrad) {
                    fail("checks.rate_fit",
                         "not available for adagrad algorithms (no step-size sum)");
                }
            }
            if (jc.contains("assumptions")) {
                cfg.checks.assumptions = get_bool(jc.at("assumptions"), "checks.assumptions");
            }
        }
    }

    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("(file)", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    JsonWriter w;
    w.begin_object();

    w.key("objective").begin_object();
    w.key("id").value(cfg.objective.id);
    if (cfg.objective.id == "quad") {
        w.key("c").value(cfg.objective.c);
        w.key("dim").value(static_cast<std::int64_t>(cfg.objective.dim));
    }
    if (cfg.objective.id == "finite_sum_quad") {
        w.key("centers").begin_array();
        for (const Vec& center : cfg.objective.centers) {
            w.begin_array();
            for (double x : center) w.value(x);
            w.end_array();
        }
        w.end_array();
    }
    w.end_object();

    w.key("oracle").begin_object();
    switch (cfg.oracle.kind) {
        case OracleKind::exact: w.key("kind").value("exact"); break;
        case OracleKind::additive_gaussian:
            w.key("kind").value("additive_gaussian");
            w.key("sigma").value(cfg.oracle.sigma);
            break;
        case OracleKind::finite_sum_uniform: w.key("kind").value("finite_sum_uniform"); break;
    }
    w.end_object();

    w.key("algorithm").value(algorithm_name(cfg.algorithm));

    w.key("hyperparams").begin_object();
    if (cfg.algorithm == Algorithm::msgd) w.key("alpha").value(cfg.hp.alpha);
    if (cfg.hp.epsilon) {
        w.key("epsilon");
        write_schedule(w, *cfg.hp.epsilon);
    }
    if (cfg.hp.beta) {
        w.key("beta");
        write_schedule(w, *cfg.hp.beta);
    }
    if (cfg.hp.gamma_step) {
        w.key("gamma");
        write_schedule(w, *cfg.hp.gamma_step);
    }
    if (cfg.algorithm == Algorithm::adagrad_norm || cfg.algorithm == Algorithm::adagrad_coord) {
        w.key("alpha0").value(cfg.hp.alpha0);
    }
    w.end_object();

    w.key("horizon").value(cfg.horizon);
    w.key("runs").value(cfg.runs);
    w.key("stride").value(cfg.stride);
    w.key("base_seed").value_u64(cfg.base_seed);

    w.key("init").begin_object();
    w.key("theta").begin_array();
    for (double x : cfg.init_theta) w.value(x);
    w.end_array();
    if (cfg.algorithm == Algorithm::msgd || cfg.algorithm == Algorithm::shb) {
        w.key("v").begin_array();
        for (double x : cfg.init_v) w.value(x);
        w.end_array();
    }
    w.end_object();

    if (cfg.output_dir_set) w.key("output_dir").value(cfg.output_dir);

    w.key("checks").begin_object();
    w.key("lemmas").value(cfg.checks.lemmas);
    w.key("rate_fit").value(cfg.checks.rate_fit);
    w.key("assumptions").value(cfg.checks.assumptions);
    w.end_object();

    w.end_object();
    return w.str();
}

Objective objective_from_spec(const ObjectiveSpec& spec) {
    if (spec.id == "quad") return make_quad(spec.c, spec.dim);
    if (spec.id == "sin2") return make_sin2();
    if (spec.id == "cos2") return make_cos2();
    if (spec.id == "quartic") return make_quartic();
    if (spec.id == "finite_sum_quad") return make_finite_sum_quad(spec.centers);
    throw ConfigError("objective.id", "unknown objective '" + spec.id + "'");
}

GradientOracle oracle_from_spec(const OracleSpec& spec, const Objective& obj) {
    switch (spec.kind) {
        case OracleKind::exact: return make_exact_oracle(obj);
        case OracleKind::additive_gaussian: return make_gaussian_oracle(obj, spec.sigma);
        case OracleKind::finite_sum_uniform:
            if (obj.finite_sum_centers.empty()) {
                throw ConfigError("oracle.kind",
                                  "finite_sum_uniform requires a finite-sum objective");
            }
            return make_finite_sum_oracle(obj);
    }
    throw ConfigError("oracle.kind", "unknown oracle kind");
}

}  // namespace sgdlab
