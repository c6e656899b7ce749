#include "qmct/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qmct/errors.hpp"

namespace qmct {

using nlohmann::json;

const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds = {
        "ed-gap",    "wkb",       "pimc-spin", "pigs-spin", "pimc-well",
        "pimd-well", "temp-scan", "size-scan", "fit",       "compare"};
    return kinds;
}

bool is_experiment_kind(const std::string& kind) {
    for (const auto& k : experiment_kinds())
        if (k == kind) return true;
    return false;
}

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
    throw ConfigError("config key '" + key + "': " + why);
}

double as_double(const json& v, const std::string& key) {
    if (!v.is_number()) bad_key(key, "expected a number");
    return v.get<double>();
}

long long as_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) bad_key(key, "expected an integer");
    return v.get<long long>();
}

bool as_bool(const json& v, const std::string& key) {
    if (!v.is_boolean()) bad_key(key, "expected true/false");
    return v.get<bool>();
}

std::string as_string(const json& v, const std::string& key) {
    if (!v.is_string()) bad_key(key, "expected a string");
    return v.get<std::string>();
}

std::vector<double> as_double_list(const json& v, const std::string& key) {
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array()) bad_key(key, "expected a number or array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) bad_key(key, "expected numeric array elements");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<int> as_size_list(const json& v, const std::string& key) {
    if (v.is_string()) return parse_int_list(v.get<std::string>());
    if (v.is_number_integer()) return {v.get<int>()};
    if (!v.is_array()) bad_key(key, "expected an integer, list, or \"a..b\"");
    std::vector<int> out;
    for (const auto& e : v) {
        if (!e.is_number_integer()) bad_key(key, "expected integer elements");
        out.push_back(e.get<int>());
    }
    return out;
}

void parse_langevin(const json& v, LangevinParams& lp) {
    if (!v.is_object()) bad_key("langevin", "expected an object");
    for (const auto& [k, val] : v.items()) {
        if (k == "delta")
            lp.delta = as_double(val, "langevin.delta");
        else if (k == "gamma_friction")
            lp.gamma_friction = as_double(val, "langevin.gamma_friction");
        else
            throw ConfigError("unknown config key 'langevin." + k + "'");
    }
}

void parse_window(const json& v, const std::string& key, double& lo, double& hi) {
    const auto vals = as_double_list(v, key);
    if (vals.size() != 2) bad_key(key, "expected [lo, hi]");
    lo = vals[0];
    hi = vals[1];
}

} // namespace

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const int lo = std::stoi(text.substr(0, dots));
        const int hi = std::stoi(text.substr(dots + 2));
        if (hi < lo) throw ConfigError("bad range '" + text + "'");
        for (int v = lo; v <= hi; ++v) out.push_back(v);
        return out;
    }
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    if (out.empty()) throw ConfigError("empty size list '" + text + "'");
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw ConfigError("empty list '" + text + "'");
    return out;
}

ExperimentConfig config_from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config must be a JSON object");

    ExperimentConfig cfg;
    for (const auto& [key, v] : root.items()) {
        if (key == "kind") cfg.kind = as_string(v, key);
        else if (key == "topology") cfg.topology = as_string(v, key);
        else if (key == "gamma") cfg.gamma = as_double(v, key);
        else if (key == "h") cfg.h = as_double(v, key);
        else if (key == "spatial_periodic") cfg.spatial_periodic = as_bool(v, key);
        else if (key == "p") cfg.p = static_cast<int>(as_int(v, key));
        else if (key == "lambda") cfg.lambda = as_double(v, key);
        else if (key == "mass") cfg.mass = as_double(v, key);
        else if (key == "lambdas") cfg.lambdas = as_double_list(v, key);
        else if (key == "engine") cfg.engine = as_string(v, key);
        else if (key == "P") cfg.P = static_cast<int>(as_int(v, key));
        else if (key == "beta") cfg.beta = as_double(v, key);
        else if (key == "flavor") cfg.flavor = as_string(v, key);
        else if (key == "slice_threshold") cfg.slice_threshold = as_double(v, key);
        else if (key == "stop_fractions") cfg.stop_fractions = as_double_list(v, key);
        else if (key == "pimc_step") cfg.pimc_step = as_double(v, key);
        else if (key == "langevin") parse_langevin(v, cfg.langevin);
        else if (key == "start_sign") cfg.start_sign = static_cast<int>(as_int(v, key));
        else if (key == "L") cfg.L_values = as_size_list(v, key);
        else if (key == "betas") cfg.betas = as_double_list(v, key);
        else if (key == "window") parse_window(v, key, cfg.window_lo, cfg.window_hi);
        else if (key == "arrhenius_window")
            parse_window(v, key, cfg.arrhenius_lo, cfg.arrhenius_hi);
        else if (key == "n_runs") cfg.n_runs = static_cast<int>(as_int(v, key));
        else if (key == "budget") cfg.budget = as_int(v, key);
        else if (key == "n_boot") cfg.n_boot = static_cast<int>(as_int(v, key));
        else if (key == "threads") cfg.threads = static_cast<int>(as_int(v, key));
        else if (key == "snapshot_bins")
            cfg.snapshot_bins = static_cast<int>(as_int(v, key));
        else if (key == "master_seed") {
            if (!v.is_number_integer() && !v.is_number_unsigned())
                bad_key(key, "expected an integer");
            cfg.master_seed = v.get<std::uint64_t>();
        }
        else if (key == "out") cfg.out = as_string(v, key);
        else if (key == "records_file") cfg.records_file = as_string(v, key);
        else if (key == "qmc_b") cfg.qmc_b = as_double(v, key);
        else if (key == "qmc_err") cfg.qmc_err = as_double(v, key);
        else if (key == "ed_mode") cfg.ed_mode = as_string(v, key);
        else if (key == "code_version") { /* manifest echo; informational */ }
        else throw ConfigError("unknown config key '" + key + "'");
    }
    validate_config(cfg);
    return cfg;
}

std::string config_to_json_text(const ExperimentConfig& c,
                                const std::string& code_version) {
    json j;
    j["code_version"] = code_version;
    j["kind"] = c.kind;
    j["topology"] = c.topology;
    j["gamma"] = c.gamma;
    j["h"] = c.h;
    j["spatial_periodic"] = c.spatial_periodic;
    j["p"] = c.p;
    j["lambda"] = c.lambda;
    j["mass"] = c.mass;
    if (!c.lambdas.empty()) j["lambdas"] = c.lambdas;
    if (!c.engine.empty()) j["engine"] = c.engine;
    j["P"] = c.P;
    j["beta"] = c.beta;
    j["flavor"] = c.flavor;
    j["slice_threshold"] = c.slice_threshold;
    j["stop_fractions"] = c.stop_fractions;
    j["pimc_step"] = c.pimc_step;
    j["langevin"] = {{"delta", c.langevin.delta},
                     {"gamma_friction", c.langevin.gamma_friction}};
    j["start_sign"] = c.start_sign;
    if (!c.L_values.empty()) j["L"] = c.L_values;
    if (!c.betas.empty()) j["betas"] = c.betas;
    j["window"] = {c.window_lo, c.window_hi};
    j["arrhenius_window"] = {c.arrhenius_lo, c.arrhenius_hi};
    j["n_runs"] = c.n_runs;
    j["budget"] = c.budget;
    j["n_boot"] = c.n_boot;
    j["threads"] = c.threads;
    j["snapshot_bins"] = c.snapshot_bins;
    j["master_seed"] = c.master_seed;
    if (!c.out.empty()) j["out"] = c.out;
    if (!c.records_file.empty()) j["records_file"] = c.records_file;
    j["qmc_b"] = c.qmc_b;
    j["qmc_err"] = c.qmc_err;
    j["ed_mode"] = c.ed_mode;
    return j.dump(2) + "\n";
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json_text(ss.str());
}

void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
    // Reuse the JSON schema: wrap the single key/value into a document and
    // merge.  Values that do not parse as JSON scalars are taken as strings.
    json v;
    try {
        v = json::parse(value);
    } catch (const json::exception&) {
        v = value;
    }
    json root = json::object();
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
        root[key] = v;
    } else {
        root[key.substr(0, dot)] = json::object({{key.substr(dot + 1), v}});
    }

    // Parse the override through the schema, then copy the touched field by
    // re-parsing the merged full document.
    json full = json::parse(config_to_json_text(cfg, "override"));
    for (const auto& [k, val] : root.items()) {
        if (val.is_object() && full.contains(k) && full[k].is_object())
            for (const auto& [k2, v2] : val.items()) full[k][k2] = v2;
        else
            full[k] = val;
    }
    cfg = config_from_json_text(full.dump());
}

SpinModel model_from_config(const ExperimentConfig& cfg, int L) {
    if (cfg.topology == "chain")
        return SpinModel::chain(L, cfg.gamma, cfg.h, cfg.spatial_periodic);
    if (cfg.topology == "fully-connected")
        return SpinModel::fully_connected(L, cfg.gamma, cfg.h);
    if (cfg.topology == "p-spin") {
        if (cfg.p < 3) throw ConfigError("p-spin requires p >= 3");
        const int p = cfg.p;
        const double h = cfg.h;
        MeanFieldPotential g;
        g.value = [p, h](double m) { return 0.5 * std::pow(m, p) + h * m; };
        g.deriv = [p, h](double m) {
            return 0.5 * p * std::pow(m, p - 1) + h;
        };
        return SpinModel::mean_field(L, cfg.gamma, std::move(g));
    }
    throw ConfigError("unknown topology '" + cfg.topology +
                      "' (expected chain, fully-connected, or p-spin)");
}

FirstPassageConfig first_passage_from_config(const ExperimentConfig& cfg) {
    FirstPassageConfig fp;
    std::string engine = cfg.engine;
    if (engine.empty()) {
        if (cfg.kind == "pigs-spin") engine = "pigs";
        else if (cfg.kind == "pimc-well") engine = "pimc-well";
        else if (cfg.kind == "pimd-well") engine = "pimd-well";
        else engine = "pimc-discrete";
    }
    fp.engine = engine_from_string(engine);
    if (cfg.kind == "pigs-spin" && fp.engine != Engine::Pigs)
        throw ConfigError("pigs-spin runs the pigs engine; leave 'engine' "
                          "unset or set it to pigs");
    fp.beta = cfg.beta;
    fp.P = cfg.P;
    if (cfg.flavor == "sw") fp.flavor = ClusterFlavor::SwendsenWang;
    else if (cfg.flavor == "wolff") fp.flavor = ClusterFlavor::Wolff;
    else throw ConfigError("unknown flavor '" + cfg.flavor + "' (sw|wolff)");
    fp.well.lambda = cfg.lambda;
    fp.well.mass = cfg.mass;
    fp.langevin = cfg.langevin;
    fp.pimc_step = cfg.pimc_step;
    fp.start_sign = cfg.start_sign;
    fp.slice_threshold = cfg.slice_threshold;
    fp.stop_fractions = cfg.stop_fractions;
    fp.master_seed = cfg.master_seed;
    fp.snapshot_bins = cfg.snapshot_bins;
    fp.n_threads = cfg.threads;
    if (engine_uses_spins(fp.engine)) {
        if (cfg.L_values.empty())
            throw ConfigError("spin experiments need 'L'");
        fp.model = model_from_config(cfg, cfg.L_values.front());
    }
    return fp;
}

void validate_config(const ExperimentConfig& cfg) {
    if (!cfg.kind.empty() && !is_experiment_kind(cfg.kind))
        throw ConfigError("unknown experiment kind '" + cfg.kind + "'");
    if (cfg.n_runs < 1) throw ConfigError("config key 'n_runs': must be >= 1");
    if (cfg.budget < 1) throw ConfigError("config key 'budget': must be >= 1");
    if (cfg.n_boot < 2) throw ConfigError("config key 'n_boot': must be >= 2");
    if (cfg.threads < 0)
        throw ConfigError("config key 'threads': must be >= 0");
    if (cfg.P < 1) throw ConfigError("config key 'P': must be >= 1");
    if (!(cfg.beta > 0.0)) throw ConfigError("config key 'beta': must be > 0");
    for (double b : cfg.betas)
        if (!(b > 0.0)) throw ConfigError("config key 'betas': must be > 0");
    for (int L : cfg.L_values)
        if (L < 1) throw ConfigError("config key 'L': sizes must be >= 1");
    for (double f : cfg.stop_fractions)
        if (!(f > 0.0) || f > 1.0)
            throw ConfigError("config key 'stop_fractions': must lie in (0,1]");
    if (!(cfg.slice_threshold >= 0.0) || cfg.slice_threshold > 1.0)
        throw ConfigError("config key 'slice_threshold': must lie in [0,1]");
    if (cfg.start_sign != 1 && cfg.start_sign != -1)
        throw ConfigError("config key 'start_sign': must be 1 or -1");
    if (!(cfg.lambda > 0.0))
        throw ConfigError("config key 'lambda': must be > 0");
    for (double l : cfg.lambdas)
        if (!(l > 0.0)) throw ConfigError("config key 'lambdas': must be > 0");
    if (!(cfg.mass > 0.0)) throw ConfigError("config key 'mass': must be > 0");
    if (cfg.ed_mode != "squared" && cfg.ed_mode != "linear")
        throw ConfigError("config key 'ed_mode': squared or linear");
    if (cfg.snapshot_bins < 0)
        throw ConfigError("config key 'snapshot_bins': must be >= 0");
}

} // namespace qmct
