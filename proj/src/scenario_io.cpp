// SPDX-License-Identifier: Apache-2.0

#include "wpt/scenario.hpp"

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "wpt/common.hpp"

namespace wpt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

std::string join_path(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void require_object(const json& node, const std::string& path) {
    if (!node.is_object()) {
        fail("config: '" + path + "' must be an object");
    }
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            fail("config: unknown key '" + join_path(path, it.key()) + "'");
        }
    }
}

bool has(const json& obj, const char* key) { return obj.contains(key); }

double get_number(const json& obj, const std::string& path, const char* key) {
    if (!has(obj, key)) {
        fail("config: missing key '" + join_path(path, key) + "'");
    }
    const json& v = obj.at(key);
    if (!v.is_number()) {
        fail("config: '" + join_path(path, key) + "' must be a number");
    }
    return v.get<double>();
}

std::uint64_t get_uint(const json& obj, const std::string& path, const char* key) {
    if (!has(obj, key)) {
        fail("config: missing key '" + join_path(path, key) + "'");
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        fail("config: '" + join_path(path, key) + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

int get_int(const json& obj, const std::string& path, const char* key) {
    if (!has(obj, key)) {
        fail("config: missing key '" + join_path(path, key) + "'");
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
        fail("config: '" + join_path(path, key) + "' must be an integer");
    }
    return v.get<int>();
}

std::string get_string(const json& obj, const std::string& path, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_string()) {
        fail("config: '" + join_path(path, key) + "' must be a string");
    }
    return v.get<std::string>();
}

std::vector<double> get_number_array(const json& obj, const std::string& path, const char* key) {
    const json& v = obj.at(key);
    if (!v.is_array()) {
        fail("config: '" + join_path(path, key) + "' must be an array of numbers");
    }
    std::vector<double> values;
    values.reserve(v.size());
    for (const auto& entry : v) {
        if (!entry.is_number()) {
            fail("config: '" + join_path(path, key) + "' must contain only numbers");
        }
        values.push_back(entry.get<double>());
    }
    return values;
}

/// Value of a quantity given under exactly one of a linear-unit key and a
/// dB-family key.
double get_converted(const json& obj, const std::string& path, const char* linear_key,
                     const char* db_key, double (*convert)(double)) {
    const bool has_linear = has(obj, linear_key);
    const bool has_db = has(obj, db_key);
    if (has_linear == has_db) {
        fail("config: '" + path + "' needs exactly one of '" + linear_key + "' and '" + db_key +
             "'");
    }
    return has_linear ? get_number(obj, path, linear_key)
                      : convert(get_number(obj, path, db_key));
}

SystemParams parse_system(const json& node) {
    const std::string path = "system";
    require_object(node, path);
    check_keys(node, path,
               {"m_t", "p_t_w", "p_t_dbm", "p_max_w", "p_max_dbm", "tau_s", "n0_w_per_hz",
                "n0_dbm_per_hz", "eta", "f_c_hz"});
    SystemParams params;
    params.m_t = static_cast<std::size_t>(get_uint(node, path, "m_t"));
    params.p_t_w = get_converted(node, path, "p_t_w", "p_t_dbm", dbm_to_watts);
    params.p_max_w = get_converted(node, path, "p_max_w", "p_max_dbm", dbm_to_watts);
    params.tau_s = get_number(node, path, "tau_s");
    params.n0_w_per_hz = get_converted(node, path, "n0_w_per_hz", "n0_dbm_per_hz", dbm_to_watts);
    if (has(node, "eta")) {
        const json& eta = node.at("eta");
        if (eta.is_number()) {
            params.eta = {eta.get<double>()};
        } else {
            params.eta = get_number_array(node, path, "eta");
        }
    } else {
        params.eta = {1.0};
    }
    params.f_c_hz = has(node, "f_c_hz") ? get_number(node, path, "f_c_hz") : 900e6;
    return params;
}

PathLossModel parse_path_loss(const json& node) {
    const std::string path = "path_loss";
    require_object(node, path);
    check_keys(node, path, {"c0", "c0_db", "r0_m", "alpha"});
    PathLossModel model;
    model.c0 = get_converted(node, path, "c0", "c0_db", db_to_linear);
    model.r0_m = get_number(node, path, "r0_m");
    model.alpha = get_number(node, path, "alpha");
    return model;
}

void parse_ers(const json& node, Scenario& sc) {
    const std::string path = "ers";
    require_object(node, path);
    check_keys(node, path, {"distances_m", "distance_uniform"});
    const bool has_explicit = has(node, "distances_m");
    const bool has_dist = has(node, "distance_uniform");
    if (has_explicit == has_dist) {
        fail("config: 'ers' needs exactly one of 'distances_m' and 'distance_uniform'");
    }
    if (has_explicit) {
        sc.explicit_distances_m = get_number_array(node, path, "distances_m");
        if (sc.explicit_distances_m.empty()) {
            fail("config: 'ers.distances_m' must not be empty");
        }
        return;
    }
    const json& uniform = node.at("distance_uniform");
    const std::string upath = "ers.distance_uniform";
    require_object(uniform, upath);
    check_keys(uniform, upath, {"r_lo_m", "r_hi_m", "count"});
    DistanceDistribution dist;
    dist.r_lo_m = get_number(uniform, upath, "r_lo_m");
    dist.r_hi_m = get_number(uniform, upath, "r_hi_m");
    dist.count = static_cast<std::size_t>(get_uint(uniform, upath, "count"));
    sc.distance_dist = dist;
}

void parse_targets(const json* node, Scenario& sc) {
    const std::string path = "targets";
    const bool is_sweep = sc.distance_dist.has_value();
    if (node == nullptr) {
        if (!is_sweep) {
            fail("config: 'targets' is required for explicit ER layouts");
        }
        sc.target_grid_w = default_target_grid();
        return;
    }
    require_object(*node, path);
    check_keys(*node, path, {"common_w", "common_dbm", "per_er_w", "grid_w"});
    const bool has_common = has(*node, "common_w") || has(*node, "common_dbm");
    const bool has_per_er = has(*node, "per_er_w");
    const bool has_grid = has(*node, "grid_w");
    if (is_sweep) {
        if (has_common || has_per_er) {
            fail("config: a distance-distribution scenario takes its targets from "
                 "'targets.grid_w'");
        }
        sc.target_grid_w = has_grid ? get_number_array(*node, path, "grid_w")
                                    : default_target_grid();
        if (sc.target_grid_w.empty()) {
            fail("config: 'targets.grid_w' must not be empty");
        }
        return;
    }
    if (has_grid) {
        fail("config: 'targets.grid_w' needs a distance distribution");
    }
    if (has_common == has_per_er) {
        fail("config: 'targets' needs exactly one of 'common_w'/'common_dbm' and 'per_er_w'");
    }
    if (has_per_er) {
        sc.targets_w = get_number_array(*node, path, "per_er_w");
        return;
    }
    const double common =
        get_converted(*node, path, "common_w", "common_dbm", dbm_to_watts);
    sc.targets_w.assign(sc.explicit_distances_m.size(), common);
}

void parse_control(const json* node, Scenario& sc) {
    if (node == nullptr) {
        return;
    }
    const std::string path = "control";
    require_object(*node, path);
    check_keys(*node, path,
               {"p_init_fraction_of_p_max", "p_init_w", "n_iters", "trials", "tol",
                "measurement", "redraw", "measurement_blocks", "floor_blocks", "threads"});
    if (has(*node, "p_init_fraction_of_p_max") && has(*node, "p_init_w")) {
        fail("config: 'control' takes at most one of 'p_init_fraction_of_p_max' and 'p_init_w'");
    }
    if (has(*node, "p_init_fraction_of_p_max")) {
        sc.p_init_fraction = get_number(*node, path, "p_init_fraction_of_p_max");
    }
    if (has(*node, "p_init_w")) {
        sc.p_init_w = get_number(*node, path, "p_init_w");
    }
    if (has(*node, "n_iters")) {
        sc.n_iters = get_int(*node, path, "n_iters");
    }
    if (has(*node, "trials")) {
        sc.n_trials = get_int(*node, path, "trials");
    }
    if (has(*node, "tol")) {
        sc.tol = get_number(*node, path, "tol");
    }
    if (has(*node, "measurement_blocks")) {
        sc.measurement_blocks = get_int(*node, path, "measurement_blocks");
    }
    if (has(*node, "floor_blocks")) {
        sc.floor_blocks = get_int(*node, path, "floor_blocks");
    }
    if (has(*node, "threads")) {
        sc.threads = get_int(*node, path, "threads");
    }
    if (has(*node, "measurement")) {
        const std::string mode = get_string(*node, path, "measurement");
        if (mode == "asymptotic") {
            sc.mode = MeasurementMode::asymptotic;
        } else if (mode == "exact") {
            sc.mode = sc.measurement_blocks > 1 ? MeasurementMode::exact_averaged
                                                : MeasurementMode::exact_per_block;
        } else if (mode == "exact_per_block") {
            sc.mode = MeasurementMode::exact_per_block;
        } else if (mode == "exact_averaged") {
            sc.mode = MeasurementMode::exact_averaged;
        } else {
            fail("config: 'control.measurement' must be one of asymptotic, exact, "
                 "exact_per_block, exact_averaged; got '" +
                 mode + "'");
        }
    }
    if (has(*node, "redraw")) {
        const std::string redraw = get_string(*node, path, "redraw");
        if (redraw == "per_block") {
            sc.redraw = ChannelRedraw::per_block;
        } else if (redraw == "fixed") {
            sc.redraw = ChannelRedraw::fixed;
        } else {
            fail("config: 'control.redraw' must be 'per_block' or 'fixed', got '" + redraw +
                 "'");
        }
    }
}

}  // namespace

std::vector<std::string> builtin_scenario_names() { return {"fig2", "fig3", "fig4"}; }

std::string builtin_scenario_text(const std::string& name) {
    if (name == "fig2") {
        return R"({
  "name": "fig2",
  "system": {
    "m_t": 500,
    "p_t_w": 1.0,
    "p_max_w": 0.1,
    "tau_s": 1.0e-6,
    "n0_dbm_per_hz": -170.0,
    "eta": 1.0,
    "f_c_hz": 900.0e6
  },
  "path_loss": {"c0_db": -30.0, "r0_m": 1.0, "alpha": 3.0},
  "ers": {"distances_m": [5.0, 10.0, 15.0]},
  "targets": {"common_w": 1.0e-4},
  "control": {
    "p_init_fraction_of_p_max": 1.0,
    "n_iters": 500,
    "tol": 1.0e-9,
    "measurement": "asymptotic"
  },
  "seed": 1
}
)";
    }
    if (name == "fig3") {
        return R"({
  "name": "fig3",
  "system": {
    "m_t": 500,
    "p_t_w": 1.0,
    "p_max_w": 0.1,
    "tau_s": 1.0e-6,
    "n0_dbm_per_hz": -170.0,
    "eta": 1.0,
    "f_c_hz": 900.0e6
  },
  "path_loss": {"c0_db": -30.0, "r0_m": 1.0, "alpha": 3.0},
  "ers": {"distances_m": [5.0, 10.0, 15.0]},
  "targets": {"common_w": 2.4e-4},
  "control": {
    "p_init_fraction_of_p_max": 1.0,
    "n_iters": 500,
    "tol": 1.0e-9,
    "measurement": "asymptotic"
  },
  "seed": 1
}
)";
    }
    if (name == "fig4") {
        return R"({
  "name": "fig4",
  "system": {
    "m_t": 500,
    "p_t_w": 1.0,
    "p_max_w": 0.1,
    "tau_s": 1.0e-6,
    "n0_dbm_per_hz": -170.0,
    "eta": 1.0,
    "f_c_hz": 900.0e6
  },
  "path_loss": {"c0_db": -30.0, "r0_m": 1.0, "alpha": 3.0},
  "ers": {"distance_uniform": {"r_lo_m": 5.0, "r_hi_m": 15.0, "count": 30}},
  "control": {
    "p_init_fraction_of_p_max": 1.0,
    "n_iters": 20,
    "trials": 5000,
    "measurement": "asymptotic"
  },
  "seed": 1
}
)";
    }
    throw UnknownScenarioError("unknown built-in scenario '" + name + "'");
}

nlohmann::json load_scenario_json(const std::string& ref) {
    namespace fs = std::filesystem;
    json doc;
    bool found = false;
    std::error_code ec;
    const auto try_path = [&](const fs::path& path) {
        if (found || !fs::is_regular_file(path, ec)) {
            return;
        }
        std::ifstream in(path);
        if (!in) {
            fail("config: cannot read '" + path.string() + "'");
        }
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            fail("config '" + path.string() + "': " + e.what());
        }
        found = true;
    };
    try_path(ref);
    try_path(ref + ".json");
    if (const char* dir = std::getenv("WPTSIM_SCENARIO_DIR")) {
        try_path(fs::path(dir) / ref);
        try_path(fs::path(dir) / (ref + ".json"));
    }
    if (!found) {
        for (const auto& name : builtin_scenario_names()) {
            if (name == ref) {
                doc = json::parse(builtin_scenario_text(name));
                found = true;
                break;
            }
        }
    }
    if (!found) {
        throw UnknownScenarioError("unknown scenario '" + ref +
                                   "': not a file, not in WPTSIM_SCENARIO_DIR, and not a "
                                   "built-in preset (fig2, fig3, fig4)");
    }
    if (doc.is_object() && doc.contains("scenario")) {
        doc = doc.at("scenario");
    }
    return doc;
}

Scenario scenario_from_json(const nlohmann::json& doc) {
    require_object(doc, "scenario");
    check_keys(doc, "", {"name", "system", "path_loss", "ers", "targets", "control", "seed"});
    Scenario sc;
    if (has(doc, "name")) {
        sc.name = get_string(doc, "", "name");
    }
    if (!has(doc, "system") || !has(doc, "path_loss") || !has(doc, "ers")) {
        fail("config: 'system', 'path_loss' and 'ers' are required");
    }
    sc.params = parse_system(doc.at("system"));
    sc.path_loss = parse_path_loss(doc.at("path_loss"));
    parse_ers(doc.at("ers"), sc);
    parse_targets(has(doc, "targets") ? &doc.at("targets") : nullptr, sc);
    parse_control(has(doc, "control") ? &doc.at("control") : nullptr, sc);
    if (has(doc, "seed")) {
        sc.seed = get_uint(doc, "", "seed");
    }
    return sc;
}

nlohmann::json scenario_to_json(const Scenario& sc) {
    json doc;
    doc["name"] = sc.name;
    json system;
    system["m_t"] = sc.params.m_t;
    system["p_t_w"] = sc.params.p_t_w;
    system["p_max_w"] = sc.params.p_max_w;
    system["tau_s"] = sc.params.tau_s;
    system["n0_w_per_hz"] = sc.params.n0_w_per_hz;
    system["eta"] = sc.params.eta;
    system["f_c_hz"] = sc.params.f_c_hz;
    doc["system"] = std::move(system);
    json path_loss;
    path_loss["c0"] = sc.path_loss.c0;
    path_loss["r0_m"] = sc.path_loss.r0_m;
    path_loss["alpha"] = sc.path_loss.alpha;
    doc["path_loss"] = std::move(path_loss);
    json ers;
    if (!sc.explicit_distances_m.empty()) {
        ers["distances_m"] = sc.explicit_distances_m;
    } else if (sc.distance_dist.has_value()) {
        ers["distance_uniform"] = {{"r_lo_m", sc.distance_dist->r_lo_m},
                                   {"r_hi_m", sc.distance_dist->r_hi_m},
                                   {"count", sc.distance_dist->count}};
    }
    doc["ers"] = std::move(ers);
    json targets;
    if (!sc.targets_w.empty()) {
        targets["per_er_w"] = sc.targets_w;
    }
    if (!sc.target_grid_w.empty()) {
        targets["grid_w"] = sc.target_grid_w;
    }
    doc["targets"] = std::move(targets);
    json control;
    if (sc.p_init_w.has_value()) {
        control["p_init_w"] = *sc.p_init_w;
    } else {
        control["p_init_fraction_of_p_max"] = sc.p_init_fraction;
    }
    control["n_iters"] = sc.n_iters;
    control["trials"] = sc.n_trials;
    control["tol"] = sc.tol;
    control["measurement"] = measurement_mode_name(sc.mode);
    control["redraw"] = channel_redraw_name(sc.redraw);
    control["measurement_blocks"] = sc.measurement_blocks;
    control["floor_blocks"] = sc.floor_blocks;
    control["threads"] = sc.threads;
    doc["control"] = std::move(control);
    doc["seed"] = sc.seed;
    return doc;
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        fail("--set expects key.path=value, got '" + assignment + "'");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string value_text = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(value_text);
    } catch (const json::parse_error&) {
        value = value_text;
    }

    std::vector<std::string> segments;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string segment =
            dot == std::string::npos ? path.substr(start) : path.substr(start, dot - start);
        if (segment.empty()) {
            fail("--set: empty path segment in '" + path + "'");
        }
        segments.push_back(segment);
        if (dot == std::string::npos) {
            break;
        }
        start = dot + 1;
    }

    json* node = &doc;
    std::string walked;
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        const std::string& segment = segments[i];
        walked = join_path(walked, segment);
        if (node->is_array()) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(segment);
            } catch (const std::exception&) {
                fail("--set: '" + walked + "' indexes an array and must be a number");
            }
            if (idx >= node->size()) {
                fail("--set: index '" + walked + "' is out of range");
            }
            node = &(*node)[idx];
            continue;
        }
        if (node->is_null()) {
            *node = json::object();
        }
        if (!node->is_object()) {
            fail("--set: '" + walked + "' is not an object");
        }
        node = &(*node)[segment];
    }
    const std::string& last = segments.back();
    if (node->is_array()) {
        std::size_t idx = 0;
        try {
            idx = std::stoul(last);
        } catch (const std::exception&) {
            fail("--set: '" + join_path(walked, last) + "' indexes an array and must be a number");
        }
        if (idx >= node->size()) {
            fail("--set: index '" + join_path(walked, last) + "' is out of range");
        }
        (*node)[idx] = std::move(value);
        return;
    }
    if (node->is_null()) {
        *node = json::object();
    }
    if (!node->is_object()) {
        fail("--set: '" + walked + "' is not an object");
    }
    (*node)[last] = std::move(value);
}

}  // namespace wpt
