#include "run_config.hpp"

#include "jostlab/analysis.hpp"
#include "jostlab/error.hpp"
#include "jostlab/io.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace jostlab::cli {

using ojson = nlohmann::ordered_json;

namespace {

void reject_unknown(const ojson& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) throw InvalidArgument(where + ": unknown key '" + key + "'");
    }
}

double get_number(const ojson& j, const std::string& key, const std::string& where) {
    if (!j.at(key).is_number()) throw InvalidArgument(where + "." + key + " must be a number");
    return j.at(key).get<double>();
}

double number_or(const ojson& j, const std::string& key, double fallback, const std::string& where) {
    return j.contains(key) ? get_number(j, key, where) : fallback;
}

std::size_t count_or(const ojson& j, const std::string& key, std::size_t fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    const double v = get_number(j, key, where);
    if (v < 1 || v != std::floor(v)) throw InvalidArgument(where + "." + key + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

SpatialGrid grid_from(const ojson& j, const std::string& where) {
    if (!j.is_object()) throw InvalidArgument(where + " must be an object");
    reject_unknown(j, {"x_min", "x_max", "n_points"}, where);
    const SpatialGrid d = SpatialGrid::desk_default();
    return SpatialGrid(number_or(j, "x_min", d.x_min(), where), number_or(j, "x_max", d.x_max(), where),
                       count_or(j, "n_points", d.size(), where));
}

ojson grid_json(const SpatialGrid& g) {
    ojson j;
    j["x_min"] = g.x_min();
    j["x_max"] = g.x_max();
    j["n_points"] = g.size();
    return j;
}

std::vector<double> number_list(const ojson& j, const std::string& where) {
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw InvalidArgument(where + " must hold numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<double> positive_list(const ojson& j, const std::string& where) {
    std::vector<double> out = number_list(j, where);
    if (out.empty()) throw InvalidArgument(where + " must not be empty");
    for (double v : out) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(where + " entries must be positive");
    }
    return out;
}

std::vector<double> lambda_grid_from(const ojson& j) {
    const std::string where = "lambda_grid";
    if (j.is_array()) return positive_list(j, where);
    if (!j.is_object()) throw InvalidArgument("lambda_grid must be an array or an object");
    reject_unknown(j, {"min", "max", "count", "spacing", "values"}, where);
    if (j.contains("values")) return positive_list(j.at("values"), where + ".values");
    const double lo = number_or(j, "min", 0.05, where);
    const double hi = number_or(j, "max", 10.0, where);
    const std::size_t n = count_or(j, "count", 60, where);
    const std::string spacing = j.value("spacing", std::string("linear"));
    if (!(lo > 0.0) || !(hi >= lo)) throw InvalidArgument("lambda_grid needs 0 < min <= max");
    if (spacing == "log") return n == 1 ? std::vector<double>{lo} : log_spaced(lo, hi, n);
    if (spacing != "linear") throw InvalidArgument("lambda_grid.spacing must be 'linear' or 'log'");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return out;
}

std::vector<double> t_samples_from(const ojson& j) {
    const std::string where = "t_samples";
    if (j.is_array()) return positive_list(j, where);
    if (!j.is_object()) throw InvalidArgument("t_samples must be an array or an object");
    reject_unknown(j, {"min", "max", "count"}, where);
    return log_spaced(number_or(j, "min", 10.0, where), number_or(j, "max", 80.0, where),
                      count_or(j, "count", 12, where));
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const ojson::parse_error& e) {
        throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
    reject_unknown(j,
                   {"potential", "grid", "lambda_grid", "initial_state", "t", "t_samples", "tolerances", "cutoff",
                    "lambda_max", "output_dir", "depth_scan", "oracle_grid"},
                   "config");
    RunConfig c;
    try {
        if (!j.contains("potential")) throw InvalidArgument("config: 'potential' is required");
        c.potential = potential_from_json(j.at("potential").dump());
        if (j.contains("grid")) c.grid = grid_from(j.at("grid"), "grid");
        c.lambda_grid = lambda_grid_from(j.contains("lambda_grid") ? j.at("lambda_grid") : ojson::object());
        if (j.contains("initial_state")) {
            const ojson& s = j.at("initial_state");
            if (!s.is_object()) throw InvalidArgument("initial_state must be an object");
            reject_unknown(s, {"kind", "center", "width"}, "initial_state");
            c.initial_state.kind = InitialState::kind_from_name(s.value("kind", std::string("gaussian")));
            c.initial_state.center = number_or(s, "center", 0.0, "initial_state");
            c.initial_state.width = number_or(s, "width", 1.0, "initial_state");
            if (!(c.initial_state.width > 0.0)) throw InvalidArgument("initial_state.width must be > 0");
        }
        if (j.contains("t") && !j.at("t").is_null()) c.t = get_number(j, "t", "config");
        c.t_samples = t_samples_from(j.contains("t_samples") ? j.at("t_samples") : ojson::object());
        if (j.contains("tolerances")) {
            const ojson& t = j.at("tolerances");
            if (!t.is_object()) throw InvalidArgument("tolerances must be an object");
            reject_unknown(t, {"tol_ode", "tol_res", "tol_scatter", "slope_tol", "control_tol"}, "tolerances");
            c.tolerances.tol_ode = number_or(t, "tol_ode", c.tolerances.tol_ode, "tolerances");
            c.tolerances.tol_res = number_or(t, "tol_res", c.tolerances.tol_res, "tolerances");
            c.tolerances.tol_scatter = number_or(t, "tol_scatter", c.tolerances.tol_scatter, "tolerances");
            c.tolerances.slope_tol = number_or(t, "slope_tol", c.tolerances.slope_tol, "tolerances");
            c.tolerances.control_tol = number_or(t, "control_tol", c.tolerances.control_tol, "tolerances");
        }
        if (j.contains("cutoff")) {
            const ojson& t = j.at("cutoff");
            if (!t.is_object()) throw InvalidArgument("cutoff must be an object");
            reject_unknown(t, {"lambda0"}, "cutoff");
            if (t.contains("lambda0") && !t.at("lambda0").is_null()) c.lambda0 = get_number(t, "lambda0", "cutoff");
        }
        if (j.contains("lambda_max") && !j.at("lambda_max").is_null()) {
            c.lambda_max = get_number(j, "lambda_max", "config");
        }
        if (j.contains("output_dir")) {
            if (!j.at("output_dir").is_string()) throw InvalidArgument("output_dir must be a string");
            c.output_dir = j.at("output_dir").get<std::string>();
        }
        if (j.contains("depth_scan")) {
            const ojson& d = j.at("depth_scan");
            if (!d.is_object()) throw InvalidArgument("depth_scan must be an object");
            reject_unknown(d, {"min", "max", "count", "halfwidth"}, "depth_scan");
            c.depth_scan.min = number_or(d, "min", c.depth_scan.min, "depth_scan");
            c.depth_scan.max = number_or(d, "max", c.depth_scan.max, "depth_scan");
            c.depth_scan.count = count_or(d, "count", c.depth_scan.count, "depth_scan");
            c.depth_scan.halfwidth = number_or(d, "halfwidth", c.depth_scan.halfwidth, "depth_scan");
            if (!(c.depth_scan.min > 0.0) || !(c.depth_scan.max > c.depth_scan.min) || c.depth_scan.count < 2) {
                throw InvalidArgument("depth_scan needs 0 < min < max and count >= 2");
            }
        }
        if (j.contains("oracle_grid") && !j.at("oracle_grid").is_null()) c.oracle_grid = grid_from(j.at("oracle_grid"), "oracle_grid");
    } catch (const ojson::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string run_config_to_json(const RunConfig& c) {
    ojson j;
    j["potential"] = ojson::parse(potential_to_json(c.potential));
    j["grid"] = grid_json(c.grid);
    j["lambda_grid"] = c.lambda_grid;
    j["initial_state"] = {{"kind", c.initial_state.kind_name()},
                          {"center", c.initial_state.center},
                          {"width", c.initial_state.width}};
    j["t"] = c.t ? ojson(*c.t) : ojson(nullptr);
    j["t_samples"] = c.t_samples;
    j["tolerances"] = {{"tol_ode", c.tolerances.tol_ode},
                       {"tol_res", c.tolerances.tol_res},
                       {"tol_scatter", c.tolerances.tol_scatter},
                       {"slope_tol", c.tolerances.slope_tol},
                       {"control_tol", c.tolerances.control_tol}};
    j["cutoff"] = {{"lambda0", c.lambda0 ? ojson(*c.lambda0) : ojson(nullptr)}};
    j["lambda_max"] = c.lambda_max ? ojson(*c.lambda_max) : ojson(nullptr);
    j["output_dir"] = c.output_dir;
    j["depth_scan"] = {{"min", c.depth_scan.min},
                       {"max", c.depth_scan.max},
                       {"count", c.depth_scan.count},
                       {"halfwidth", c.depth_scan.halfwidth}};
    j["oracle_grid"] = c.oracle_grid ? grid_json(*c.oracle_grid) : ojson(nullptr);
    return j.dump(2) + "\n";
}

}  // namespace jostlab::cli
