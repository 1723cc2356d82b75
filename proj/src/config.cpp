#include "ffsplit/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ffsplit {

using nlohmann::json;

namespace {

double unit_value(const json& v, const std::string& key, const std::string& kind,
                  const Units& u) {
    if (v.is_number()) return v.get<double>();  // plain number = dimensionless
    if (!v.is_object() || !v.contains("value") || !v.contains("unit"))
        throw ConfigError("config key '" + key + "': expected a number or {value, unit}");
    for (const auto& [k, _] : v.items())
        if (k != "value" && k != "unit") throw ConfigError("config key '" + key + "." + k + "' is unknown");
    const double value = v.at("value").get<double>();
    const std::string unit = v.at("unit").get<std::string>();
    if (unit == "dimensionless") return value;
    if (kind == "length") {
        if (unit == "um") return u.length_from_si(value * 1e-6);
        if (unit == "m") return u.length_from_si(value);
    } else if (kind == "time") {
        if (unit == "ms") return u.time_from_si(value * 1e-3);
        if (unit == "s") return u.time_from_si(value);
    } else if (kind == "energy") {
        if (unit == "J") return u.energy_from_si(value);
        if (unit == "hbar*omega") return value;
    }
    throw ConfigError("config key '" + key + "': unit '" + unit + "' does not measure " + kind);
}

double plain_unit(const json& v, const std::string& key, const std::string& required_unit) {
    if (v.is_number()) return v.get<double>();
    if (!v.is_object() || !v.contains("value") || !v.contains("unit"))
        throw ConfigError("config key '" + key + "': expected a number or {value, unit}");
    if (v.at("unit").get<std::string>() != required_unit)
        throw ConfigError("config key '" + key + "': unit must be '" + required_unit + "'");
    return v.at("value").get<double>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& scope) {
    for (const auto& [k, _] : obj.items())
        if (!allowed.count(k))
            throw ConfigError("config key '" + (scope.empty() ? k : scope + "." + k) + "' is unknown");
}

} // namespace

SweepSpec ScenarioConfig::sweep_spec(int threads) const {
    SweepSpec s;
    s.protocol = protocol;
    s.a = a;
    s.gamma = gamma;
    s.t_f = t_f;
    s.coupling = coupling;
    s.lambda = lambdas.empty() ? 0.0 : lambdas.front();
    s.lab.box_half_width = box_half_width;
    s.lab.n_x = n_x;
    s.lab.design_samples = design_samples;
    s.lab.prop_steps = prop_steps;
    s.lab.extraction_stride = extraction_stride;
    s.lab.unperturbed_initial = (initial_state == "unperturbed");
    s.lab.two_mode = two_mode;
    s.lab.criteria = criteria;
    s.lab.threads = threads;
    return s;
}

ScenarioConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");

    reject_unknown(j, {"protocol", "a", "omega", "mass", "t_f", "gamma", "gN", "lambda",
                       "resolution", "two_mode", "criteria", "initial_state", "deterministic",
                       "output"},
                   "");
    if (!j.contains("protocol")) throw ConfigError("config key 'protocol' is missing");

    ScenarioConfig c;
    c.protocol = j.at("protocol").get<std::string>();
    if (c.protocol != "two_bump" && c.protocol != "three_term" && c.protocol != "bec")
        throw ConfigError("config key 'protocol': unknown protocol '" + c.protocol + "'");

    if (j.contains("mass")) c.units.mass_kg = plain_unit(j["mass"], "mass", "kg");
    if (j.contains("omega")) c.units.omega_rad_s = plain_unit(j["omega"], "omega", "rad/s");

    c.a = j.contains("a") ? unit_value(j["a"], "a", "length", c.units)
                          : c.units.length_from_si(4e-6);
    c.t_f = j.contains("t_f") ? unit_value(j["t_f"], "t_f", "time", c.units)
                              : c.units.time_from_si(0.320);
    if (j.contains("gamma")) c.gamma = unit_value(j["gamma"], "gamma", "length", c.units);
    if (j.contains("gN")) c.coupling = j.at("gN").get<double>();
    if (j.contains("lambda")) {
        c.lambdas.clear();
        if (!j["lambda"].is_array()) throw ConfigError("config key 'lambda' must be an array");
        for (const auto& v : j["lambda"]) c.lambdas.push_back(unit_value(v, "lambda", "energy", c.units));
    }

    if (j.contains("resolution")) {
        const json& r = j["resolution"];
        reject_unknown(r, {"L", "n_x", "design_samples", "prop_steps", "extraction_stride"},
                       "resolution");
        if (r.contains("L")) c.box_half_width = r.at("L").get<double>();
        if (r.contains("n_x")) c.n_x = r.at("n_x").get<int>();
        if (r.contains("design_samples")) c.design_samples = r.at("design_samples").get<int>();
        if (r.contains("prop_steps")) c.prop_steps = r.at("prop_steps").get<long>();
        if (r.contains("extraction_stride")) c.extraction_stride = r.at("extraction_stride").get<int>();
    }
    if (j.contains("two_mode")) c.two_mode = j.at("two_mode").get<bool>();
    if (j.contains("criteria")) c.criteria = j.at("criteria").get<bool>();
    if (j.contains("initial_state")) {
        c.initial_state = j.at("initial_state").get<std::string>();
        if (c.initial_state != "perturbed" && c.initial_state != "unperturbed")
            throw ConfigError("config key 'initial_state' must be 'perturbed' or 'unperturbed'");
    }
    if (j.contains("deterministic")) {
        c.deterministic = j.at("deterministic").get<bool>();
        if (!c.deterministic)
            throw ConfigError("config key 'deterministic': this build is always deterministic");
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        reject_unknown(o, {"trace_format", "trace_stride", "psi_stride"}, "output");
        if (o.contains("trace_format")) {
            c.trace_format = o.at("trace_format").get<std::string>();
            if (c.trace_format != "csv" && c.trace_format != "bin")
                throw ConfigError("config key 'output.trace_format' must be 'csv' or 'bin'");
        }
        if (o.contains("trace_stride")) c.trace_stride = o.at("trace_stride").get<int>();
        if (o.contains("psi_stride")) c.psi_stride = o.at("psi_stride").get<long>();
    }

    if (c.n_x < 5 || c.n_x % 2 == 0) throw ConfigError("config key 'resolution.n_x' must be odd and >= 5");
    if (!(c.t_f > 0.0)) throw ConfigError("config key 't_f' must be positive");
    if (c.a < 0.0) throw ConfigError("config key 'a' must be nonnegative");
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
    json j;
    j["protocol"] = c.protocol;
    j["mass"] = {{"value", c.units.mass_kg}, {"unit", "kg"}};
    j["omega"] = {{"value", c.units.omega_rad_s}, {"unit", "rad/s"}};
    j["a"] = {{"value", c.a}, {"unit", "dimensionless"}};
    j["t_f"] = {{"value", c.t_f}, {"unit", "dimensionless"}};
    j["gamma"] = c.gamma;
    j["gN"] = c.coupling;
    j["lambda"] = c.lambdas;
    j["resolution"] = {{"L", c.box_half_width},
                       {"n_x", c.n_x},
                       {"design_samples", c.design_samples},
                       {"prop_steps", c.prop_steps},
                       {"extraction_stride", c.extraction_stride}};
    j["two_mode"] = c.two_mode;
    j["criteria"] = c.criteria;
    j["initial_state"] = c.initial_state;
    j["deterministic"] = c.deterministic;
    j["output"] = {{"trace_format", c.trace_format},
                   {"trace_stride", c.trace_stride},
                   {"psi_stride", c.psi_stride}};
    return j.dump(2);
}

} // namespace ffsplit
