#pragma once

#include <string>
#include <vector>

#include "ffsplit/splitting.hpp"
#include "ffsplit/units.hpp"

namespace ffsplit {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parsed scenario configuration, all numbers already dimensionless.
// Defaults reproduce the paper-scale splitting: a = 4 um, omega = 780
// rad/s, m = 1.44e-25 kg, t_f = 320 ms, lambda = [0].
struct ScenarioConfig {
    Units units;
    std::string protocol = "two_bump";
    double a = 0.0;            // half separation, oscillator lengths
    double gamma = 1.0;        // inverse width, 1/oscillator length
    double t_f = 0.0;          // duration, 1/omega units
    double coupling = 0.0;     // gN / (hbar omega a_ho)
    std::vector<double> lambdas = {0.0};

    double box_half_width = 12.0;
    int n_x = 513;
    int design_samples = 4000;
    long prop_steps = 1 << 17;
    int extraction_stride = 8;

    bool two_mode = false;
    bool criteria = false;
    std::string initial_state = "perturbed";  // or "unperturbed"
    bool deterministic = true;

    std::string trace_format = "csv";  // or "bin"
    int trace_stride = 20;             // time-sample stride for CSV traces
    long psi_stride = 0;               // trajectory dump stride, 0 = off

    SweepSpec sweep_spec(int threads = 1) const;
};

// Parse the JSON configuration text (grammar documented in the README).
// Unknown keys, malformed unit tags and missing protocols are rejected
// with the offending key named.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// Canonical dimensionless serialization; parse(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& c);

} // namespace ffsplit
