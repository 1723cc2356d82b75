#include "ffsplit/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ffsplit {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

namespace {
std::ofstream open_or_throw(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    return out;
}
} // namespace

void write_trace_csv(const PotentialTrace& trace, const std::string& path, int stride) {
    if (stride < 1) stride = 1;
    auto out = open_or_throw(path);
    out << "t,x,V\n";
    const Grid& g = trace.grid();
    const TimeMesh& m = trace.mesh();
    for (int k = 0; k < m.samples(); k += stride) {
        const std::string ts = format_double(m.t(k));
        for (int i = 0; i < g.size(); ++i)
            out << ts << ',' << format_double(g.x(i)) << ',' << format_double(trace.at(k, i)) << '\n';
    }
}

void write_trace_bin(const PotentialTrace& trace, const std::string& path) {
    auto out = open_or_throw(path, std::ios::out | std::ios::binary);
    const std::int64_t nt = trace.mesh().samples();
    const std::int64_t nx = trace.grid().size();
    out.write(reinterpret_cast<const char*>(&nt), sizeof nt);
    out.write(reinterpret_cast<const char*>(&nx), sizeof nx);
    for (int k = 0; k < nt; ++k)
        out.write(reinterpret_cast<const char*>(trace.slice_ptr(k)), nx * sizeof(double));
}

void write_manifest(const PotentialTrace& trace, const ScenarioConfig& cfg,
                    const ConsistencyReport& consistency, const std::string& path) {
    json j;
    j["units"] = {{"mass_kg", cfg.units.mass_kg},
                  {"omega_rad_s", cfg.units.omega_rad_s},
                  {"oscillator_length_m", cfg.units.oscillator_length_m()},
                  {"energy_quantum_J", cfg.units.energy_quantum_J()},
                  {"time_unit_s", cfg.units.time_unit_s()}};
    j["protocol"] = {{"kind", trace.meta.protocol},
                     {"a", trace.meta.separation},
                     {"gamma", cfg.gamma},
                     {"t_f", trace.mesh().t_final()},
                     {"gN", trace.meta.coupling},
                     {"lambda", trace.meta.lambda}};
    j["thresholds"] = {{"eps_r", trace.meta.eps_r}};
    j["resolution"] = {{"L", trace.grid().half_width()},
                       {"n_x", trace.grid().size()},
                       {"design_samples", trace.mesh().steps()}};
    j["endpoint_consistency"] = {{"residual_0", consistency.residual0},
                                 {"residual_tf", consistency.residual_tf},
                                 {"mu_0", consistency.mu0},
                                 {"mu_tf", consistency.mu_tf}};
    j["binary_layout"] = "int64 n_time_samples, int64 n_x, float64 V[t][x] row-major, little-endian";
    auto out = open_or_throw(path);
    out << j.dump(2) << '\n';
}

void write_sweep_csv(const std::vector<FidelityReport>& rows, const std::string& path) {
    auto out = open_or_throw(path);
    out << "lambda,tf,gN,F_S,F_D0,F_D,F_I,F_S_2m,F_D0_2m,F_D_2m,sudden_metric,adiabatic_metric\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const auto& r : rows) {
        out << format_double(r.lambda) << ',' << format_double(r.t_f) << ','
            << format_double(r.coupling) << ',' << format_double(r.F_S) << ','
            << format_double(r.F_D0) << ',' << format_double(r.F_D) << ','
            << format_double(r.F_I) << ',' << opt(r.F_S_2m) << ',' << opt(r.F_D0_2m) << ','
            << opt(r.F_D_2m) << ',' << opt(r.sudden) << ',' << opt(r.adiabatic) << '\n';
    }
}

void write_sweep_summary(const std::vector<FidelityReport>& rows, const ScenarioConfig& cfg,
                         const std::string& path) {
    json j;
    j["scenario"] = json::parse(serialize_config(cfg));
    j["rows"] = json::array();
    for (const auto& r : rows) {
        json row = {{"lambda", r.lambda}, {"tf", r.t_f},    {"gN", r.coupling},
                    {"F_S", r.F_S},       {"F_D0", r.F_D0}, {"F_D", r.F_D},
                    {"F_I", r.F_I}};
        if (r.F_S_2m) row["F_S_2m"] = *r.F_S_2m;
        if (r.F_D0_2m) row["F_D0_2m"] = *r.F_D0_2m;
        if (r.F_D_2m) row["F_D_2m"] = *r.F_D_2m;
        if (r.sudden) row["sudden_metric"] = *r.sudden;
        if (r.adiabatic) row["adiabatic_metric"] = *r.adiabatic;
        if (!r.error.empty()) row["error"] = r.error;
        j["rows"].push_back(std::move(row));
    }
    auto out = open_or_throw(path);
    out << j.dump(2) << '\n';
}

void write_extraction_csv(const TwoModeSystem& sys, const std::string& path) {
    auto out = open_or_throw(path);
    out << "t,delta,lambda_prime,V0,E_minus,E_plus\n";
    for (std::size_t j = 0; j < sys.times.size(); ++j) {
        out << format_double(sys.times[j]) << ',' << format_double(sys.delta[j]) << ','
            << format_double(sys.lambda_prime[j]) << ',' << format_double(sys.v0[j]) << ','
            << format_double(sys.e_minus[j]) << ',' << format_double(sys.e_plus[j]) << '\n';
    }
}

} // namespace ffsplit
