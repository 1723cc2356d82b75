#pragma once

#include <string>
#include <vector>

#include "ffsplit/config.hpp"
#include "ffsplit/designer.hpp"
#include "ffsplit/splitting.hpp"
#include "ffsplit/two_mode.hpp"

namespace ffsplit {

// Shortest round-trippable decimal representation, used by every CSV
// writer so that identical configs give byte-identical files.
std::string format_double(double v);

// Long CSV: header "t,x,V", one row per (t_k, x_i); time samples thinned
// by `stride`.
void write_trace_csv(const PotentialTrace& trace, const std::string& path, int stride = 1);

// Columnar binary: int64 n_time_samples, int64 n_x, then row-major
// little-endian float64 V[t][x].
void write_trace_bin(const PotentialTrace& trace, const std::string& path);

void write_manifest(const PotentialTrace& trace, const ScenarioConfig& cfg,
                    const ConsistencyReport& consistency, const std::string& path);

// Exact header:
// lambda,tf,gN,F_S,F_D0,F_D,F_I,F_S_2m,F_D0_2m,F_D_2m,sudden_metric,adiabatic_metric
void write_sweep_csv(const std::vector<FidelityReport>& rows, const std::string& path);

void write_sweep_summary(const std::vector<FidelityReport>& rows, const ScenarioConfig& cfg,
                         const std::string& path);

// Header: t,delta,lambda_prime,V0,E_minus,E_plus
void write_extraction_csv(const TwoModeSystem& sys, const std::string& path);

} // namespace ffsplit
