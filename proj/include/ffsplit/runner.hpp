#pragma once

#include <string>
#include <vector>

#include "ffsplit/config.hpp"

namespace ffsplit {

struct RunnerOptions {
    std::string out_dir = ".";
    int threads = 1;
    double resolution_scale = 1.0;
};

// Resolution knobs multiplied by k (n_x kept odd, floors applied).
ScenarioConfig scaled(ScenarioConfig cfg, double k);

// Default perturbation grids of the figure-reproduction commands
// (dimensionless t_f). The linear-case grid spans from well below the
// structural transition up into the adiabatic recovery of F_D; the BEC
// grid sits an order of magnitude higher where its F_D0 plateau ends.
std::vector<double> fig2_lambda_grid(double t_f);
std::vector<double> fig4_lambda_grid(double t_f);
std::vector<double> fig5_coupling_grid();

int cmd_design(const ScenarioConfig& cfg, const RunnerOptions& opts);
int cmd_evolve(const ScenarioConfig& cfg, const RunnerOptions& opts);
int cmd_sweep(const ScenarioConfig& cfg, const RunnerOptions& opts);
int cmd_twomode(const ScenarioConfig& cfg, const RunnerOptions& opts);
int cmd_reproduce_fig2(const ScenarioConfig& cfg, const RunnerOptions& opts);
int cmd_reproduce_fig4(const ScenarioConfig& cfg, const RunnerOptions& opts);
int cmd_reproduce_fig5(const ScenarioConfig& cfg, const RunnerOptions& opts);

int run_command(const std::string& cmd, const ScenarioConfig& cfg, const RunnerOptions& opts);

} // namespace ffsplit
