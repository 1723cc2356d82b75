#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "ffsplit/grid.hpp"
#include "ffsplit/numerics.hpp"
#include "ffsplit/solver.hpp"
#include "ffsplit/trace.hpp"

namespace ffsplit {

// Moving left/right localized basis built from the instantaneous ground
// and excited states of the unperturbed fast-forward Hamiltonian:
// L = (psi- + psi+)/sqrt2, R = (psi- - psi+)/sqrt2, with psi- >= 0 and
// the psi+ sign fixed so that R is right-localized.
struct BareBasis {
    std::vector<double> times;
    std::vector<RealField> left, right;
};

struct TwoModeSystem {
    std::vector<double> times;
    std::vector<double> delta;         // tunneling rate, (E+ - E-)/hbar
    std::vector<double> delta_cross;   // -2 <R|H_lambda|L>/hbar
    std::vector<double> lambda_prime;  // (H^RR - H^LL)/hbar
    std::vector<double> v0;            // (H^RR + H^LL)/2
    std::vector<double> e_minus, e_plus;
    double lambda_m = 0.0;             // bias rate = lambda_energy/hbar
    double t_f = 0.0;
    bool routes_warning = false;       // cross-check deviation > 5% where delta > 1e-4

    double delta_at(double t) const { return interp_(t); }
    double lambda_prime_at(double t) const { return interp_lp_(t); }
    void build_interpolants();

private:
    MonotoneCubic interp_, interp_lp_;
};

struct TwoModeState {
    std::complex<double> c_right{0.0, 0.0};
    std::complex<double> c_left{0.0, 0.0};
    double norm() const { return std::sqrt(std::norm(c_right) + std::norm(c_left)); }
};

// Instantaneous eigenpairs per mesh time of the unperturbed trace
// (gN = 0 spectrum). Throws on degenerate input at t = 0.
std::vector<std::array<EigenPair, 2>> slice_pairs(const PotentialTrace& trace, int stride = 1,
                                                  int threads = 1);

std::vector<double> strided_times(const TimeMesh& m, int stride);

BareBasis extract_bare_basis(const std::vector<std::array<EigenPair, 2>>& pairs,
                             const Grid& g, std::vector<double> times);

// delta(t) from the energy splitting, cross-checked against the H_lambda
// matrix elements in the bare basis; also extracts lambda'(t) and V0(t).
TwoModeSystem extract_delta(const std::vector<std::array<EigenPair, 2>>& pairs,
                            const BareBasis& basis, const PotentialTrace& unperturbed,
                            double lambda, const Grid& g);

struct TwoModeEigen {
    double e_minus, e_plus;
    double alpha;                       // mixing angle in (0, pi), tan(alpha) = delta/lambda
    std::array<double, 2> v_minus;      // (c_R, c_L) components
    std::array<double, 2> v_plus;
};

TwoModeEigen analytic_eigensystem(double delta, double lambda_m);

// Ground state of H(0) for the given bias.
TwoModeState two_mode_ground(const TwoModeSystem& sys);

struct TwoModeEvolveOptions {
    long steps = 200000;
    bool use_lambda_prime = false;  // replace the constant bias by lambda'(t)
    std::optional<TwoModeState> initial;
};

// RK4 integration of i hbar dc/dt = H(t) c in the moving bare basis (the
// geometric term K_A vanishes by mirror symmetry).
TwoModeState evolve_two_mode(const TwoModeSystem& sys, const TwoModeEvolveOptions& opts = {});

struct TwoModeFidelities {
    double F_S, F_D0, F_D;
};

TwoModeFidelities two_mode_fidelities(const TwoModeSystem& sys, const TwoModeState& c_final);

struct SuddenReport {
    double metric;        // lambda_m * t_f / 2
    double delta_h_bar;   // sqrt(<Hbar^2> - <Hbar>^2) in the initial state (1,1)/sqrt2
};

SuddenReport sudden_metric(const TwoModeSystem& sys);

double adiabatic_metric(const TwoModeSystem& sys);

// Max |<beta(t)| d/dt |beta'(t)>| over the basis pairs; should vanish by
// the mirror symmetry of L and R.
double max_geometric_coupling(const BareBasis& basis, const Grid& g);

} // namespace ffsplit
