#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "ffsplit/grid.hpp"
#include "ffsplit/trace.hpp"

namespace ffsplit {

struct EigenPair {
    double energy = 0.0;   // in units of hbar*omega (chemical potential for gN > 0)
    RealField psi;         // trapezoid-normalized, real
    int index = 0;         // 0 = ground, 1 = first excited, ...
};

struct WaveState {
    ComplexField psi;
    void normalize_in(const Grid& g);
};

// H = -1/2 d2/dx2 (5-point, Dirichlet) + diag(V), symmetric banded with
// bandwidth 2. Shared by the eigensolver, the propagator and the matrix
// elements of the two-mode extraction.
class BandedHamiltonian {
public:
    BandedHamiltonian(const RealField& V, const Grid& g);

    void apply(const RealField& in, RealField& out) const;
    void apply(const ComplexField& in, ComplexField& out) const;
    double expectation(const RealField& psi, const Grid& g) const;

    int size() const { return n_; }
    double diag(int i) const { return d_[i]; }
    double off1() const { return e1_; }
    double off2() const { return e2_; }

private:
    int n_;
    std::vector<double> d_;
    double e1_, e2_;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Lowest k eigenpairs of T + V (gN = 0) via a banded symmetric
// eigensolver. For exactly mirror-symmetric V the near-degenerate pairs
// are purified to definite parity (state j has parity (-1)^j in 1D).
std::vector<EigenPair> lowest_eigenpairs(const RealField& V, int k, const Grid& g);

struct GpOptions {
    std::vector<double> dtau_schedule = {1e-3};
    double energy_tol = 1e-10;       // |dE| per unit imaginary time
    double residual_target = 5e-9;   // for the self-consistent polish
    long max_iter = 1000000;
    std::optional<RealField> guess;
    bool require_convergence = true;
};

struct GpResult {
    RealField psi;
    double mu = 0.0;
    double energy = 0.0;
    double residual = 0.0;
    long iterations = 0;
};

// Self-consistent GP ground state by normalized imaginary-time evolution
// of H = T + V + gN |psi|^2, with a decreasing-step schedule to push the
// splitting bias below the residual target.
GpResult gp_ground_state(const RealField& V, double coupling, const Grid& g,
                         const GpOptions& opts = {});

// Lowest eigenpairs dispatch: banded solver for gN = 0, imaginary-time GP
// ground state (k = 1 only) for gN > 0.
std::vector<EigenPair> lowest_eigenpairs(const RealField& V, int k, const Grid& g, double coupling);

// Stationary residual ||(T + V + gN psi^2 - mu) psi||_2 and Rayleigh mu.
std::pair<double, double> stationary_residual(const RealField& psi, const RealField& V,
                                              double coupling, const Grid& g);

struct PropagateOptions {
    long steps = 1 << 17;
    double coupling = 0.0;
    // Called after every `dump_stride` steps with (t, psi); 0 disables.
    long dump_stride = 0;
    std::function<void(double, const ComplexField&)> observer;
};

// Second-order split-step propagation under the time-interpolated trace:
// half potential kick, Crank-Nicolson (Cayley) kinetic step on the
// 5-point Laplacian, half potential kick. The kinetic half is exactly
// unitary, so the norm is conserved to roundoff.
WaveState propagate(const WaveState& psi0, const PotentialTrace& trace,
                    const PropagateOptions& opts = {});

// Ground state of the potential slice at mesh time t.
EigenPair ground_state_of_slice(const PotentialTrace& trace, double t, double coupling = 0.0);

} // namespace ffsplit
