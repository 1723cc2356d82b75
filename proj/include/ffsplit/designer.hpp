#pragma once

#include <vector>

#include "ffsplit/grid.hpp"
#include "ffsplit/protocols.hpp"
#include "ffsplit/trace.hpp"

namespace ffsplit {

// Phase solution of the zero-imaginary-potential condition: the
// continuity reduction d/dx (r^2 phi_x) = -d(r^2)/dt is integrated from
// the left boundary with zero flux, and the gauge phi(0,t) = 0 is fixed
// at the central node. Below the reliability threshold on r^2, phi_x is
// extended constantly from the last reliable node.
struct PhaseSolution {
    std::vector<double> phi;     // (samples) x (n_x), row major
    std::vector<double> phi_x;
    std::vector<int> lo, hi;     // reliable interval per time sample
    double mu0 = 0.0, mu_tf = 0.0;  // endpoint chemical potentials above min(V)

    double at(int k, int i, int n) const { return phi[static_cast<std::size_t>(k) * n + i]; }
};

struct DesignError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

PhaseSolution solve_phase(const DensityProtocol& p, const Grid& g, const TimeMesh& m);

// V = -phi_t + (r_xx / r - phi_x^2) / 2 - gN r^2, evaluated on reliable
// nodes and clamped to the edge value outside; phi_t by second-order time
// differences. Fills the endpoint chemical potentials of the phase.
PotentialTrace assemble_potential(const DensityProtocol& p, PhaseSolution& phase,
                                  const Grid& g, const TimeMesh& m, double coupling);

struct ConsistencyReport {
    double residual0 = 0.0;   // ||(T + V + gN r^2 - mu) r|| at t = 0
    double residual_tf = 0.0;
    double mu0 = 0.0;         // measured from the potential minimum
    double mu_tf = 0.0;
    double max_phix_0 = 0.0;  // stationarity of the endpoint phases
    double max_phix_tf = 0.0;
    bool ok(double tol) const { return residual0 < tol && residual_tf < tol; }
};

// Verifies that r(.,0) and r(.,t_f) solve the stationary (GP) eigenproblem
// for the assembled endpoints. A large residual is a design-failure
// diagnostic, not an exception.
ConsistencyReport endpoint_consistency(const PotentialTrace& trace, const PhaseSolution& phase,
                                       const DensityProtocol& p);

// Residual of the imaginary part of the inverted potential,
// rdot/r + (2 phi_x r_x / r + phi_xx) / 2, on the reliable interval of
// time sample k. Should vanish by construction of solve_phase.
RealField imaginary_residual(const DensityProtocol& p, const PhaseSolution& phase,
                             const Grid& g, const TimeMesh& m, int k);

// One-call design pipeline.
struct DesignResult {
    PotentialTrace trace;
    PhaseSolution phase;
    ConsistencyReport consistency;
};

DesignResult design_potential(const DensityProtocol& p, const Grid& g, const TimeMesh& m,
                              double coupling);

} // namespace ffsplit
