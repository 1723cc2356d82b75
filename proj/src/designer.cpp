#include "ffsplit/designer.hpp"

#include <algorithm>
#include <cmath>

#include "ffsplit/numerics.hpp"
#include "ffsplit/solver.hpp"

namespace ffsplit {

namespace {
constexpr double kEpsR = 1e-12;  // reliability threshold, relative to max r^2

void reliable_interval(const RealField& rho, double thresh, int& lo, int& hi) {
    const int n = static_cast<int>(rho.size());
    lo = 0;
    hi = n - 1;
    while (lo < n && rho[lo] < thresh) ++lo;
    while (hi >= 0 && rho[hi] < thresh) --hi;
    if (lo >= hi) throw DesignError("solve_phase: no reliable nodes (density underresolved)");
}

// Cumulative trapezoid with two Euler-Maclaurin end corrections, lifting
// the antiderivative to O(dx^6) with errors local to the evaluation
// point. The plain rule leaves an O(dx^2) error that the division by r^2
// in the phase solve amplifies well past the design tolerances.
RealField cumulative_integral_ec(const RealField& f, const Grid& g) {
    RealField F = cumulative_integral(f, g);
    const RealField d1 = first_derivative(f, g);
    const RealField d3 = first_derivative(second_derivative(f, g), g);
    const double h2 = g.dx() * g.dx();
    const double c1 = h2 / 12.0, c3 = h2 * h2 / 720.0;
    for (std::size_t i = 0; i < F.size(); ++i)
        F[i] += -c1 * (d1[i] - d1[0]) + c3 * (d3[i] - d3[0]);
    return F;
}

bool mirror_even(const RealField& f, const Grid& g, double tol) {
    double scale = 0.0;
    for (double v : f) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < g.size() / 2; ++i)
        if (std::abs(f[i] - f[g.mirror_index(i)]) > tol * (scale + 1e-300)) return false;
    return true;
}
} // namespace

PhaseSolution solve_phase(const DensityProtocol& p, const Grid& g, const TimeMesh& m) {
    const int n = g.size();
    PhaseSolution sol;
    sol.phi.assign(static_cast<std::size_t>(m.samples()) * n, 0.0);
    sol.phi_x.assign(static_cast<std::size_t>(m.samples()) * n, 0.0);
    sol.lo.assign(m.samples(), 0);
    sol.hi.assign(m.samples(), n - 1);

    RealField rho(n), drho(n), phix(n);
    for (int k = 0; k < m.samples(); ++k) {
        const double t = m.t(k);
        double rho_max = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = p.amplitude(g.x(i), t);
            rho[i] = r * r;
            rho_max = std::max(rho_max, rho[i]);
            drho[i] = p.density_dt(g.x(i), t);
        }
        const double flux = integrate(drho, g);
        if (std::abs(flux) > 1e-6)
            throw DesignError("solve_phase: protocol normalization drifts, net flux " +
                              std::to_string(flux));

        int lo, hi;
        reliable_interval(rho, kEpsR * rho_max, lo, hi);
        sol.lo[k] = lo;
        sol.hi[k] = hi;

        const RealField S = cumulative_integral_ec(drho, g);
        for (int i = lo; i <= hi; ++i) phix[i] = -S[i] / rho[i];
        for (int i = 0; i < lo; ++i) phix[i] = phix[lo];
        for (int i = hi + 1; i < n; ++i) phix[i] = phix[hi];

        // The continuity source of a mirror-symmetric slice is even, so
        // phi_x is odd; enforce it to kill the roundoff amplified by the
        // tiny densities at the reliability edges.
        if (mirror_even(rho, g, 1e-11) && mirror_even(drho, g, 1e-11)) {
            for (int i = 0; i < n / 2; ++i) {
                const double odd = 0.5 * (phix[i] - phix[g.mirror_index(i)]);
                phix[i] = odd;
                phix[g.mirror_index(i)] = -odd;
            }
            phix[g.center_index()] = 0.0;
        }

        RealField phi = cumulative_integral_ec(phix, g);
        const double gauge = phi[g.center_index()];
        for (int i = 0; i < n; ++i) phi[i] -= gauge;

        std::copy(phix.begin(), phix.end(), sol.phi_x.begin() + static_cast<std::size_t>(k) * n);
        std::copy(phi.begin(), phi.end(), sol.phi.begin() + static_cast<std::size_t>(k) * n);
    }
    return sol;
}

PotentialTrace assemble_potential(const DensityProtocol& p, PhaseSolution& phase,
                                  const Grid& g, const TimeMesh& m, double coupling) {
    const int n = g.size();
    PotentialTrace trace(g, m);
    trace.meta.protocol = p.name();
    trace.meta.separation = p.separation();
    trace.meta.coupling = coupling;
    trace.meta.eps_r = kEpsR;

    const double dt = m.dt();
    auto phi_at = [&](int k, int i) { return phase.phi[static_cast<std::size_t>(k) * n + i]; };

    RealField r(n), rxx(n);
    for (int k = 0; k < m.samples(); ++k) {
        const double t = m.t(k);
        for (int i = 0; i < n; ++i) {
            r[i] = p.amplitude(g.x(i), t);
            rxx[i] = p.amplitude_dxx(g.x(i), t);
        }
        // Endpoint slices are assembled in their stationary limit: the
        // exact phi_t there keeps an x-dependent piece of order
        // x0''(t) ~ a/t_f^2 (the cubic ramp does not switch acceleration
        // off), and the boundary Hamiltonians are meant to hold the
        // boundary states as eigenstates. With the phi(0,t) = 0 gauge the
        // stationary limit of phi_t is zero.
        const bool endpoint = (k == 0 || k == m.steps());
        const int lo = phase.lo[k], hi = phase.hi[k];
        for (int i = lo; i <= hi; ++i) {
            double phidot = 0.0;
            if (!endpoint) phidot = (phi_at(k + 1, i) - phi_at(k - 1, i)) / (2.0 * dt);
            const double phix = phase.phi_x[static_cast<std::size_t>(k) * n + i];
            trace.at(k, i) = -phidot + 0.5 * (rxx[i] / r[i] - phix * phix) - coupling * r[i] * r[i];
        }
        for (int i = 0; i < lo; ++i) trace.at(k, i) = trace.at(k, lo);
        for (int i = hi + 1; i < n; ++i) trace.at(k, i) = trace.at(k, hi);
        trace.set_reliable(k, lo, hi);
    }

    // Endpoint chemical potentials, measured from the potential minimum
    // (the gauge phi(0,t) = 0 puts the eigenvalue itself at zero).
    auto mu_of = [&](int k) {
        RealField rk(n);
        for (int i = 0; i < n; ++i) rk[i] = p.amplitude(g.x(i), m.t(k));
        normalize(rk, g);
        const auto [res, mu_gauge] = stationary_residual(rk, trace.slice(k), coupling, g);
        (void)res;
        const RealField v = trace.slice(k);
        return mu_gauge - *std::min_element(v.begin(), v.end());
    };
    phase.mu0 = mu_of(0);
    phase.mu_tf = mu_of(m.steps());
    return trace;
}

ConsistencyReport endpoint_consistency(const PotentialTrace& trace, const PhaseSolution& phase,
                                       const DensityProtocol& p) {
    const Grid& g = trace.grid();
    const TimeMesh& m = trace.mesh();
    const int n = g.size();
    ConsistencyReport rep;

    auto eval = [&](int k, double& residual, double& mu, double& max_phix) {
        RealField r(n);
        for (int i = 0; i < n; ++i) r[i] = p.amplitude(g.x(i), m.t(k));
        normalize(r, g);
        const auto [res, mu_gauge] = stationary_residual(r, trace.slice(k), trace.meta.coupling, g);
        residual = res;
        const RealField v = trace.slice(k);
        mu = mu_gauge - *std::min_element(v.begin(), v.end());
        max_phix = 0.0;
        for (int i = phase.lo[k]; i <= phase.hi[k]; ++i)
            max_phix = std::max(max_phix, std::abs(phase.phi_x[static_cast<std::size_t>(k) * n + i]));
    };
    eval(0, rep.residual0, rep.mu0, rep.max_phix_0);
    eval(m.steps(), rep.residual_tf, rep.mu_tf, rep.max_phix_tf);
    return rep;
}

RealField imaginary_residual(const DensityProtocol& p, const PhaseSolution& phase,
                             const Grid& g, const TimeMesh& m, int k) {
    const int n = g.size();
    const double t = m.t(k);
    RealField phix(phase.phi_x.begin() + static_cast<std::size_t>(k) * n,
                   phase.phi_x.begin() + static_cast<std::size_t>(k + 1) * n);
    const RealField phixx = first_derivative(phix, g);
    RealField out(n, 0.0);
    for (int i = phase.lo[k]; i <= phase.hi[k]; ++i) {
        const double r = p.amplitude(g.x(i), t);
        const double rx = p.amplitude_dx(g.x(i), t);
        const double rdot = p.density_dt(g.x(i), t) / (2.0 * r);
        out[i] = rdot / r + 0.5 * (2.0 * phix[i] * rx / r + phixx[i]);
    }
    return out;
}

DesignResult design_potential(const DensityProtocol& p, const Grid& g, const TimeMesh& m,
                              double coupling) {
    PhaseSolution phase = solve_phase(p, g, m);
    PotentialTrace trace = assemble_potential(p, phase, g, m, coupling);
    ConsistencyReport rep = endpoint_consistency(trace, phase, p);
    return {std::move(trace), std::move(phase), rep};
}

} // namespace ffsplit
