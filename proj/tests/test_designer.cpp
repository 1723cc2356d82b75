#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ffsplit/designer.hpp"
#include "ffsplit/numerics.hpp"
#include "ffsplit/solver.hpp"
#include "fixtures.hpp"

using namespace ffsplit;
using namespace ffsplit::testing;

namespace {

// Rigid transport of the oscillator ground state along x0(t) = a R(s).
// The closed-form inversion is V = (x - x0)^2 / 2 - x0'' x - (1 + x0'^2)/2
// with phi_x = x0' uniformly.
class TransportProtocol final : public DensityProtocol {
public:
    TransportProtocol(double a, double t_f) : a_(a), ramp_{t_f} {}

    double amplitude(double x, double t) const override {
        const double u = x - a_ * ramp_.value(t);
        return std::pow(M_PI, -0.25) * std::exp(-0.5 * u * u);
    }
    double amplitude_dx(double x, double t) const override {
        const double u = x - a_ * ramp_.value(t);
        return -u * amplitude(x, t);
    }
    double amplitude_dxx(double x, double t) const override {
        const double u = x - a_ * ramp_.value(t);
        return (u * u - 1.0) * amplitude(x, t);
    }
    double density_dt(double x, double t) const override {
        const double u = x - a_ * ramp_.value(t);
        const double xdot = a_ * ramp_.rate(t);
        const double r = amplitude(x, t);
        return 2.0 * r * r * u * xdot;
    }
    double separation() const override { return a_; }
    double duration() const override { return ramp_.t_f; }
    double coupling() const override { return 0.0; }
    double normalization(double) const override { return 1.0; }
    std::string name() const override { return "transport"; }

    double accel(double t) const {
        const double s = t / ramp_.t_f;
        return a_ * (6.0 - 12.0 * s) / (ramp_.t_f * ramp_.t_f);
    }

private:
    double a_;
    Ramp ramp_;
};

} // namespace

TEST_CASE("phase vanishes for stationary slices") {
    const Grid& g = default_grid();
    const DesignResult& d = paper_design();
    const int n = g.size();
    for (int k : {0, 4000}) {
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(d.phase.phi_x[static_cast<std::size_t>(k) * n + i]) < 1e-8);
    }
    CHECK(d.consistency.max_phix_0 < 1e-8);
    CHECK(d.consistency.max_phix_tf < 1e-8);
}

TEST_CASE("rigid transport: uniform phase gradient and closed-form potential") {
    const Grid g(10.0, 401);
    const double a = 2.5, tf = 8.0;
    const TransportProtocol p(a, tf);
    const TimeMesh m(tf, 800);
    PhaseSolution phase = solve_phase(p, g, m);
    const PotentialTrace trace = assemble_potential(p, phase, g, m, 0.0);

    for (int k : {200, 400, 633}) {
        const double t = m.t(k);
        const double xdot = a * Ramp{tf}.rate(t);
        for (int i = phase.lo[k]; i <= phase.hi[k]; ++i) {
            CHECK(std::abs(phase.phi_x[static_cast<std::size_t>(k) * g.size() + i] - xdot) < 1e-6);
        }
        // V against the closed form on reliable nodes
        const double x0 = a * Ramp{tf}.value(t);
        const double c = -0.5 * (1.0 + xdot * xdot);
        for (int i = phase.lo[k]; i <= phase.hi[k]; ++i) {
            const double x = g.x(i);
            const double oracle = 0.5 * (x - x0) * (x - x0) - p.accel(t) * x + c;
            CHECK(trace.at(k, i) == doctest::Approx(oracle).epsilon(1e-3).scale(1.0));
        }
    }
}

TEST_CASE("static single Gaussian inverts to the harmonic trap") {
    const Grid& g = default_grid();
    const TwoBumpProtocol p(0.0, 1.0, 20.0);
    const TimeMesh m(20.0, 400);
    DesignResult d = design_potential(p, g, m, 0.0);

    const int k = 0;
    const int c = g.center_index();
    for (int i = d.phase.lo[k]; i <= d.phase.hi[k]; ++i) {
        const double x = g.x(i);
        CHECK(d.trace.at(k, i) - d.trace.at(k, c) ==
              doctest::Approx(0.5 * x * x).epsilon(1e-4).scale(1e-4));
    }
    CHECK(d.consistency.residual0 < 1e-6);
    CHECK(std::abs(d.consistency.mu0 - 0.5) < 1e-3);
    CHECK(std::abs(d.consistency.mu_tf - 0.5) < 1e-3);
}

TEST_CASE("two-bump design: parity, oddness of phase, endpoint residuals") {
    const Grid& g = default_grid();
    const DesignResult& d = paper_design();
    const int n = g.size();

    // phi_x odd at mid-protocol
    const int kmid = 2000;
    for (int i = 0; i < n; ++i) {
        const double v = d.phase.phi_x[static_cast<std::size_t>(kmid) * n + i];
        const double w = d.phase.phi_x[static_cast<std::size_t>(kmid) * n + g.mirror_index(i)];
        CHECK(std::abs(v + w) < 1e-9);
    }

    // potential parity on reliable nodes
    for (int k : {0, 1000, 2000, 3333, 4000}) {
        for (int i = d.trace.reliable_lo(k); i <= d.trace.reliable_hi(k); ++i) {
            const int j = g.mirror_index(i);
            if (j < d.trace.reliable_lo(k) || j > d.trace.reliable_hi(k)) continue;
            CHECK(std::abs(d.trace.at(k, i) - d.trace.at(k, j)) < 1e-9);
        }
    }

    CHECK(d.consistency.residual0 < 1e-5);
    CHECK(d.consistency.residual_tf < 1e-5);

    // the final potential is a double well: two minima near +-a and a
    // barrier at the center
    const RealField vf = d.trace.slice(4000);
    const int c = g.center_index();
    const int ia = c + static_cast<int>(std::lround(kSeparation / g.dx()));
    CHECK(vf[c] > vf[ia] + 1.0);
    int minima = 0;
    for (int i = d.trace.reliable_lo(4000) + 1; i < d.trace.reliable_hi(4000); ++i)
        if (vf[i] < vf[i - 1] && vf[i] < vf[i + 1]) ++minima;
    CHECK(minima == 2);
}

TEST_CASE("imaginary part of the inverted potential vanishes") {
    const Grid& g = default_grid();
    const DesignResult& d = paper_design();
    const TimeMesh m(kDuration, 4000);
    const TwoBumpProtocol p(kSeparation, 1.0, kDuration);
    for (int k : {777, 2000, 3500}) {
        const RealField res = imaginary_residual(p, d.phase, g, m, k);
        for (double v : res) CHECK(std::abs(v) < 1e-6);
    }
}

TEST_CASE("continuity equation residual of the phase solve") {
    const Grid& g = default_grid();
    const DesignResult& d = paper_design();
    const TwoBumpProtocol p(kSeparation, 1.0, kDuration);
    const TimeMesh m(kDuration, 4000);
    const int n = g.size();
    for (int k : {1234, 2000, 2900}) {
        const double t = m.t(k);
        RealField flux(n);
        for (int i = 0; i < n; ++i) {
            const double r = p.amplitude(g.x(i), t);
            flux[i] = r * r * d.phase.phi_x[static_cast<std::size_t>(k) * n + i];
        }
        const RealField dflux = first_derivative(flux, g);
        for (int i = d.phase.lo[k] + 2; i <= d.phase.hi[k] - 2; ++i)
            CHECK(std::abs(dflux[i] + p.density_dt(g.x(i), t)) < 1e-6);
    }
}

TEST_CASE("gauge shift of the phase moves the potential by a time function") {
    const Grid g(8.0, 201);
    const double tf = 6.0;
    const TwoBumpProtocol p(2.0, 1.0, tf);
    const TimeMesh m(tf, 300);
    PhaseSolution phase = solve_phase(p, g, m);
    const PotentialTrace base = assemble_potential(p, phase, g, m, 0.0);

    // phi -> phi + f(t) with f = sin(t): V must shift by -f'(t) = -cos(t)
    PhaseSolution shifted = phase;
    for (int k = 0; k < m.samples(); ++k)
        for (int i = 0; i < g.size(); ++i)
            shifted.phi[static_cast<std::size_t>(k) * g.size() + i] += std::sin(m.t(k));
    const PotentialTrace moved = assemble_potential(p, shifted, g, m, 0.0);
    for (int k : {50, 150, 250}) {
        for (int i = moved.reliable_lo(k); i <= moved.reliable_hi(k); ++i)
            CHECK(moved.at(k, i) - base.at(k, i) ==
                  doctest::Approx(-std::cos(m.t(k))).epsilon(1e-4));
    }
}

TEST_CASE("bec design endpoint consistency at gN = 1.38") {
    const Grid& g = default_grid();
    RealField trap(g.size());
    for (int i = 0; i < g.size(); ++i) trap[i] = 0.5 * g.x(i) * g.x(i);
    const double gn = 1.38;
    const RealField chi_full = gp_ground_state(trap, gn, g).psi;
    const RealField chi_half = gp_ground_state(trap, 0.5 * gn, g).psi;
    const BecProtocol p(g, chi_full, chi_half, kSeparation, 60.0, gn);
    const TimeMesh m(60.0, 1000);
    const DesignResult d = design_potential(p, g, m, gn);
    CHECK(d.consistency.residual0 < 1e-4);
    CHECK(d.consistency.residual_tf < 1e-4);

    // initial slice must reproduce the harmonic trap up to a constant
    const int c = g.center_index();
    for (int i = d.trace.reliable_lo(0); i <= d.trace.reliable_hi(0); ++i) {
        const double x = g.x(i);
        if (std::abs(x) > 4.0) continue;
        CHECK(d.trace.at(0, i) - d.trace.at(0, c) ==
              doctest::Approx(0.5 * x * x).epsilon(5e-3).scale(1e-2));
    }
}
