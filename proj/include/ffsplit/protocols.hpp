#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ffsplit/grid.hpp"
#include "ffsplit/numerics.hpp"

namespace ffsplit {

// Polynomial switch R(s) = 3s^2 - 2s^3, s = t/t_f. R(0)=0, R(1)=1 and
// dR/dt vanishes at both ends, which makes every protocol built on it
// stationary at t = 0 and t = t_f.
struct Ramp {
    double t_f = 1.0;

    double value(double t) const;  // R(t/t_f)
    double rate(double t) const;   // dR/dt
};

// x0(t) = a R(t/t_f) and its time derivative.
std::pair<double, double> gaussian_trajectory(double a, double t, double t_f);

// Prescribed amplitude history r(x,t) with analytic space derivatives and
// the time derivative of the density r^2. All evaluators are pure; the
// protocol is immutable after construction. r is normalized so that
// the integral of r^2 over x is 1 at every t.
class DensityProtocol {
public:
    virtual ~DensityProtocol() = default;

    virtual double amplitude(double x, double t) const = 0;      // r
    virtual double amplitude_dx(double x, double t) const = 0;   // dr/dx
    virtual double amplitude_dxx(double x, double t) const = 0;  // d2r/dx2
    virtual double density_dt(double x, double t) const = 0;     // d(r^2)/dt

    virtual double separation() const = 0;     // final half-separation a
    virtual double duration() const = 0;       // t_f
    virtual double coupling() const = 0;       // dimensionless gN
    virtual double normalization(double t) const = 0;  // z(t), diagnostic
    virtual std::string name() const = 0;

    std::pair<double, double> trajectory(double t) const {
        return gaussian_trajectory(separation(), t, duration());
    }

    RealField sample_amplitude(const Grid& g, double t) const;
    RealField sample_amplitude_dxx(const Grid& g, double t) const;
    RealField sample_density_dt(const Grid& g, double t) const;
};

// Two displaced Gaussians, Gamma width parameter (default 1 in units of
// the inverse oscillator length). Single Gaussian at t = 0, symmetric
// double Gaussian separated by 2a at t_f.
class TwoBumpProtocol final : public DensityProtocol {
public:
    TwoBumpProtocol(double a, double gamma, double t_f);

    double amplitude(double x, double t) const override;
    double amplitude_dx(double x, double t) const override;
    double amplitude_dxx(double x, double t) const override;
    double density_dt(double x, double t) const override;
    double separation() const override { return a_; }
    double duration() const override { return ramp_.t_f; }
    double coupling() const override { return 0.0; }
    double normalization(double t) const override;
    std::string name() const override { return "two_bump"; }

private:
    double z_of(double x0) const;
    double dz_dx0(double x0) const;

    double a_, gamma_;
    Ramp ramp_;
};

// Linear interpolation between the initial single Gaussian and the final
// double Gaussian; passes through three-bump intermediate shapes.
class ThreeTermProtocol final : public DensityProtocol {
public:
    ThreeTermProtocol(double a, double gamma, double t_f);

    double amplitude(double x, double t) const override;
    double amplitude_dx(double x, double t) const override;
    double amplitude_dxx(double x, double t) const override;
    double density_dt(double x, double t) const override;
    double separation() const override { return a_; }
    double duration() const override { return ramp_.t_f; }
    double coupling() const override { return 0.0; }
    double normalization(double t) const override;
    std::string name() const override { return "three_term"; }

private:
    double mix_norm_sq(double R) const;      // integral of mixture^2
    double mix_norm_sq_dR(double R) const;

    double a_, gamma_;
    Ramp ramp_;
    double i00_, i0f_, iff_;
};

// Interpolates between tabulated condensate ground-state profiles for N
// and N/2 particles, displaced and summed. Spatial derivatives come from
// 5-point stencils of the tables, interpolated by cubic splines; the
// normalization z(R) and its dR derivative are precomputed on an R grid.
class BecProtocol final : public DensityProtocol {
public:
    BecProtocol(const Grid& g, RealField chi_full, RealField chi_half,
                double a, double t_f, double coupling);

    double amplitude(double x, double t) const override;
    double amplitude_dx(double x, double t) const override;
    double amplitude_dxx(double x, double t) const override;
    double density_dt(double x, double t) const override;
    double separation() const override { return a_; }
    double duration() const override { return ramp_.t_f; }
    double coupling() const override { return coupling_; }
    double normalization(double t) const override;
    std::string name() const override { return "bec"; }

    const RealField& chi_full() const { return chi_full_; }
    const RealField& chi_half() const { return chi_half_; }

private:
    double f_mix(const TableInterpolant& sN, const TableInterpolant& sH, double u, double R) const;
    double z_of(double R) const;
    double dz_dR(double R) const;

    double a_, coupling_;
    Ramp ramp_;
    RealField chi_full_, chi_half_;
    TableInterpolant sN_, sN1_, sN2_;  // chi_N and its first two derivatives
    TableInterpolant sH_, sH1_, sH2_;
    CubicSpline z_table_, zr_table_;
};

} // namespace ffsplit
