#pragma once

#include <cmath>

namespace ffsplit {

// 2018 CODATA reduced Planck constant [J s].
inline constexpr double kHbar = 1.054571817e-34;

// Harmonic-oscillator unit system. Everything downstream works in
// dimensionless units hbar = m = omega = 1; this is the only place SI
// values appear.
struct Units {
    double mass_kg = 1.44e-25;        // 87Rb
    double omega_rad_s = 780.0;

    double oscillator_length_m() const { return std::sqrt(kHbar / (mass_kg * omega_rad_s)); }
    double energy_quantum_J() const { return kHbar * omega_rad_s; }
    double time_unit_s() const { return 1.0 / omega_rad_s; }

    double length_from_si(double meters) const { return meters / oscillator_length_m(); }
    double length_to_si(double dimensionless) const { return dimensionless * oscillator_length_m(); }
    double time_from_si(double seconds) const { return seconds * omega_rad_s; }
    double time_to_si(double dimensionless) const { return dimensionless / omega_rad_s; }
    double energy_from_si(double joules) const { return joules / energy_quantum_J(); }
    double energy_to_si(double dimensionless) const { return dimensionless * energy_quantum_J(); }
};

} // namespace ffsplit
