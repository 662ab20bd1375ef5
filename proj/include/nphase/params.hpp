#pragma once

#include <cmath>

namespace nphase {

namespace constants {
// CODATA reduced Planck constant (J s).
inline constexpr double hbar = 1.054571817e-34;
// 87Rb atomic mass (kg).
inline constexpr double rb87_mass = 1.44316e-25;
// Rb D2 line wavelength (m), the default pump wavelength.
inline constexpr double d2_wavelength = 780.24e-9;
}  // namespace constants

/// Experimental parameters, all angular frequencies in rad/s.
struct PhysicalParams {
    int n = 4;          // number of pump-phase groups
    int nu = 30;        // atoms per group
    double omega_pump = 0.0;                          // pump Rabi frequency (>= 0)
    double delta_pa = -1.0;                           // pump-atom detuning (nonzero)
    double delta_pc = 0.0;                            // pump-cavity detuning
    double kappa = 0.0;                               // cavity field decay (>= 0)
    double omega_z = 1.0;                             // trap frequency (> 0)
    double g0 = 1.0;                                  // vacuum Rabi frequency (> 0)
    double k_pump = 2.0 * M_PI / constants::d2_wavelength;  // pump wavenumber (rad/m)
    double mass = constants::rb87_mass;               // single-atom mass (kg)

    int total_atoms() const { return n * nu; }
    double group_mass() const { return nu * mass; }
    double wavelength() const { return 2.0 * M_PI / k_pump; }

    /// Throws std::invalid_argument if any field is out of range.
    void validate() const;
};

/// Dimensionless constants of the rescaled model: lengths in 1/k, times in
/// 1/omega_z, frequencies in omega_z.  Derived once per parameter set and
/// shared by every solver.
struct ReducedParams {
    int n = 1;
    double phi = 0.0;      // inter-group pump phase 2*pi/n
    double delta = 0.0;    // delta_pc / omega_z
    double kappa_t = 0.0;  // kappa / omega_z
    double g_t = 0.0;      // nu*Omega*g0 / (delta_pa * omega_z)
    double u = 0.0;        // hbar k^2 nu Omega g0 / (mu delta_pa omega_z^2)
    double eps = 0.0;      // collective coupling; eps = 1 is the kappa=0 threshold
    double theta = 0.0;    // atan2(-kappa, delta_pc)
    double mass_t = 0.0;   // mu omega_z / (hbar k^2), sets the mechanical energy scale
};

/// Nondimensionalizes a physical parameter set.
ReducedParams reduce(const PhysicalParams& p);

}  // namespace nphase
