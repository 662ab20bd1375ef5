#pragma once

#include <Eigen/Core>
#include <complex>

#include "nphase/params.hpp"

namespace nphase {

/// The two normal-phase eigenfrequency branches, in units of omega_z.  Modes
/// evolve as e^{-i omega t}, so Im(omega) > 0 means exponential growth; the
/// physical spectrum is {omega_plus, -omega_plus, omega_minus, -omega_minus}.
struct ModePair {
    std::complex<double> omega_plus;   // sqrt(1 + eps e^{+i theta}), principal branch
    std::complex<double> omega_minus;  // sqrt(1 + eps e^{-i theta}), principal branch
    double growth_rate = 0.0;          // max Im over all four modes
};

/// Closed-form linearization about the normal phase.  Defined for n > 2.
ModePair normal_modes(const ReducedParams& r);

/// Critical pump strength of the dispersive-limit transition (rad/s),
/// Omega_c = sqrt(delta_pa^2 |delta_pc| m omega_z^2 / (g0^2 hbar k^2 N)).
/// Equivalent to eps |cos theta| = 1 at kappa = 0.  Requires delta_pc != 0.
double critical_pump(const PhysicalParams& p);

/// Non-Hermitian phonon hopping matrix, in units of omega_z.  Circulant;
/// Hermitian only when the reactive weights kappa sin(phi(j-l)) all vanish.
struct EffectiveHamiltonian {
    Eigen::MatrixXd matrix;
    double phi_used = 0.0;
};

EffectiveHamiltonian build_heff(const ReducedParams& r);

/// max_{j != l} |H_jl - H_lj|; zero iff the coupling is reciprocal.
double nonreciprocity(const EffectiveHamiltonian& h);

/// Two-group model with a free pump phase difference varphi:
///   H12 = eps cos(varphi + theta),  H21 = eps cos(varphi - theta),
/// diagonal 1 + eps cos(theta), all in units of omega_z.  The ReducedParams
/// are interpreted with n = 2 semantics.
Eigen::Matrix2d two_group_heff(const ReducedParams& r, double varphi);

/// Phase difference varphi* = atan2(-delta_pc, kappa) at which group 1
/// decouples from group 2 (H12 = 0, H21 != 0).  Satisfies
/// varphi* + theta = +-pi/2 (mod pi).  Requires kappa > 0.
double ideal_phase(const ReducedParams& r);

}  // namespace nphase
