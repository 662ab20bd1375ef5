#pragma once

#include <complex>
#include <vector>

#include "nphase/params.hpp"
#include "nphase/state.hpp"

namespace nphase {

// Dimensionless equations of motion, tau = omega_z * t:
//
//   d alpha/d tau = (i delta - kappa_t) alpha - i g_t sum_l e^{i phi l} sin zeta_l
//   d zeta_j/d tau = pi_j
//   d pi_j /d tau = -zeta_j - 2 u cos(zeta_j) Re(e^{-i phi j} alpha)
//
// Eliminating the cavity adiabatically gives the mechanics-only force
//
//   F_j(zeta) = -zeta_j - (2 eps/n) cos(zeta_j) Re(e^{i theta} e^{-i phi j} S),
//   S = sum_l e^{i phi l} sin zeta_l,
//
// whose pairwise weights are W_jl = cos(phi (j-l) - theta).

/// Sum over groups of e^{i phi j} sin(zeta_j).
std::complex<double> order_parameter(const Eigen::VectorXd& zeta, const ReducedParams& r);

/// Steady cavity amplitude that instantaneously follows the mechanics.
/// Requires (delta, kappa_t) != (0, 0).
std::complex<double> adiabatic_field(const MechState& m, const ReducedParams& r);

/// Time derivative of the full state.
FullState full_drift(const FullState& s, const ReducedParams& r);

/// Time derivative of the mechanics-only reduced system.
MechState adiabatic_force(const MechState& m, const ReducedParams& r);

/// Acceleration d pi/d tau as a function of positions alone (momenta zero).
Eigen::VectorXd position_force(const Eigen::VectorXd& zeta, const ReducedParams& r);

/// n x n derivative of position_force with respect to zeta.
Eigen::MatrixXd position_force_jacobian(const Eigen::VectorXd& zeta, const ReducedParams& r);

/// Conservative potential of the kappa = 0 dynamics,
///   V(zeta) = 1/2 sum zeta_j^2 + (eps/n) sign(delta) |S|^2,
/// with -dV/dzeta_j equal to the kappa = 0 force.  Rejects kappa_t != 0.
double lyapunov_potential(const Eigen::VectorXd& zeta, const ReducedParams& r);

/// Analytic gradient of lyapunov_potential.
Eigen::VectorXd lyapunov_gradient(const Eigen::VectorXd& zeta, const ReducedParams& r);

/// Mean-field energy in units of hbar omega_z; conserved by full_drift at kappa = 0.
double energy(const FullState& s, const ReducedParams& r);

/// One element of the discrete symmetry group: cyclic shift of the group
/// index by `step` with cavity phase advance e^{i phi step}, optionally
/// composed with parity (zeta, pi, alpha) -> -(zeta, pi, alpha).
struct SymmetryOp {
    int step = 0;
    bool parity = false;
};

FullState symmetry_transform(const FullState& s, int step, bool parity, const ReducedParams& r);
FullState symmetry_transform(const FullState& s, const SymmetryOp& g, const ReducedParams& r);
MechState symmetry_transform(const MechState& m, const SymmetryOp& g);

/// All 2n group elements (shifts times parity).
std::vector<SymmetryOp> symmetry_group(int n);

}  // namespace nphase
