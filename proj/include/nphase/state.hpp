#pragma once

#include <Eigen/Core>
#include <complex>

namespace nphase {

/// Mechanical configuration of the n groups: zeta_j = k z_j, pi_j = k p_j/(mu omega_z).
struct MechState {
    Eigen::VectorXd zeta;
    Eigen::VectorXd pi;

    static MechState zero(int n) {
        return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
    }
    int groups() const { return static_cast<int>(zeta.size()); }
};

/// Cavity amplitude plus mechanics.
struct FullState {
    std::complex<double> alpha{0.0, 0.0};
    MechState mech;

    static FullState zero(int n) { return {{0.0, 0.0}, MechState::zero(n)}; }
    int groups() const { return mech.groups(); }
};

// Flat layouts used by the integrators:
//   full:      [Re alpha, Im alpha, zeta_0..zeta_{n-1}, pi_0..pi_{n-1}]
//   adiabatic: [zeta_0..zeta_{n-1}, pi_0..pi_{n-1}]

Eigen::VectorXd pack(const FullState& s);
Eigen::VectorXd pack(const MechState& m);
FullState unpack_full(const Eigen::VectorXd& y);
MechState unpack_mech(const Eigen::VectorXd& y);

}  // namespace nphase
