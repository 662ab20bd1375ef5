#include "nphase/linear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace nphase {

ModePair normal_modes(const ReducedParams& r) {
    if (r.n <= 2)
        throw std::invalid_argument("normal_modes: formula holds for n > 2");
    const std::complex<double> shift(r.eps * std::cos(r.theta),
                                     r.eps * std::sin(r.theta));
    ModePair m;
    m.omega_plus = std::sqrt(1.0 + shift);
    m.omega_minus = std::sqrt(1.0 + std::conj(shift));
    m.growth_rate = std::max(std::abs(m.omega_plus.imag()),
                             std::abs(m.omega_minus.imag()));
    return m;
}

double critical_pump(const PhysicalParams& p) {
    p.validate();
    if (p.delta_pc == 0.0)
        throw std::invalid_argument("critical_pump: delta_pc must be nonzero");
    const double num = p.delta_pa * p.delta_pa * std::abs(p.delta_pc) * p.mass *
                       p.omega_z * p.omega_z;
    const double den = p.g0 * p.g0 * constants::hbar * p.k_pump * p.k_pump *
                       p.total_atoms();
    return std::sqrt(num / den);
}

EffectiveHamiltonian build_heff(const ReducedParams& r) {
    const int n = r.n;
    const double amp = 2.0 * r.eps / n;
    // one kernel indexed by (j - l) mod n keeps the matrix exactly circulant
    std::vector<double> kernel(n);
    kernel[0] = 1.0 + amp * std::cos(r.theta);
    for (int d = 1; d < n; ++d) kernel[d] = amp * std::cos(r.phi * d - r.theta);

    EffectiveHamiltonian h;
    h.phi_used = r.phi;
    h.matrix.resize(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) h.matrix(j, l) = kernel[((j - l) % n + n) % n];
    return h;
}

double nonreciprocity(const EffectiveHamiltonian& h) {
    const auto n = h.matrix.rows();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index l = j + 1; l < n; ++l)
            worst = std::max(worst, std::abs(h.matrix(j, l) - h.matrix(l, j)));
    return worst;
}

Eigen::Matrix2d two_group_heff(const ReducedParams& r, double varphi) {
    Eigen::Matrix2d h;
    const double diag = 1.0 + r.eps * std::cos(r.theta);
    h(0, 0) = h(1, 1) = diag;
    h(0, 1) = r.eps * std::cos(varphi + r.theta);
    h(1, 0) = r.eps * std::cos(varphi - r.theta);
    return h;
}

double ideal_phase(const ReducedParams& r) {
    if (!(r.kappa_t > 0.0))
        throw std::invalid_argument("ideal_phase: requires kappa > 0");
    return std::atan2(-r.delta, r.kappa_t);
}

}  // namespace nphase
