#include "nphase/model.hpp"

#include <cmath>
#include <stdexcept>

namespace nphase {

namespace {

std::complex<double> group_phase(const ReducedParams& r, int j) {
    return {std::cos(r.phi * j), std::sin(r.phi * j)};
}

void check_cavity_pole(const ReducedParams& r) {
    if (r.delta == 0.0 && r.kappa_t == 0.0)
        throw std::invalid_argument(
            "adiabatic elimination undefined: delta_pc = 0 and kappa = 0");
}

}  // namespace

Eigen::VectorXd pack(const FullState& s) {
    const int n = s.groups();
    Eigen::VectorXd y(2 * n + 2);
    y[0] = s.alpha.real();
    y[1] = s.alpha.imag();
    y.segment(2, n) = s.mech.zeta;
    y.segment(2 + n, n) = s.mech.pi;
    return y;
}

Eigen::VectorXd pack(const MechState& m) {
    const int n = m.groups();
    Eigen::VectorXd y(2 * n);
    y.head(n) = m.zeta;
    y.tail(n) = m.pi;
    return y;
}

FullState unpack_full(const Eigen::VectorXd& y) {
    const int n = (static_cast<int>(y.size()) - 2) / 2;
    FullState s;
    s.alpha = {y[0], y[1]};
    s.mech.zeta = y.segment(2, n);
    s.mech.pi = y.segment(2 + n, n);
    return s;
}

MechState unpack_mech(const Eigen::VectorXd& y) {
    const int n = static_cast<int>(y.size()) / 2;
    return {y.head(n), y.tail(n)};
}

std::complex<double> order_parameter(const Eigen::VectorXd& zeta, const ReducedParams& r) {
    std::complex<double> s{0.0, 0.0};
    for (int j = 0; j < r.n; ++j) s += group_phase(r, j) * std::sin(zeta[j]);
    return s;
}

std::complex<double> adiabatic_field(const MechState& m, const ReducedParams& r) {
    check_cavity_pole(r);
    const std::complex<double> pole(-r.kappa_t, r.delta);  // i*delta - kappa_t
    return std::complex<double>(0.0, r.g_t) * order_parameter(m.zeta, r) / pole;
}

FullState full_drift(const FullState& s, const ReducedParams& r) {
    const int n = r.n;
    FullState d = FullState::zero(n);
    const std::complex<double> S = order_parameter(s.mech.zeta, r);
    d.alpha = std::complex<double>(-r.kappa_t, r.delta) * s.alpha -
              std::complex<double>(0.0, r.g_t) * S;
    d.mech.zeta = s.mech.pi;
    for (int j = 0; j < n; ++j) {
        const double proj = (std::conj(group_phase(r, j)) * s.alpha).real();
        d.mech.pi[j] = -s.mech.zeta[j] - 2.0 * r.u * std::cos(s.mech.zeta[j]) * proj;
    }
    return d;
}

Eigen::VectorXd position_force(const Eigen::VectorXd& zeta, const ReducedParams& r) {
    check_cavity_pole(r);
    const int n = r.n;
    const std::complex<double> rot(std::cos(r.theta), std::sin(r.theta));
    const std::complex<double> S = rot * order_parameter(zeta, r);
    const double amp = 2.0 * r.eps / n;
    Eigen::VectorXd f(n);
    for (int j = 0; j < n; ++j) {
        const double proj = (std::conj(group_phase(r, j)) * S).real();
        f[j] = -zeta[j] - amp * std::cos(zeta[j]) * proj;
    }
    return f;
}

Eigen::MatrixXd position_force_jacobian(const Eigen::VectorXd& zeta, const ReducedParams& r) {
    check_cavity_pole(r);
    const int n = r.n;
    const double amp = 2.0 * r.eps / n;
    const std::complex<double> rot(std::cos(r.theta), std::sin(r.theta));
    const std::complex<double> S = rot * order_parameter(zeta, r);
    Eigen::MatrixXd b(n, n);
    for (int j = 0; j < n; ++j) {
        const double cj = std::cos(zeta[j]);
        for (int l = 0; l < n; ++l) {
            const double w = std::cos(r.phi * (j - l) - r.theta);
            b(j, l) = -amp * cj * w * std::cos(zeta[l]);
        }
        const double proj = (std::conj(group_phase(r, j)) * S).real();
        b(j, j) += -1.0 + amp * std::sin(zeta[j]) * proj;
    }
    return b;
}

MechState adiabatic_force(const MechState& m, const ReducedParams& r) {
    MechState d;
    d.zeta = m.pi;
    d.pi = position_force(m.zeta, r);
    return d;
}

double lyapunov_potential(const Eigen::VectorXd& zeta, const ReducedParams& r) {
    if (r.kappa_t != 0.0)
        throw std::invalid_argument("lyapunov_potential requires kappa = 0");
    if (r.delta == 0.0)
        throw std::invalid_argument("lyapunov_potential requires delta_pc != 0");
    const double sgn = r.delta > 0.0 ? 1.0 : -1.0;
    const std::complex<double> S = order_parameter(zeta, r);
    return 0.5 * zeta.squaredNorm() + (r.eps / r.n) * sgn * std::norm(S);
}

Eigen::VectorXd lyapunov_gradient(const Eigen::VectorXd& zeta, const ReducedParams& r) {
    if (r.kappa_t != 0.0)
        throw std::invalid_argument("lyapunov_gradient requires kappa = 0");
    return -position_force(zeta, r);
}

double energy(const FullState& s, const ReducedParams& r) {
    const int n = r.n;
    double drive = 0.0;
    for (int j = 0; j < n; ++j) {
        const double proj = (std::conj(group_phase(r, j)) * s.alpha).real();
        drive += std::sin(s.mech.zeta[j]) * 2.0 * proj;
    }
    return -r.delta * std::norm(s.alpha) +
           0.5 * r.mass_t * (s.mech.pi.squaredNorm() + s.mech.zeta.squaredNorm()) +
           r.g_t * drive;
}

MechState symmetry_transform(const MechState& m, const SymmetryOp& g) {
    const int n = m.groups();
    MechState out = MechState::zero(n);
    const double sign = g.parity ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
        const int src = ((j - g.step) % n + n) % n;
        out.zeta[j] = sign * m.zeta[src];
        out.pi[j] = sign * m.pi[src];
    }
    return out;
}

FullState symmetry_transform(const FullState& s, int step, bool parity, const ReducedParams& r) {
    return symmetry_transform(s, SymmetryOp{step, parity}, r);
}

FullState symmetry_transform(const FullState& s, const SymmetryOp& g, const ReducedParams& r) {
    FullState out;
    out.mech = symmetry_transform(s.mech, g);
    const std::complex<double> phase{std::cos(r.phi * g.step), std::sin(r.phi * g.step)};
    out.alpha = (g.parity ? -1.0 : 1.0) * phase * s.alpha;
    return out;
}

std::vector<SymmetryOp> symmetry_group(int n) {
    std::vector<SymmetryOp> ops;
    ops.reserve(2 * n);
    for (int p = 0; p < 2; ++p)
        for (int s = 0; s < n; ++s) ops.push_back({s, p == 1});
    return ops;
}

}  // namespace nphase
