#include "nphase/integrate.hpp"

#include <cmath>
#include <stdexcept>

#include "nphase/model.hpp"

namespace nphase {

void IntegratorControls::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw std::invalid_argument("IntegratorControls: tolerances must be > 0");
    if (!(t_end > 0.0))
        throw std::invalid_argument("IntegratorControls: t_end must be > 0");
    if (!(sample_every > 0.0))
        throw std::invalid_argument("IntegratorControls: sample_every must be > 0");
    if (max_step < 0.0)
        throw std::invalid_argument("IntegratorControls: max_step must be >= 0");
}

const char* to_string(IntegrationStatus s) {
    switch (s) {
        case IntegrationStatus::ok: return "ok";
        case IntegrationStatus::step_underflow: return "step_underflow";
        case IntegrationStatus::non_finite: return "non_finite";
    }
    return "unknown";
}

namespace {

// Precomputed phase tables keep the hot loop at O(n) per evaluation.
struct PhaseTable {
    Eigen::VectorXd cos_phi, sin_phi;
    explicit PhaseTable(const ReducedParams& r)
        : cos_phi(r.n), sin_phi(r.n) {
        for (int j = 0; j < r.n; ++j) {
            cos_phi[j] = std::cos(r.phi * j);
            sin_phi[j] = std::sin(r.phi * j);
        }
    }
};

struct FullRhs {
    ReducedParams r;
    PhaseTable tab;
    explicit FullRhs(const ReducedParams& rp) : r(rp), tab(rp) {}

    void operator()(const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
        const int n = r.n;
        double sr = 0.0, si = 0.0;
        for (int j = 0; j < n; ++j) {
            const double s = std::sin(y[2 + j]);
            sr += tab.cos_phi[j] * s;
            si += tab.sin_phi[j] * s;
        }
        const double x = y[0], yy = y[1];
        dy[0] = -r.kappa_t * x - r.delta * yy + r.g_t * si;
        dy[1] = r.delta * x - r.kappa_t * yy - r.g_t * sr;
        for (int j = 0; j < n; ++j) {
            dy[2 + j] = y[2 + n + j];
            const double proj = x * tab.cos_phi[j] + yy * tab.sin_phi[j];
            dy[2 + n + j] = -y[2 + j] - 2.0 * r.u * std::cos(y[2 + j]) * proj;
        }
    }
};

struct AdiabaticRhs {
    ReducedParams r;
    PhaseTable tab;
    double amp, ct, st;
    explicit AdiabaticRhs(const ReducedParams& rp)
        : r(rp), tab(rp), amp(2.0 * rp.eps / rp.n),
          ct(std::cos(rp.theta)), st(std::sin(rp.theta)) {}

    void operator()(const Eigen::VectorXd& y, Eigen::VectorXd& dy) const {
        const int n = r.n;
        double sr = 0.0, si = 0.0;
        for (int j = 0; j < n; ++j) {
            const double s = std::sin(y[j]);
            sr += tab.cos_phi[j] * s;
            si += tab.sin_phi[j] * s;
        }
        // rotate the order parameter by theta
        const double rr = ct * sr - st * si;
        const double ri = st * sr + ct * si;
        for (int j = 0; j < n; ++j) {
            dy[j] = y[n + j];
            const double proj = rr * tab.cos_phi[j] + ri * tab.sin_phi[j];
            dy[n + j] = -y[j] - amp * std::cos(y[j]) * proj;
        }
    }
};

}  // namespace

Trajectory integrate_full(const FullState& s0, const ReducedParams& r,
                          const IntegratorControls& ctl) {
    if (s0.groups() != r.n)
        throw std::invalid_argument("integrate_full: state/parameter size mismatch");
    FullRhs rhs(r);
    Trajectory traj = detail::dopri5(rhs, pack(s0), ctl);
    traj.alpha_series.reserve(traj.states.size());
    for (const auto& y : traj.states) traj.alpha_series.emplace_back(y[0], y[1]);
    return traj;
}

Trajectory integrate_adiabatic(const MechState& m0, const ReducedParams& r,
                               const IntegratorControls& ctl) {
    if (m0.groups() != r.n)
        throw std::invalid_argument("integrate_adiabatic: state/parameter size mismatch");
    AdiabaticRhs rhs(r);
    Trajectory traj = detail::dopri5(rhs, pack(m0), ctl);
    traj.alpha_series.reserve(traj.states.size());
    for (const auto& y : traj.states)
        traj.alpha_series.push_back(adiabatic_field(unpack_mech(y), r));
    return traj;
}

}  // namespace nphase
