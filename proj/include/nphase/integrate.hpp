#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "nphase/params.hpp"
#include "nphase/state.hpp"

namespace nphase {

struct IntegratorControls {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double t_end = 0.0;       // dimensionless horizon (tau)
    double max_step = 0.0;    // 0 = unlimited
    double sample_every = 0.0;  // output cadence in tau

    void validate() const;  // throws std::invalid_argument
};

enum class IntegrationStatus { ok, step_underflow, non_finite };

const char* to_string(IntegrationStatus s);

/// Sampled solution of one integration run.  States are stored in the flat
/// layouts of state.hpp; alpha_series carries the cavity amplitude at each
/// sample (reconstructed through the adiabatic field for reduced runs).
struct Trajectory {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;
    std::vector<std::complex<double>> alpha_series;
    IntegrationStatus status = IntegrationStatus::ok;
    double err_estimate = 0.0;  // accumulated local-error proxy
    std::size_t n_steps = 0;
    std::size_t n_rejected = 0;

    std::complex<double> final_alpha() const { return alpha_series.back(); }
};

Trajectory integrate_full(const FullState& s0, const ReducedParams& r,
                          const IntegratorControls& ctl);

Trajectory integrate_adiabatic(const MechState& m0, const ReducedParams& r,
                               const IntegratorControls& ctl);

namespace detail {

// Dormand-Prince 5(4) with the classic quartic interpolant for dense output.
// Autonomous systems only; rhs has signature void(const VectorXd&, VectorXd&).
//
// Samples are emitted at k * sample_every plus the initial point and t_end.
// The run stops early on step-size underflow or a non-finite state, with the
// cause recorded in the trajectory status.
template <class Rhs>
Trajectory dopri5(Rhs&& rhs, const Eigen::VectorXd& y0, const IntegratorControls& ctl);

}  // namespace detail

}  // namespace nphase

#include "nphase/integrate_impl.hpp"
