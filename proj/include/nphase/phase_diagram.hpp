#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nphase/stationary.hpp"

namespace nphase {

enum class PhaseLabel { normal, dispersive_broken, reactive_broken, indeterminate };

const char* to_string(PhaseLabel label);

/// normal: only the origin root exists.  dispersive-broken: some broken root
/// is dynamically stable.  reactive-broken: broken roots exist, none stable.
PhaseLabel classify_phase(int n_roots, int n_broken, int n_stable_broken);

/// Canonical representative of a broken orbit: the symmetry image whose
/// designated-group position is positive and smallest (the designated group
/// is index 2, i.e. the third group, clamped for n < 3).
Eigen::VectorXd orbit_representative(const Eigen::VectorXd& zeta, const ReducedParams& r);
int designated_group(int n);

struct PhasePoint {
    double omega_pump = 0.0;  // rad/s
    double delta_pc = 0.0;    // rad/s
    std::optional<double> tracked_zeta;  // representative position (rad)
    PhaseLabel label = PhaseLabel::indeterminate;
    bool stable = false;      // tracked orbit not unstable
    int n_roots = 0;
    int n_stable = 0;         // broken roots that are not unstable
    bool jacobians_disagree = false;
};

struct PhaseGrid {
    std::vector<double> omega_pump;  // rad/s
    std::vector<double> delta_pc;    // rad/s
};

/// Stationary census on every (Omega, delta_pc) node.  p supplies all other
/// physical parameters; per-node solver failures yield indeterminate labels.
std::vector<PhasePoint> sweep(const PhaseGrid& grid, const PhysicalParams& p,
                              const SearchRegion& region, int threads = 1);

struct LineCut {
    double delta_pc = 0.0;
    std::vector<double> omegas;                 // increasing, rad/s
    std::vector<std::optional<double>> branch;  // tracked zeta per omega
    std::optional<double> jump_at;              // rad/s
    double jump_size = 0.0;                     // rad
};

/// Continuation of the tracked broken branch from the top of omega_range
/// downward.  The branch terminates where Newton following fails or the root
/// collides with the origin; the termination is refined by bisection and
/// flagged as a discontinuity when the tracked position there exceeds
/// jump_threshold.
LineCut line_cut(double delta_pc, const std::vector<double>& omega_range,
                 const PhysicalParams& p, const SearchRegion& region,
                 double jump_threshold = 0.1);

/// Zero-level polylines extracted by marching squares.
using Polyline = std::vector<std::array<double, 2>>;

struct ContourData {
    std::vector<Polyline> dp1_zero;  // force on group 1 vanishes
    std::vector<Polyline> dp2_zero;  // force on group 2 vanishes
    std::vector<std::array<double, 2>> intersections;
};

/// Force contours of the n = 4 symmetric subspace over [lo, hi]^2 sampled on
/// a samples x samples lattice.
ContourData contour_data(const PhysicalParams& p, double lo, double hi, int samples);

}  // namespace nphase
