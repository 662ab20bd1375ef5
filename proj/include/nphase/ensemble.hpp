#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "nphase/integrate.hpp"

namespace nphase {

/// Ensemble of trajectories launched from Gaussian perturbations of the
/// origin (cavity field exactly zero).
struct EnsembleSpec {
    int count = 1;
    std::uint64_t seed = 0;
    double position_scale = 1e-3 * M_PI;
    double momentum_scale = 0.0;

    void validate() const;
};

/// Draws the initial mechanical state of ensemble member `index`.
MechState ensemble_initial_state(const EnsembleSpec& spec, int index, int n);

/// Integrates all members with integrate_full.  Per-member failures are kept
/// in the trajectory status; results are in member order regardless of the
/// thread count.
std::vector<Trajectory> run_ensemble(const EnsembleSpec& spec, const ReducedParams& r,
                                     const IntegratorControls& ctl, int threads = 1);

struct Clusters {
    int count = 0;
    std::vector<std::complex<double>> centroids;
    std::vector<std::vector<int>> members;

    int largest() const;
};

/// Single-linkage grouping of endpoint cavity fields: points within `radius`
/// of each other (transitively) share a cluster.
Clusters cluster_endpoints(const std::vector<std::complex<double>>& finals,
                           double radius);

/// Clusters reachable from the largest cluster by the cavity-field group
/// action (alpha -> e^{2 pi i/n} alpha, plus alpha -> -alpha for odd n).
struct SymmetryFamily {
    std::vector<int> clusters;   // indices into Clusters
    int orbit_size = 0;          // n for even n, 2n for odd n
    int matched = 0;             // orbit points matched to a cluster centroid
    double member_fraction = 0;  // endpoints inside the family
    bool closed() const { return matched == orbit_size; }
};

SymmetryFamily symmetry_family(const Clusters& clusters, int n, double radius,
                               std::size_t total_points);

}  // namespace nphase
