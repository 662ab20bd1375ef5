#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "nphase/model.hpp"
#include "nphase/params.hpp"

namespace nphase {

enum class Stability { stable, marginal, unstable };

const char* to_string(Stability s);

/// unstable if any Re > tol; stable if all Re < -tol; marginal otherwise.
Stability classify(const std::vector<std::complex<double>>& eigenvalues, double tol);

/// Exact linearization of (d zeta, d pi) about (zeta, pi = 0): [[0, I], [B, 0]]
/// with B = position_force_jacobian.  Trace-free, so its spectrum is symmetric
/// under lambda -> -lambda and strict attractors cannot occur here; stability
/// beyond "not unstable" needs the full Jacobian.
Eigen::MatrixXd adiabatic_jacobian(const Eigen::VectorXd& zeta, const ReducedParams& r);

/// Linearization of the full drift with (Re alpha, Im alpha) as coordinates.
Eigen::MatrixXd full_jacobian(const FullState& s, const ReducedParams& r);

/// Dense nonsymmetric eigenvalues (Hessenberg + shifted QR, via Eigen).
std::vector<std::complex<double>> spectrum(const Eigen::MatrixXd& m);

/// A root of the position force with its diagnostics.  `eigenvalues` and
/// `stability` come from the adiabatic Jacobian, the classification used for
/// phase labels; the full-model spectrum's largest real part is kept alongside
/// for comparison.
struct StationaryPoint {
    Eigen::VectorXd zeta;
    std::complex<double> alpha;
    std::vector<std::complex<double>> eigenvalues;
    Stability stability = Stability::marginal;
    int orbit_id = -1;
    double residual = 0.0;
    double full_max_re = 0.0;   // largest Re eigenvalue of the full Jacobian
    bool jacobians_disagree = false;

    /// Not unstable: no adiabatic eigenvalue with positive real part.  This is
    /// the notion behind "stable" stationary-state counts; the conservative
    /// reduced dynamics cannot certify strict attraction.
    bool dynamically_stable() const { return stability != Stability::unstable; }
    bool is_origin(double tol = 1e-6) const {
        return zeta.lpNorm<Eigen::Infinity>() < tol;
    }
};

inline constexpr double kStabilityTol = 1e-9;

/// Damped Newton on the n-dimensional position force from `guess`; converged
/// when max |force| < tol.  Returns nullopt after max_iter without convergence.
std::optional<StationaryPoint> find_root(const Eigen::VectorXd& guess,
                                         const ReducedParams& r, double tol,
                                         int max_iter = 80);

/// Multistart grid specification.  With symmetric_subspace (n = 4 only) the
/// grid runs over (a, b) and roots take the form (a, b, -a, -b).
struct SearchRegion {
    Eigen::VectorXd lo, hi;   // length n, or 2 in the symmetric subspace
    int grid_per_dim = 9;
    double dedup_radius = 1e-6;
    bool symmetric_subspace = false;

    void validate(int n) const;
    static SearchRegion cube(int n, double lo, double hi, int grid);
    static SearchRegion subspace(double lo, double hi, int grid);
};

struct SearchReport {
    int attempts = 0;
    int failures = 0;
    int out_of_region = 0;
};

/// Newton from every grid node, deduplicated within dedup_radius, each root
/// carrying its spectrum and stability.  Deterministic for fixed inputs
/// regardless of thread count.
std::vector<StationaryPoint> multistart_search(const SearchRegion& region,
                                               const ReducedParams& r,
                                               double tol = 1e-11,
                                               SearchReport* report = nullptr,
                                               int threads = 1);

/// Partitions points into equivalence classes under the 2n-element symmetry
/// group, writing orbit_id into each point.  Returns the classes as index lists.
std::vector<std::vector<int>> symmetry_orbits(std::vector<StationaryPoint>& points,
                                              const ReducedParams& r, double radius);

struct Minimum {
    Eigen::VectorXd zeta;
    std::complex<double> alpha;
    double value = 0.0;
    double grad_norm = 0.0;
};

/// Local minimization of the kappa = 0 Lyapunov potential from each start
/// (modified-Newton with backtracking), deduplicated; only points whose
/// Hessian is positive semidefinite within tolerance are returned.  A positive
/// max_norm keeps only minima with |zeta|_inf <= max_norm; pass pi to restrict
/// to the primary lattice cell (secondary wells repeat every wavelength).
std::vector<Minimum> lyapunov_minimize(const std::vector<Eigen::VectorXd>& starts,
                                       const ReducedParams& r, double tol = 1e-10,
                                       double max_norm = 0.0);

/// Convenience start set: uniform grid over [lo, hi]^n (grid^n points, capped).
std::vector<Eigen::VectorXd> grid_starts(int n, double lo, double hi, int grid);

}  // namespace nphase
