#include "nphase/stationary.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "nphase/parallel.hpp"

namespace nphase {

const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::marginal: return "marginal";
        case Stability::unstable: return "unstable";
    }
    return "unknown";
}

Stability classify(const std::vector<std::complex<double>>& eigenvalues, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("classify: tol must be > 0");
    bool any_pos = false, all_neg = !eigenvalues.empty();
    for (const auto& ev : eigenvalues) {
        if (ev.real() > tol) any_pos = true;
        if (!(ev.real() < -tol)) all_neg = false;
    }
    if (any_pos) return Stability::unstable;
    if (all_neg) return Stability::stable;
    return Stability::marginal;
}

Eigen::MatrixXd adiabatic_jacobian(const Eigen::VectorXd& zeta, const ReducedParams& r) {
    const int n = r.n;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n).setIdentity();
    j.bottomLeftCorner(n, n) = position_force_jacobian(zeta, r);
    return j;
}

Eigen::MatrixXd full_jacobian(const FullState& s, const ReducedParams& r) {
    const int n = r.n;
    const double x = s.alpha.real(), y = s.alpha.imag();
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n + 2, 2 * n + 2);
    j(0, 0) = -r.kappa_t;
    j(0, 1) = -r.delta;
    j(1, 0) = r.delta;
    j(1, 1) = -r.kappa_t;
    for (int l = 0; l < n; ++l) {
        const double c = std::cos(s.mech.zeta[l]);
        j(0, 2 + l) = r.g_t * std::sin(r.phi * l) * c;
        j(1, 2 + l) = -r.g_t * std::cos(r.phi * l) * c;
    }
    j.block(2, 2 + n, n, n).setIdentity();
    for (int jj = 0; jj < n; ++jj) {
        const double cp = std::cos(r.phi * jj), sp = std::sin(r.phi * jj);
        const double cz = std::cos(s.mech.zeta[jj]), sz = std::sin(s.mech.zeta[jj]);
        j(2 + n + jj, 0) = -2.0 * r.u * cz * cp;
        j(2 + n + jj, 1) = -2.0 * r.u * cz * sp;
        j(2 + n + jj, 2 + jj) = -1.0 + 2.0 * r.u * sz * (x * cp + y * sp);
    }
    return j;
}

std::vector<std::complex<double>> spectrum(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("spectrum: eigenvalue iteration failed");
    const auto& vals = solver.eigenvalues();
    std::vector<std::complex<double>> out(vals.size());
    for (Eigen::Index i = 0; i < vals.size(); ++i) out[i] = vals[i];
    // canonical order for reproducible output
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return out;
}

namespace {

// Shared damped-Newton kernel.  F: VectorXd -> VectorXd, J: VectorXd -> MatrixXd.
template <class F, class J>
std::optional<Eigen::VectorXd> damped_newton(Eigen::VectorXd x, F&& force, J&& jac,
                                             double tol, int max_iter) {
    Eigen::VectorXd f = force(x);
    for (int it = 0; it < max_iter; ++it) {
        if (f.lpNorm<Eigen::Infinity>() < tol) return x;
        Eigen::VectorXd step = jac(x).partialPivLu().solve(-f);
        if (!step.allFinite()) return std::nullopt;
        const double f0 = f.squaredNorm();
        double lambda = 1.0;
        for (;;) {
            Eigen::VectorXd xn = x + lambda * step;
            Eigen::VectorXd fn = force(xn);
            if (fn.allFinite() && fn.squaredNorm() < f0) {
                x = std::move(xn);
                f = std::move(fn);
                break;
            }
            lambda *= 0.5;
            if (lambda < 1e-10) return std::nullopt;
        }
    }
    const Eigen::VectorXd f_final = force(x);
    return f_final.lpNorm<Eigen::Infinity>() < tol ? std::optional<Eigen::VectorXd>(x)
                                                   : std::nullopt;
}

Eigen::VectorXd embed_subspace(const Eigen::VectorXd& ab) {
    Eigen::VectorXd z(4);
    z << ab[0], ab[1], -ab[0], -ab[1];
    return z;
}

// Reduced force and Jacobian on the invariant plane z = (a, b, -a, -b).
Eigen::VectorXd subspace_force(const Eigen::VectorXd& ab, const ReducedParams& r) {
    const Eigen::VectorXd f = position_force(embed_subspace(ab), r);
    return f.head(2);
}

Eigen::MatrixXd subspace_jacobian(const Eigen::VectorXd& ab, const ReducedParams& r) {
    const Eigen::MatrixXd b = position_force_jacobian(embed_subspace(ab), r);
    Eigen::MatrixXd j(2, 2);
    j(0, 0) = b(0, 0) - b(0, 2);
    j(0, 1) = b(0, 1) - b(0, 3);
    j(1, 0) = b(1, 0) - b(1, 2);
    j(1, 1) = b(1, 1) - b(1, 3);
    return j;
}

StationaryPoint finalize_point(const Eigen::VectorXd& zeta, const ReducedParams& r) {
    StationaryPoint p;
    p.zeta = zeta;
    p.residual = position_force(zeta, r).lpNorm<Eigen::Infinity>();
    p.alpha = adiabatic_field({zeta, Eigen::VectorXd::Zero(r.n)}, r);
    p.eigenvalues = spectrum(adiabatic_jacobian(zeta, r));
    p.stability = classify(p.eigenvalues, kStabilityTol);
    const auto full_eigs =
        spectrum(full_jacobian({p.alpha, {zeta, Eigen::VectorXd::Zero(r.n)}}, r));
    p.full_max_re = full_eigs.front().real();
    const Stability full_label = classify(full_eigs, kStabilityTol);
    p.jacobians_disagree =
        (full_label == Stability::unstable) != (p.stability == Stability::unstable);
    return p;
}

}  // namespace

std::optional<StationaryPoint> find_root(const Eigen::VectorXd& guess,
                                         const ReducedParams& r, double tol,
                                         int max_iter) {
    if (!(tol > 0.0)) throw std::invalid_argument("find_root: tol must be > 0");
    if (guess.size() != r.n)
        throw std::invalid_argument("find_root: guess size mismatch");
    auto root = damped_newton(
        guess, [&](const Eigen::VectorXd& z) { return position_force(z, r); },
        [&](const Eigen::VectorXd& z) { return position_force_jacobian(z, r); }, tol,
        max_iter);
    if (!root) return std::nullopt;
    return finalize_point(*root, r);
}

void SearchRegion::validate(int n) const {
    const int d = symmetric_subspace ? 2 : n;
    if (symmetric_subspace && n != 4)
        throw std::invalid_argument("SearchRegion: symmetric subspace requires n = 4");
    if (lo.size() != d || hi.size() != d)
        throw std::invalid_argument("SearchRegion: bounds must have dimension " +
                                    std::to_string(d));
    for (int i = 0; i < d; ++i)
        if (!(lo[i] < hi[i]))
            throw std::invalid_argument("SearchRegion: lo < hi required");
    if (grid_per_dim < 2)
        throw std::invalid_argument("SearchRegion: grid_per_dim must be >= 2");
    if (!(dedup_radius > 0.0))
        throw std::invalid_argument("SearchRegion: dedup_radius must be > 0");
}

SearchRegion SearchRegion::cube(int n, double lo, double hi, int grid) {
    SearchRegion s;
    s.lo = Eigen::VectorXd::Constant(n, lo);
    s.hi = Eigen::VectorXd::Constant(n, hi);
    s.grid_per_dim = grid;
    return s;
}

SearchRegion SearchRegion::subspace(double lo, double hi, int grid) {
    SearchRegion s = cube(2, lo, hi, grid);
    s.symmetric_subspace = true;
    return s;
}

std::vector<StationaryPoint> multistart_search(const SearchRegion& region,
                                               const ReducedParams& r, double tol,
                                               SearchReport* report, int threads) {
    region.validate(r.n);
    const int d = region.symmetric_subspace ? 2 : r.n;

    // grid_per_dim^d starts, odd counts pass through the exact center
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(region.grid_per_dim);

    std::vector<std::optional<Eigen::VectorXd>> found(total);
    parallel_for(total, threads, [&](std::size_t flat) {
        Eigen::VectorXd start(d);
        std::size_t rem = flat;
        for (int i = 0; i < d; ++i) {
            const auto gi = rem % region.grid_per_dim;
            rem /= region.grid_per_dim;
            start[i] = region.lo[i] + (region.hi[i] - region.lo[i]) *
                                          static_cast<double>(gi) /
                                          (region.grid_per_dim - 1);
        }
        std::optional<Eigen::VectorXd> root;
        if (region.symmetric_subspace) {
            root = damped_newton(
                start, [&](const Eigen::VectorXd& ab) { return subspace_force(ab, r); },
                [&](const Eigen::VectorXd& ab) { return subspace_jacobian(ab, r); },
                tol, 80);
        } else {
            root = damped_newton(
                start, [&](const Eigen::VectorXd& z) { return position_force(z, r); },
                [&](const Eigen::VectorXd& z) { return position_force_jacobian(z, r); },
                tol, 80);
        }
        found[flat] = std::move(root);
    });

    SearchReport rep;
    rep.attempts = static_cast<int>(total);

    // sequential dedup in grid order keeps the result deterministic
    std::vector<Eigen::VectorXd> roots;
    for (auto& cand : found) {
        if (!cand) {
            ++rep.failures;
            continue;
        }
        bool inside = true;
        for (int i = 0; i < d; ++i)
            if ((*cand)[i] < region.lo[i] - region.dedup_radius ||
                (*cand)[i] > region.hi[i] + region.dedup_radius)
                inside = false;
        if (!inside) {
            ++rep.out_of_region;
            continue;
        }
        bool dup = false;
        for (const auto& have : roots)
            if ((have - *cand).lpNorm<Eigen::Infinity>() < region.dedup_radius) {
                dup = true;
                break;
            }
        if (!dup) roots.push_back(*cand);
    }

    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        for (Eigen::Index i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });

    std::vector<StationaryPoint> points;
    points.reserve(roots.size());
    for (const auto& z : roots)
        points.push_back(finalize_point(
            region.symmetric_subspace ? embed_subspace(z) : z, r));
    if (report) *report = rep;
    return points;
}

std::vector<std::vector<int>> symmetry_orbits(std::vector<StationaryPoint>& points,
                                              const ReducedParams& r, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("symmetry_orbits: radius > 0");
    const auto group = symmetry_group(r.n);
    const int count = static_cast<int>(points.size());

    std::vector<int> parent(count);
    for (int i = 0; i < count; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    for (int i = 0; i < count; ++i) {
        const MechState m{points[i].zeta, Eigen::VectorXd::Zero(r.n)};
        for (const auto& g : group) {
            const MechState img = symmetry_transform(m, g);
            for (int j = 0; j < count; ++j) {
                if ((img.zeta - points[j].zeta).lpNorm<Eigen::Infinity>() < radius)
                    unite(i, j);
            }
        }
    }

    std::vector<std::vector<int>> classes;
    std::vector<int> id(count, -1);
    for (int i = 0; i < count; ++i) {
        const int root = find(i);
        if (id[root] < 0) {
            id[root] = static_cast<int>(classes.size());
            classes.emplace_back();
        }
        points[i].orbit_id = id[root];
        classes[id[root]].push_back(i);
    }
    return classes;
}

std::vector<Minimum> lyapunov_minimize(const std::vector<Eigen::VectorXd>& starts,
                                       const ReducedParams& r, double tol,
                                       double max_norm) {
    if (r.kappa_t != 0.0)
        throw std::invalid_argument("lyapunov_minimize requires kappa = 0");
    const int n = r.n;

    std::vector<Eigen::VectorXd> minima;
    for (const auto& s0 : starts) {
        if (s0.size() != n)
            throw std::invalid_argument("lyapunov_minimize: start size mismatch");
        Eigen::VectorXd x = s0;
        bool converged = false;
        for (int it = 0; it < 200; ++it) {
            Eigen::VectorXd g = lyapunov_gradient(x, r);
            if (g.lpNorm<Eigen::Infinity>() < tol) {
                converged = true;
                break;
            }
            // Hessian = -B; clamp its spectrum to keep a descent direction
            Eigen::MatrixXd h = -position_force_jacobian(x, r);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                0.5 * (h + h.transpose()));
            Eigen::VectorXd evals = es.eigenvalues().cwiseMax(1e-3);
            Eigen::VectorXd step =
                -(es.eigenvectors() *
                  evals.cwiseInverse().asDiagonal() *
                  es.eigenvectors().transpose() * g);
            const double v0 = lyapunov_potential(x, r);
            double lambda = 1.0;
            bool moved = false;
            while (lambda > 1e-12) {
                Eigen::VectorXd xn = x + lambda * step;
                if (lyapunov_potential(xn, r) < v0) {
                    x = std::move(xn);
                    moved = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!moved) break;
        }
        if (!converged &&
            lyapunov_gradient(x, r).lpNorm<Eigen::Infinity>() >= tol)
            continue;

        if (max_norm > 0.0 && x.lpNorm<Eigen::Infinity>() > max_norm) continue;

        // keep minima only: Hessian positive semidefinite within tolerance
        Eigen::MatrixXd h = -position_force_jacobian(x, r);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (h + h.transpose()));
        if (es.eigenvalues().minCoeff() < -1e-7) continue;

        bool dup = false;
        for (const auto& have : minima)
            if ((have - x).lpNorm<Eigen::Infinity>() < 1e-6) {
                dup = true;
                break;
            }
        if (!dup) minima.push_back(std::move(x));
    }

    std::sort(minima.begin(), minima.end(), [](const auto& a, const auto& b) {
        for (Eigen::Index i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });

    std::vector<Minimum> out;
    out.reserve(minima.size());
    for (auto& z : minima) {
        Minimum m;
        m.value = lyapunov_potential(z, r);
        m.grad_norm = lyapunov_gradient(z, r).lpNorm<Eigen::Infinity>();
        m.alpha = adiabatic_field({z, Eigen::VectorXd::Zero(n)}, r);
        m.zeta = std::move(z);
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<Eigen::VectorXd> grid_starts(int n, double lo, double hi, int grid) {
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(grid);
    std::vector<Eigen::VectorXd> starts;
    starts.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Eigen::VectorXd s(n);
        std::size_t rem = flat;
        for (int i = 0; i < n; ++i) {
            const auto gi = rem % grid;
            rem /= grid;
            s[i] = lo + (hi - lo) * static_cast<double>(gi) / (grid - 1);
        }
        starts.push_back(std::move(s));
    }
    return starts;
}

}  // namespace nphase
