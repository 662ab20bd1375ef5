#include "nphase/ensemble.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nphase/parallel.hpp"
#include "nphase/rng.hpp"

namespace nphase {

void EnsembleSpec::validate() const {
    if (count < 1) throw std::invalid_argument("EnsembleSpec: count must be >= 1");
    if (position_scale < 0.0 || momentum_scale < 0.0)
        throw std::invalid_argument("EnsembleSpec: scales must be >= 0");
}

MechState ensemble_initial_state(const EnsembleSpec& spec, int index, int n) {
    Rng rng = Rng::stream(spec.seed, static_cast<std::uint64_t>(index));
    MechState m = MechState::zero(n);
    for (int j = 0; j < n; ++j) m.zeta[j] = spec.position_scale * rng.gaussian();
    for (int j = 0; j < n; ++j) m.pi[j] = spec.momentum_scale * rng.gaussian();
    return m;
}

std::vector<Trajectory> run_ensemble(const EnsembleSpec& spec, const ReducedParams& r,
                                     const IntegratorControls& ctl, int threads) {
    spec.validate();
    ctl.validate();
    std::vector<Trajectory> out(spec.count);
    parallel_for(static_cast<std::size_t>(spec.count), threads, [&](std::size_t i) {
        FullState s0;
        s0.alpha = {0.0, 0.0};
        s0.mech = ensemble_initial_state(spec, static_cast<int>(i), r.n);
        out[i] = integrate_full(s0, r, ctl);
    });
    return out;
}

int Clusters::largest() const {
    int best = -1;
    std::size_t size = 0;
    for (int i = 0; i < count; ++i)
        if (members[i].size() > size) {
            size = members[i].size();
            best = i;
        }
    return best;
}

Clusters cluster_endpoints(const std::vector<std::complex<double>>& finals,
                           double radius) {
    if (!(radius > 0.0))
        throw std::invalid_argument("cluster_endpoints: radius must be > 0");
    const int n = static_cast<int>(finals.size());
    Clusters out;
    if (n == 0) return out;

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(finals[i] - finals[j]) <= radius)
                parent[find(i)] = find(j);

    std::vector<int> id(n, -1);
    for (int i = 0; i < n; ++i) {
        const int root = find(i);
        if (id[root] < 0) {
            id[root] = out.count++;
            out.members.emplace_back();
            out.centroids.emplace_back(0.0, 0.0);
        }
        out.members[id[root]].push_back(i);
        out.centroids[id[root]] += finals[i];
    }
    for (int c = 0; c < out.count; ++c)
        out.centroids[c] /= static_cast<double>(out.members[c].size());
    return out;
}

SymmetryFamily symmetry_family(const Clusters& clusters, int n, double radius,
                               std::size_t total_points) {
    SymmetryFamily fam;
    if (clusters.count == 0 || total_points == 0) return fam;

    const double phi = 2.0 * M_PI / n;
    const std::complex<double> seed = clusters.centroids[clusters.largest()];
    std::vector<std::complex<double>> orbit;
    for (int k = 0; k < n; ++k) {
        const std::complex<double> rot = std::polar(1.0, phi * k) * seed;
        orbit.push_back(rot);
        if (n % 2 == 1) orbit.push_back(-rot);
    }
    fam.orbit_size = static_cast<int>(orbit.size());

    for (const auto& target : orbit) {
        int best = -1;
        double dist = std::numeric_limits<double>::infinity();
        for (int c = 0; c < clusters.count; ++c) {
            const double d = std::abs(clusters.centroids[c] - target);
            if (d < dist) {
                dist = d;
                best = c;
            }
        }
        if (best >= 0 && dist <= radius) {
            ++fam.matched;
            if (std::find(fam.clusters.begin(), fam.clusters.end(), best) ==
                fam.clusters.end())
                fam.clusters.push_back(best);
        }
    }

    std::size_t inside = 0;
    for (int c : fam.clusters) inside += clusters.members[c].size();
    fam.member_fraction = static_cast<double>(inside) / total_points;
    std::sort(fam.clusters.begin(), fam.clusters.end());
    return fam;
}

}  // namespace nphase
