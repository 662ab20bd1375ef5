#include "nphase/phase_diagram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "nphase/parallel.hpp"

namespace nphase {

const char* to_string(PhaseLabel label) {
    switch (label) {
        case PhaseLabel::normal: return "normal";
        case PhaseLabel::dispersive_broken: return "dispersive-broken";
        case PhaseLabel::reactive_broken: return "reactive-broken";
        case PhaseLabel::indeterminate: return "indeterminate";
    }
    return "unknown";
}

PhaseLabel classify_phase(int n_roots, int n_broken, int n_stable_broken) {
    if (n_roots <= 0) return PhaseLabel::indeterminate;
    if (n_broken == 0) return PhaseLabel::normal;
    if (n_stable_broken > 0) return PhaseLabel::dispersive_broken;
    return PhaseLabel::reactive_broken;
}

int designated_group(int n) { return std::min(2, n - 1); }

Eigen::VectorXd orbit_representative(const Eigen::VectorXd& zeta,
                                     const ReducedParams& r) {
    const int d = designated_group(r.n);
    const MechState m{zeta, Eigen::VectorXd::Zero(r.n)};
    Eigen::VectorXd best = zeta;
    bool have_positive = false;
    for (const auto& g : symmetry_group(r.n)) {
        const Eigen::VectorXd img = symmetry_transform(m, g).zeta;
        const bool pos = img[d] > 0.0;
        if (pos && (!have_positive || img[d] < best[d])) {
            best = img;
            have_positive = true;
        } else if (!have_positive && std::abs(img[d]) < std::abs(best[d])) {
            best = img;
        }
    }
    return best;
}

namespace {

constexpr double kOriginRadius = 1e-4;

struct Census {
    int n_roots = 0;
    int n_broken = 0;
    int n_stable_broken = 0;
    bool disagree = false;
    std::optional<double> tracked;
    bool tracked_stable = false;
};

Census take_census(std::vector<StationaryPoint>& pts, const ReducedParams& r,
                   double dedup_radius) {
    Census c;
    c.n_roots = static_cast<int>(pts.size());
    symmetry_orbits(pts, r, std::max(10.0 * dedup_radius, 1e-5));

    const int d = designated_group(r.n);
    double best_stable = 0.0, best_any = 0.0;
    for (const auto& p : pts) {
        c.disagree = c.disagree || p.jacobians_disagree;
        if (p.is_origin(kOriginRadius)) continue;
        ++c.n_broken;
        const Eigen::VectorXd rep = orbit_representative(p.zeta, r);
        const double val = rep[d];
        if (p.dynamically_stable()) {
            ++c.n_stable_broken;
            if (!c.tracked || !c.tracked_stable || val < best_stable) {
                c.tracked = val;
                c.tracked_stable = true;
                best_stable = val;
            }
        } else if (!c.tracked_stable) {
            if (!c.tracked || val < best_any) {
                c.tracked = val;
                best_any = val;
            }
        }
    }
    return c;
}

}  // namespace

std::vector<PhasePoint> sweep(const PhaseGrid& grid, const PhysicalParams& p,
                              const SearchRegion& region, int threads) {
    const std::size_t total = grid.omega_pump.size() * grid.delta_pc.size();
    std::vector<PhasePoint> out(total);
    parallel_for(total, threads, [&](std::size_t flat) {
        const std::size_t io = flat % grid.omega_pump.size();
        const std::size_t id = flat / grid.omega_pump.size();
        PhysicalParams node = p;
        node.omega_pump = grid.omega_pump[io];
        node.delta_pc = grid.delta_pc[id];

        PhasePoint pt;
        pt.omega_pump = node.omega_pump;
        pt.delta_pc = node.delta_pc;
        try {
            const ReducedParams r = reduce(node);
            auto pts = multistart_search(region, r);
            const Census c = take_census(pts, r, region.dedup_radius);
            pt.n_roots = c.n_roots;
            pt.n_stable = c.n_stable_broken;
            pt.label = classify_phase(c.n_roots, c.n_broken, c.n_stable_broken);
            if (pt.label != PhaseLabel::normal) pt.tracked_zeta = c.tracked;
            pt.stable = c.tracked_stable;
            pt.jacobians_disagree = c.disagree;
        } catch (const std::exception&) {
            pt.label = PhaseLabel::indeterminate;
        }
        out[flat] = pt;
    });
    return out;
}

namespace {

// Follow one root as omega changes; nullopt when Newton fails, leaves the
// neighbourhood, or collapses onto the origin.
std::optional<Eigen::VectorXd> follow(const Eigen::VectorXd& prev,
                                      const PhysicalParams& p, double omega,
                                      double tol) {
    PhysicalParams node = p;
    node.omega_pump = omega;
    const ReducedParams r = reduce(node);
    auto root = find_root(prev, r, tol);
    if (!root) return std::nullopt;
    if (root->is_origin(kOriginRadius)) return std::nullopt;
    if ((root->zeta - prev).lpNorm<Eigen::Infinity>() > 0.5) return std::nullopt;
    return root->zeta;
}

}  // namespace

LineCut line_cut(double delta_pc, const std::vector<double>& omega_range,
                 const PhysicalParams& p, const SearchRegion& region,
                 double jump_threshold) {
    if (omega_range.size() < 2)
        throw std::invalid_argument("line_cut: need at least two pump values");
    if (!std::is_sorted(omega_range.begin(), omega_range.end()))
        throw std::invalid_argument("line_cut: omega grid must be increasing");

    constexpr double kTol = 1e-11;
    LineCut cut;
    cut.delta_pc = delta_pc;
    cut.omegas = omega_range;
    cut.branch.assign(omega_range.size(), std::nullopt);

    PhysicalParams top = p;
    top.delta_pc = delta_pc;
    top.omega_pump = omega_range.back();
    const ReducedParams r_top = reduce(top);
    const int d = designated_group(r_top.n);

    auto pts = multistart_search(region, r_top, kTol);
    const Census c = take_census(pts, r_top, region.dedup_radius);
    if (!c.tracked) return cut;  // no broken branch at the top of the cut

    // locate the representative root matching the tracked value
    Eigen::VectorXd current;
    bool found = false;
    for (const auto& pt : pts) {
        if (pt.is_origin(kOriginRadius)) continue;
        const Eigen::VectorXd rep = orbit_representative(pt.zeta, r_top);
        if (std::abs(rep[d] - *c.tracked) < 1e-9) {
            current = rep;
            found = true;
            break;
        }
    }
    if (!found) return cut;

    PhysicalParams base = p;
    base.delta_pc = delta_pc;

    const auto count = static_cast<int>(omega_range.size());
    cut.branch[count - 1] = current[d];
    double omega_good = omega_range.back();
    for (int i = count - 2; i >= 0; --i) {
        auto next = follow(current, base, omega_range[i], kTol);
        if (!next) {
            // refine the fold between omega_range[i] and omega_good
            double lo = omega_range[i], hi = omega_good;
            for (int it = 0; it < 60 && (hi - lo) > 1e-9 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                auto probe = follow(current, base, mid, kTol);
                if (probe) {
                    current = *probe;
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            if (std::abs(current[d]) > jump_threshold) {
                cut.jump_at = hi;
                cut.jump_size = std::abs(current[d]);
            }
            return cut;
        }
        current = *next;
        cut.branch[i] = current[d];
        omega_good = omega_range[i];
    }
    return cut;
}

namespace {

struct GridFn {
    std::vector<double> xs, ys;
    std::vector<double> fa, fb;  // row-major, index = iy * nx + ix
    int nx = 0, ny = 0;
    double at(const std::vector<double>& f, int ix, int iy) const {
        return f[static_cast<std::size_t>(iy) * nx + ix];
    }
};

struct Segment {
    std::array<double, 2> a, b;
};

// Marching squares on one scalar field; saddle cells are split by the sign of
// the cell-centre average.
std::vector<Segment> extract_segments(const GridFn& g, const std::vector<double>& f) {
    std::vector<Segment> segs;
    auto interp = [](double x0, double x1, double v0, double v1) {
        return x0 + (x1 - x0) * (v0 / (v0 - v1));
    };
    for (int iy = 0; iy + 1 < g.ny; ++iy) {
        for (int ix = 0; ix + 1 < g.nx; ++ix) {
            const double v00 = g.at(f, ix, iy), v10 = g.at(f, ix + 1, iy);
            const double v11 = g.at(f, ix + 1, iy + 1), v01 = g.at(f, ix, iy + 1);
            int code = 0;
            if (v00 > 0) code |= 1;
            if (v10 > 0) code |= 2;
            if (v11 > 0) code |= 4;
            if (v01 > 0) code |= 8;
            if (code == 0 || code == 15) continue;

            const double x0 = g.xs[ix], x1 = g.xs[ix + 1];
            const double y0 = g.ys[iy], y1 = g.ys[iy + 1];
            // edge crossings: bottom, right, top, left
            std::array<std::array<double, 2>, 4> pt{};
            std::array<bool, 4> has{};
            if ((v00 > 0) != (v10 > 0)) {
                pt[0] = {interp(x0, x1, v00, v10), y0};
                has[0] = true;
            }
            if ((v10 > 0) != (v11 > 0)) {
                pt[1] = {x1, interp(y0, y1, v10, v11)};
                has[1] = true;
            }
            if ((v01 > 0) != (v11 > 0)) {
                pt[2] = {interp(x0, x1, v01, v11), y1};
                has[2] = true;
            }
            if ((v00 > 0) != (v01 > 0)) {
                pt[3] = {x0, interp(y0, y1, v00, v01)};
                has[3] = true;
            }

            std::vector<int> edges;
            for (int e = 0; e < 4; ++e)
                if (has[e]) edges.push_back(e);

            if (edges.size() == 2) {
                segs.push_back({pt[edges[0]], pt[edges[1]]});
            } else if (edges.size() == 4) {
                const double centre = 0.25 * (v00 + v10 + v11 + v01);
                const bool link_bl = ((v00 > 0) == (centre > 0));
                if (link_bl) {
                    segs.push_back({pt[0], pt[1]});  // bottom-right pair
                    segs.push_back({pt[2], pt[3]});  // top-left pair
                } else {
                    segs.push_back({pt[0], pt[3]});
                    segs.push_back({pt[1], pt[2]});
                }
            }
        }
    }
    return segs;
}

// Join segments that share endpoints into polylines.
std::vector<Polyline> stitch(const std::vector<Segment>& segs, double quantum) {
    auto key = [&](const std::array<double, 2>& p) {
        return std::pair<long long, long long>(
            llround(p[0] / quantum), llround(p[1] / quantum));
    };
    std::multimap<std::pair<long long, long long>, int> ends;
    for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
        ends.emplace(key(segs[i].a), i);
        ends.emplace(key(segs[i].b), i);
    }
    std::vector<bool> used(segs.size(), false);
    std::vector<Polyline> lines;
    for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
        if (used[i]) continue;
        used[i] = true;
        Polyline line{segs[i].a, segs[i].b};
        for (int dir = 0; dir < 2; ++dir) {
            for (;;) {
                const auto& tip = line.back();
                bool extended = false;
                auto range = ends.equal_range(key(tip));
                for (auto it = range.first; it != range.second; ++it) {
                    const int s = it->second;
                    if (used[s]) continue;
                    used[s] = true;
                    const auto& seg = segs[s];
                    const bool from_a =
                        key(seg.a) == key(tip);
                    line.push_back(from_a ? seg.b : seg.a);
                    extended = true;
                    break;
                }
                if (!extended) break;
            }
            std::reverse(line.begin(), line.end());
        }
        lines.push_back(std::move(line));
    }
    return lines;
}

std::optional<std::array<double, 2>> segment_intersection(const Segment& s,
                                                          const Segment& t) {
    const double rx = s.b[0] - s.a[0], ry = s.b[1] - s.a[1];
    const double qx = t.b[0] - t.a[0], qy = t.b[1] - t.a[1];
    const double den = rx * qy - ry * qx;
    if (std::abs(den) < 1e-30) return std::nullopt;
    const double dx = t.a[0] - s.a[0], dy = t.a[1] - s.a[1];
    const double uu = (dx * qy - dy * qx) / den;
    const double vv = (dx * ry - dy * rx) / den;
    if (uu < -1e-9 || uu > 1.0 + 1e-9 || vv < -1e-9 || vv > 1.0 + 1e-9)
        return std::nullopt;
    return std::array<double, 2>{s.a[0] + uu * rx, s.a[1] + uu * ry};
}

}  // namespace

ContourData contour_data(const PhysicalParams& p, double lo, double hi, int samples) {
    if (p.n != 4)
        throw std::invalid_argument("contour_data: defined for the n = 4 subspace");
    if (samples < 2) throw std::invalid_argument("contour_data: samples must be >= 2");
    const ReducedParams r = reduce(p);

    GridFn g;
    g.nx = g.ny = samples;
    g.xs.resize(samples);
    g.ys.resize(samples);
    for (int i = 0; i < samples; ++i)
        g.xs[i] = g.ys[i] = lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
    g.fa.resize(static_cast<std::size_t>(samples) * samples);
    g.fb.resize(static_cast<std::size_t>(samples) * samples);
    Eigen::VectorXd z(4);
    for (int iy = 0; iy < samples; ++iy)
        for (int ix = 0; ix < samples; ++ix) {
            z << g.xs[ix], g.ys[iy], -g.xs[ix], -g.ys[iy];
            const Eigen::VectorXd f = position_force(z, r);
            g.fa[static_cast<std::size_t>(iy) * samples + ix] = f[0];
            g.fb[static_cast<std::size_t>(iy) * samples + ix] = f[1];
        }

    const auto seg_a = extract_segments(g, g.fa);
    const auto seg_b = extract_segments(g, g.fb);
    const double cell = (hi - lo) / (samples - 1);

    ContourData out;
    out.dp1_zero = stitch(seg_a, 1e-9 * std::max(1.0, std::abs(hi - lo)));
    out.dp2_zero = stitch(seg_b, 1e-9 * std::max(1.0, std::abs(hi - lo)));

    // intersections of the two families, deduplicated at cell resolution
    for (const auto& sa : seg_a)
        for (const auto& sb : seg_b) {
            const auto pt = segment_intersection(sa, sb);
            if (!pt) continue;
            bool dup = false;
            for (const auto& have : out.intersections)
                if (std::hypot(have[0] - (*pt)[0], have[1] - (*pt)[1]) < 0.75 * cell) {
                    dup = true;
                    break;
                }
            if (!dup) out.intersections.push_back(*pt);
        }
    return out;
}

}  // namespace nphase
