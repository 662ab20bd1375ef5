#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "nphase/config.hpp"
#include "nphase/ensemble.hpp"
#include "nphase/integrate.hpp"
#include "nphase/linear.hpp"
#include "nphase/model.hpp"
#include "nphase/output.hpp"
#include "nphase/phase_diagram.hpp"
#include "nphase/stationary.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nphase;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitPartial = 3;
constexpr int kExitTotal = 4;

struct CliOverrides {
    std::string config_path;
    std::string out_dir;
    std::string formats;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

RunConfig load_config(const CliOverrides& cli) {
    RunConfig cfg = RunConfig::load(cli.config_path);
    if (!cli.out_dir.empty()) cfg.output_dir = cli.out_dir;
    if (cli.seed_set) {
        cfg.seed = cli.seed;
        if (cfg.ensemble) cfg.ensemble->seed = cli.seed;
    }
    if (cli.threads > 0) cfg.threads = cli.threads;
    if (!cli.formats.empty()) {
        cfg.formats.clear();
        std::string token;
        for (char c : cli.formats + ",") {
            if (c == ',') {
                if (!token.empty()) {
                    if (token != "csv" && token != "json" && token != "svg")
                        throw ConfigError("unknown format '" + token + "'");
                    cfg.formats.push_back(token);
                    token.clear();
                }
            } else {
                token += c;
            }
        }
    }
    return cfg;
}

bool wants(const RunConfig& cfg, const std::string& fmt) {
    for (const auto& f : cfg.formats)
        if (f == fmt) return true;
    return false;
}

fs::path ensure_out_dir(const RunConfig& cfg) {
    if (cfg.output_dir.empty())
        throw ConfigError("this command writes files: set output_dir or --out");
    fs::create_directories(cfg.output_dir);
    return cfg.output_dir;
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path);
    out << doc.dump(2) << "\n";
}

json complex_json(const std::complex<double>& c) {
    return json{{"re", c.real()}, {"im", c.imag()}};
}

double hz(double rad_per_s) { return rad_per_s / (2.0 * M_PI); }

// ---------------------------------------------------------------- modes ----

int cmd_modes(const RunConfig& cfg) {
    const ReducedParams r = reduce(cfg.params);
    json report;
    report["eps"] = r.eps;
    report["theta"] = r.theta;
    report["phi"] = r.phi;
    std::printf("reduced parameters:\n");
    std::printf("  eps     = %s\n", format_number(r.eps).c_str());
    std::printf("  theta   = %s rad\n", format_number(r.theta).c_str());
    std::printf("  delta   = %s, kappa_t = %s (units of omega_z)\n",
                format_number(r.delta).c_str(), format_number(r.kappa_t).c_str());
    if (cfg.params.n > 2) {
        const ModePair m = normal_modes(r);
        auto signed_str = [](double v) {
            return (v < 0.0 ? "" : "+") + format_number(v);
        };
        std::printf("normal-phase eigenfrequencies (units of omega_z):\n");
        std::printf("  omega+  = %s %si\n", format_number(m.omega_plus.real()).c_str(),
                    signed_str(m.omega_plus.imag()).c_str());
        std::printf("  omega-  = %s %si\n", format_number(m.omega_minus.real()).c_str(),
                    signed_str(m.omega_minus.imag()).c_str());
        std::printf("  growth  = %s\n", format_number(m.growth_rate).c_str());
        report["omega_plus"] = complex_json(m.omega_plus);
        report["omega_minus"] = complex_json(m.omega_minus);
        report["growth_rate"] = m.growth_rate;
    }
    if (cfg.params.delta_pc != 0.0) {
        const double oc = critical_pump(cfg.params);
        std::printf("critical pump:\n  Omega_c = %s rad/s (%s MHz /2pi)\n",
                    format_number(oc).c_str(), format_number(hz(oc) / 1e6).c_str());
        report["omega_c"] = oc;
    }
    if (!cfg.output_dir.empty() && wants(cfg, "json"))
        write_json(ensure_out_dir(cfg) / "modes.json", report);
    return kExitOk;
}

// ------------------------------------------------------------- lyapunov ----

int cmd_lyapunov(const RunConfig& cfg) {
    if (cfg.params.kappa != 0.0)
        throw ConfigError("lyapunov requires kappa = 0 in $.params.kappa");
    const ReducedParams r = reduce(cfg.params);
    const int n = cfg.params.n;

    const auto starts =
        grid_starts(n, cfg.lyapunov.lo, cfg.lyapunov.hi, cfg.lyapunov.grid_per_dim);
    auto minima = lyapunov_minimize(starts, r, 1e-10, cfg.lyapunov.max_norm);

    // orbit ids from the symmetry partition
    std::vector<StationaryPoint> pts;
    for (const auto& m : minima) {
        StationaryPoint p;
        p.zeta = m.zeta;
        pts.push_back(p);
    }
    symmetry_orbits(pts, r, 1e-5);

    int broken = 0;
    for (const auto& m : minima)
        if (m.zeta.lpNorm<Eigen::Infinity>() > 1e-6) ++broken;
    std::printf("lyapunov: %zu minima (%d symmetry-broken)\n", minima.size(), broken);

    const fs::path dir = ensure_out_dir(cfg);
    if (wants(cfg, "csv")) {
        std::vector<std::string> cols{"orbit_id", "value", "re_alpha", "im_alpha"};
        for (int j = 0; j < n; ++j) cols.push_back("zeta_" + std::to_string(j));
        CsvWriter csv((dir / "lyapunov_minima.csv").string(), "nphase.lyapunov", 1, cols);
        for (std::size_t i = 0; i < minima.size(); ++i) {
            std::vector<std::string> row{CsvWriter::cell(pts[i].orbit_id),
                                         CsvWriter::cell(minima[i].value),
                                         CsvWriter::cell(minima[i].alpha.real()),
                                         CsvWriter::cell(minima[i].alpha.imag())};
            for (int j = 0; j < n; ++j) row.push_back(CsvWriter::cell(minima[i].zeta[j]));
            csv.row(row);
        }
    }
    if (wants(cfg, "json")) {
        json doc;
        doc["count"] = minima.size();
        doc["broken"] = broken;
        json items = json::array();
        for (std::size_t i = 0; i < minima.size(); ++i) {
            json it;
            it["orbit_id"] = pts[i].orbit_id;
            it["value"] = minima[i].value;
            it["alpha"] = complex_json(minima[i].alpha);
            it["zeta"] = std::vector<double>(minima[i].zeta.data(),
                                             minima[i].zeta.data() + n);
            items.push_back(it);
        }
        doc["minima"] = items;
        write_json(dir / "lyapunov.json", doc);
    }
    if (wants(cfg, "svg")) {
        double amax = 1e-9;
        for (const auto& m : minima) amax = std::max(amax, std::abs(m.alpha));
        SvgCanvas svg(-1.2 * amax, 1.2 * amax, -1.2 * amax, 1.2 * amax);
        svg.axes("Re alpha", "Im alpha");
        for (std::size_t i = 0; i < minima.size(); ++i)
            svg.circle(minima[i].alpha.real(), minima[i].alpha.imag(), 6.0,
                       SvgCanvas::palette(pts[i].orbit_id));
        svg.save((dir / "lyapunov.svg").string());
    }
    return kExitOk;
}

// --------------------------------------------------------------- steady ----

int cmd_steady(const RunConfig& cfg) {
    if (!cfg.search) throw ConfigError("steady needs a $.search block");
    const ReducedParams r = reduce(cfg.params);
    SearchReport report;
    auto pts = multistart_search(*cfg.search, r, 1e-11, &report, cfg.threads);
    symmetry_orbits(pts, r, std::max(10.0 * cfg.search->dedup_radius, 1e-5));

    int stars = 0;
    for (const auto& p : pts)
        if (!p.is_origin() && p.dynamically_stable()) ++stars;
    std::printf("steady: %zu points (%d broken stars), %d/%d starts converged\n",
                pts.size(), stars, report.attempts - report.failures, report.attempts);

    const fs::path dir = ensure_out_dir(cfg);
    const int n = cfg.params.n;
    if (wants(cfg, "csv")) {
        std::vector<std::string> cols{"stability", "stable",   "orbit_id",
                                      "residual",  "max_re",   "max_re_full",
                                      "disagree",  "re_alpha", "im_alpha"};
        for (int j = 0; j < n; ++j) cols.push_back("zeta_" + std::to_string(j));
        CsvWriter csv((dir / "steady.csv").string(), "nphase.steady", 1, cols);
        for (const auto& p : pts) {
            std::vector<std::string> row{
                to_string(p.stability),
                p.dynamically_stable() ? "1" : "0",
                CsvWriter::cell(p.orbit_id),
                CsvWriter::cell(p.residual),
                CsvWriter::cell(p.eigenvalues.front().real()),
                CsvWriter::cell(p.full_max_re),
                p.jacobians_disagree ? "1" : "0",
                CsvWriter::cell(p.alpha.real()),
                CsvWriter::cell(p.alpha.imag())};
            for (int j = 0; j < n; ++j) row.push_back(CsvWriter::cell(p.zeta[j]));
            csv.row(row);
        }
    }
    if (wants(cfg, "json")) {
        json doc;
        doc["count"] = pts.size();
        doc["stars"] = stars;
        doc["attempts"] = report.attempts;
        doc["failures"] = report.failures;
        json items = json::array();
        for (const auto& p : pts) {
            json it;
            it["zeta"] = std::vector<double>(p.zeta.data(), p.zeta.data() + n);
            it["alpha"] = complex_json(p.alpha);
            it["stability"] = to_string(p.stability);
            it["stable"] = p.dynamically_stable();
            it["orbit_id"] = p.orbit_id;
            it["residual"] = p.residual;
            it["max_re_full"] = p.full_max_re;
            it["jacobians_disagree"] = p.jacobians_disagree;
            json eigs = json::array();
            for (const auto& ev : p.eigenvalues) eigs.push_back(complex_json(ev));
            it["eigenvalues"] = eigs;
            items.push_back(it);
        }
        doc["points"] = items;
        write_json(dir / "steady.json", doc);
    }
    return kExitOk;
}

// ----------------------------------------------------------------- traj ----

int cmd_traj(const RunConfig& cfg) {
    if (!cfg.ensemble) throw ConfigError("traj needs an $.ensemble block");
    if (!cfg.integrator) throw ConfigError("traj needs an $.integrator block");
    const ReducedParams r = reduce(cfg.params);
    const int n = cfg.params.n;

    const auto trajs = run_ensemble(*cfg.ensemble, r, *cfg.integrator, cfg.threads);
    int failed = 0;
    std::vector<std::complex<double>> finals;
    for (const auto& t : trajs) {
        if (t.status != IntegrationStatus::ok) {
            ++failed;
            continue;
        }
        finals.push_back(t.final_alpha());
    }
    if (failed > 0)
        std::fprintf(stderr, "traj: %d of %zu trajectories failed\n", failed,
                     trajs.size());
    if (finals.empty()) {
        std::fprintf(stderr, "traj: no trajectory finished\n");
        return kExitTotal;
    }

    double amax = 1e-12;
    for (const auto& f : finals) amax = std::max(amax, std::abs(f));
    const double radius = cfg.cluster_radius_frac * amax;
    const Clusters clusters = cluster_endpoints(finals, radius);
    const SymmetryFamily family = symmetry_family(clusters, n, radius, finals.size());
    std::printf("traj: %zu trajectories, %d clusters, family of %zu holds %.0f%%\n",
                trajs.size(), clusters.count, family.clusters.size(),
                100.0 * family.member_fraction);

    const fs::path dir = ensure_out_dir(cfg);
    if (wants(cfg, "csv")) {
        for (std::size_t i = 0; i < trajs.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "traj_%03zu.csv", i);
            std::vector<std::string> cols{"tau", "t_s", "re_alpha", "im_alpha"};
            for (int j = 0; j < n; ++j) cols.push_back("zeta_" + std::to_string(j));
            for (int j = 0; j < n; ++j) cols.push_back("pi_" + std::to_string(j));
            CsvWriter csv((dir / name).string(), "nphase.trajectory", 1, cols);
            csv.comment("status: " + std::string(to_string(trajs[i].status)));
            const auto& t = trajs[i];
            for (std::size_t k = 0; k < t.times.size(); ++k) {
                const FullState s = unpack_full(t.states[k]);
                std::vector<std::string> row{
                    CsvWriter::cell(t.times[k]),
                    CsvWriter::cell(t.times[k] / cfg.params.omega_z),
                    CsvWriter::cell(s.alpha.real()), CsvWriter::cell(s.alpha.imag())};
                for (int j = 0; j < n; ++j) row.push_back(CsvWriter::cell(s.mech.zeta[j]));
                for (int j = 0; j < n; ++j) row.push_back(CsvWriter::cell(s.mech.pi[j]));
                csv.row(row);
            }
        }
    }
    if (wants(cfg, "json")) {
        json doc;
        doc["trajectories"] = trajs.size();
        doc["failed"] = failed;
        doc["radius"] = radius;
        doc["cluster_count"] = clusters.count;
        json cents = json::array();
        for (int c = 0; c < clusters.count; ++c) {
            json it = complex_json(clusters.centroids[c]);
            it["size"] = clusters.members[c].size();
            cents.push_back(it);
        }
        doc["centroids"] = cents;
        doc["members"] = clusters.members;
        doc["family"] = {{"clusters", family.clusters},
                         {"orbit_size", family.orbit_size},
                         {"matched", family.matched},
                         {"member_fraction", family.member_fraction}};
        write_json(dir / "clusters.json", doc);
    }
    if (wants(cfg, "svg")) {
        double lim = 1e-12;
        for (const auto& t : trajs)
            for (const auto& a : t.alpha_series)
                lim = std::max({lim, std::abs(a.real()), std::abs(a.imag())});
        lim *= 1.05;
        SvgCanvas svg(-lim, lim, -lim, lim);
        svg.axes("Re alpha", "Im alpha");
        for (std::size_t i = 0; i < trajs.size(); ++i) {
            const auto& t = trajs[i];
            const std::string color = SvgCanvas::palette(static_cast<int>(i));
            for (const auto& a : t.alpha_series)
                svg.circle(a.real(), a.imag(), 1.2, color, 0.35);
        }
        for (int c = 0; c < clusters.count; ++c)
            svg.circle(clusters.centroids[c].real(), clusters.centroids[c].imag(), 5.0,
                       "#000000");
        svg.save((dir / "traj.svg").string());
    }
    return failed == 0 ? kExitOk : kExitPartial;
}

// ---------------------------------------------------------------- phase ----

int cmd_phase(const RunConfig& cfg) {
    if (!cfg.search) throw ConfigError("phase needs a $.search block");
    const fs::path dir = ensure_out_dir(cfg);
    const double lambda_factor = 1.0 / (2.0 * M_PI);  // zeta -> z / lambda
    bool any_indeterminate = false;
    bool wrote_anything = false;

    if (cfg.grid_omega && cfg.grid_delta_pc) {
        PhaseGrid grid;
        grid.omega_pump = cfg.grid_omega->values();
        grid.delta_pc = cfg.grid_delta_pc->values();
        const auto pts = sweep(grid, cfg.params, *cfg.search, cfg.threads);
        for (const auto& p : pts)
            any_indeterminate |= (p.label == PhaseLabel::indeterminate);
        wrote_anything = true;

        if (wants(cfg, "csv")) {
            CsvWriter csv((dir / "phase.csv").string(), "nphase.phase", 1,
                          {"omega_pump_hz", "delta_pc_hz", "tracked_z_over_lambda",
                           "phase_label", "n_roots", "n_stable"});
            for (const auto& p : pts) {
                csv.row({CsvWriter::cell(hz(p.omega_pump)),
                         CsvWriter::cell(hz(p.delta_pc)),
                         p.tracked_zeta ? CsvWriter::cell(*p.tracked_zeta * lambda_factor)
                                        : std::string{},
                         to_string(p.label), CsvWriter::cell(p.n_roots),
                         CsvWriter::cell(p.n_stable)});
            }
        }
        if (wants(cfg, "svg")) {
            const double xmin = hz(grid.omega_pump.front());
            const double xmax = hz(grid.omega_pump.back());
            const double ymin = hz(grid.delta_pc.front());
            const double ymax = hz(grid.delta_pc.back());
            SvgCanvas svg(xmin, xmax, std::min(ymin, ymax), std::max(ymin, ymax));
            svg.axes("pump / Hz", "delta_pc / Hz");
            double zmax = 1e-12;
            for (const auto& p : pts)
                if (p.tracked_zeta) zmax = std::max(zmax, *p.tracked_zeta);
            const double dx = grid.omega_pump.size() > 1
                                  ? hz(grid.omega_pump[1] - grid.omega_pump[0])
                                  : 1.0;
            const double dy = grid.delta_pc.size() > 1
                                  ? std::abs(hz(grid.delta_pc[1] - grid.delta_pc[0]))
                                  : 1.0;
            for (const auto& p : pts) {
                std::string fill = "#dddddd";
                if (p.label == PhaseLabel::dispersive_broken && p.tracked_zeta)
                    fill = SvgCanvas::heat(*p.tracked_zeta / zmax);
                else if (p.label == PhaseLabel::reactive_broken)
                    fill = "#666666";
                svg.rect(hz(p.omega_pump) - 0.5 * dx, hz(p.delta_pc) - 0.5 * dy,
                         hz(p.omega_pump) + 0.5 * dx, hz(p.delta_pc) + 0.5 * dy, fill);
            }
            svg.save((dir / "phase.svg").string());
        }
    }

    if (!cfg.linecuts.empty()) {
        if (!cfg.linecut_omega)
            throw ConfigError("phase linecuts need $.linecut_omega");
        wrote_anything = true;
        const auto omegas = cfg.linecut_omega->values();
        for (std::size_t k = 0; k < cfg.linecuts.size(); ++k) {
            const LineCut cut =
                line_cut(cfg.linecuts[k], omegas, cfg.params, *cfg.search);
            const std::string verdict =
                cut.jump_at ? "discontinuity at " +
                                  format_number(hz(*cut.jump_at) / 1e6) + " MHz"
                            : std::string("continuous");
            std::printf("linecut %zu (delta_pc = %s MHz): %s\n", k,
                        format_number(hz(cut.delta_pc) / 1e6).c_str(), verdict.c_str());
            if (wants(cfg, "csv")) {
                char name[32];
                std::snprintf(name, sizeof(name), "linecut_%zu.csv", k);
                CsvWriter csv((dir / name).string(), "nphase.linecut", 1,
                              {"omega_pump_hz", "tracked_zeta_rad",
                               "tracked_z_over_lambda"});
                csv.comment("delta_pc_hz: " + format_number(hz(cut.delta_pc)));
                csv.comment(cut.jump_at
                                ? "jump_at_hz: " + format_number(hz(*cut.jump_at))
                                : std::string("jump_at_hz: none"));
                csv.comment("jump_size_rad: " + format_number(cut.jump_size));
                for (std::size_t i = 0; i < cut.omegas.size(); ++i)
                    csv.row({CsvWriter::cell(hz(cut.omegas[i])),
                             cut.branch[i] ? CsvWriter::cell(*cut.branch[i])
                                           : std::string{},
                             cut.branch[i]
                                 ? CsvWriter::cell(*cut.branch[i] * lambda_factor)
                                 : std::string{}});
            }
            if (wants(cfg, "svg")) {
                char name[32];
                std::snprintf(name, sizeof(name), "linecut_%zu.svg", k);
                double zmax = 0.1;
                for (const auto& b : cut.branch)
                    if (b) zmax = std::max(zmax, *b);
                SvgCanvas svg(hz(omegas.front()), hz(omegas.back()), 0.0, 1.1 * zmax);
                svg.axes("pump / Hz", "tracked zeta / rad");
                std::vector<std::pair<double, double>> line;
                for (std::size_t i = 0; i < cut.omegas.size(); ++i)
                    if (cut.branch[i]) line.push_back({hz(cut.omegas[i]), *cut.branch[i]});
                svg.polyline(line, SvgCanvas::palette(static_cast<int>(k)), 2.0);
                svg.save((dir / name).string());
            }
        }
    }

    for (std::size_t k = 0; k < cfg.contours.size(); ++k) {
        wrote_anything = true;
        PhysicalParams p = cfg.params;
        p.omega_pump = cfg.contours[k].omega_pump;
        p.delta_pc = cfg.contours[k].delta_pc;
        const ContourData cd = contour_data(p, cfg.contours[k].lo, cfg.contours[k].hi,
                                            cfg.contours[k].samples);
        if (wants(cfg, "csv")) {
            char name[40];
            std::snprintf(name, sizeof(name), "contour_%zu.csv", k);
            CsvWriter csv((dir / name).string(), "nphase.contour", 1,
                          {"family", "polyline", "z1_over_lambda", "z2_over_lambda"});
            auto dump = [&](const std::vector<Polyline>& lines, const char* family) {
                for (std::size_t li = 0; li < lines.size(); ++li)
                    for (const auto& pt : lines[li])
                        csv.row({family, CsvWriter::cell(static_cast<int>(li)),
                                 CsvWriter::cell(pt[0] * lambda_factor),
                                 CsvWriter::cell(pt[1] * lambda_factor)});
            };
            dump(cd.dp1_zero, "dp1");
            dump(cd.dp2_zero, "dp2");
            std::snprintf(name, sizeof(name), "contour_%zu_roots.csv", k);
            CsvWriter roots((dir / name).string(), "nphase.contour-roots", 1,
                            {"z1_over_lambda", "z2_over_lambda"});
            for (const auto& pt : cd.intersections)
                roots.row({CsvWriter::cell(pt[0] * lambda_factor),
                           CsvWriter::cell(pt[1] * lambda_factor)});
        }
        if (wants(cfg, "svg")) {
            char name[40];
            std::snprintf(name, sizeof(name), "contour_%zu.svg", k);
            SvgCanvas svg(cfg.contours[k].lo, cfg.contours[k].hi, cfg.contours[k].lo,
                          cfg.contours[k].hi);
            svg.axes("zeta_1 / rad", "zeta_2 / rad");
            for (const auto& line : cd.dp1_zero) {
                std::vector<std::pair<double, double>> pl;
                for (const auto& pt : line) pl.push_back({pt[0], pt[1]});
                svg.polyline(pl, "#1f77b4", 1.5);
            }
            for (const auto& line : cd.dp2_zero) {
                std::vector<std::pair<double, double>> pl;
                for (const auto& pt : line) pl.push_back({pt[0], pt[1]});
                svg.polyline(pl, "#d62728", 1.5);
            }
            for (const auto& pt : cd.intersections)
                svg.circle(pt[0], pt[1], 4.0, "#2ca02c");
            svg.save((dir / name).string());
        }
    }

    if (!wrote_anything)
        throw ConfigError("phase needs $.grid, $.linecuts or $.contours");
    return any_indeterminate ? kExitPartial : kExitOk;
}

// ----------------------------------------------------------------- heff ----

int cmd_heff(const RunConfig& cfg) {
    const ReducedParams r = reduce(cfg.params);
    const EffectiveHamiltonian h = build_heff(r);
    const int n = cfg.params.n;
    std::printf("H_eff (units of omega_z), phi = %s:\n",
                format_number(h.phi_used).c_str());
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) std::printf(" %12.6f", h.matrix(j, l));
        std::printf("\n");
    }
    const double nr = nonreciprocity(h);
    std::printf("non-reciprocity max|H_jl - H_lj| = %s\n", format_number(nr).c_str());

    json doc;
    std::vector<std::vector<double>> rows(n, std::vector<double>(n));
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) rows[j][l] = h.matrix(j, l);
    doc["matrix"] = rows;
    doc["phi"] = h.phi_used;
    doc["nonreciprocity"] = nr;

    if (cfg.params.kappa > 0.0) {
        const double vs = ideal_phase(r);
        std::printf("ideal non-reciprocity phase varphi* = %s rad\n",
                    format_number(vs).c_str());
        doc["ideal_phase"] = vs;
        if (n == 2) {
            const double varphi = cfg.varphi.value_or(vs);
            const Eigen::Matrix2d two = two_group_heff(r, varphi);
            std::printf("two-group H_eff at varphi = %s:\n  [[%s, %s], [%s, %s]]\n",
                        format_number(varphi).c_str(),
                        format_number(two(0, 0)).c_str(),
                        format_number(two(0, 1)).c_str(),
                        format_number(two(1, 0)).c_str(),
                        format_number(two(1, 1)).c_str());
            doc["two_group"] = {{"varphi", varphi},
                                {"h11", two(0, 0)},
                                {"h12", two(0, 1)},
                                {"h21", two(1, 0)},
                                {"h22", two(1, 1)}};
        }
    }
    if (!cfg.output_dir.empty() && wants(cfg, "json"))
        write_json(ensure_out_dir(cfg) / "heff.json", doc);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "mean-field simulator for a phase-stepped atom array in a lossy cavity"};
    app.require_subcommand(1);

    CliOverrides cli;
    app.add_option("--config", cli.config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    app.add_option("--out", cli.out_dir, "output directory (overrides config)");
    app.add_option("--seed", cli.seed, "random seed (overrides config)")
        ->each([&cli](const std::string&) { cli.seed_set = true; });
    app.add_option("--threads", cli.threads, "worker threads");
    app.add_option("--format", cli.formats, "comma-separated subset of csv,json,svg");

    auto* modes =
        app.add_subcommand("modes", "normal-phase eigenfrequencies and thresholds");
    auto* lyap = app.add_subcommand("lyapunov", "kappa = 0 Lyapunov minimization");
    auto* steady = app.add_subcommand("steady", "multistart stationary-state census");
    auto* traj = app.add_subcommand("traj", "ensemble time integration and clustering");
    auto* phase =
        app.add_subcommand("phase", "phase diagram, line cuts and force contours");
    auto* heff = app.add_subcommand("heff", "effective phonon hopping matrix");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_config(cli);
        if (modes->parsed()) return cmd_modes(cfg);
        if (lyap->parsed()) return cmd_lyapunov(cfg);
        if (steady->parsed()) return cmd_steady(cfg);
        if (traj->parsed()) return cmd_traj(cfg);
        if (phase->parsed()) return cmd_phase(cfg);
        if (heff->parsed()) return cmd_heff(cfg);
    } catch (const ConfigError& err) {
        std::fprintf(stderr, "%s\n", err.what());
        return kExitConfig;
    } catch (const std::invalid_argument& err) {
        std::fprintf(stderr, "invalid configuration: %s\n", err.what());
        return kExitConfig;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "failure: %s\n", err.what());
        return kExitTotal;
    }
    return kExitOk;
}
