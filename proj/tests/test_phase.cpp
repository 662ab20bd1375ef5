#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nphase/linear.hpp"
#include "nphase/phase_diagram.hpp"
#include "test_params.hpp"

using namespace nphase;
using doctest::Approx;

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> xs(count);
    for (int i = 0; i < count; ++i)
        xs[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    return xs;
}

}  // namespace

TEST_CASE("classify_phase: rule table") {
    CHECK(classify_phase(1, 0, 0) == PhaseLabel::normal);
    CHECK(classify_phase(9, 8, 4) == PhaseLabel::dispersive_broken);
    CHECK(classify_phase(13, 12, 0) == PhaseLabel::reactive_broken);
    CHECK(classify_phase(0, 0, 0) == PhaseLabel::indeterminate);
}

TEST_CASE("orbit_representative: positive, minimal designated coordinate") {
    const ReducedParams r = reduce(testing::trajectory_params(4));
    Eigen::VectorXd z(4);
    z << 0.3, 0.7, -0.3, -0.7;
    const Eigen::VectorXd rep = orbit_representative(z, r);
    CHECK(rep[designated_group(4)] > 0.0);
    CHECK(rep[designated_group(4)] == Approx(0.3).epsilon(1e-12));
}

TEST_CASE("sweep: normal label below threshold, broken above") {
    PhysicalParams p = testing::dispersive_params(0.0);
    PhaseGrid grid;
    grid.omega_pump = {2 * M_PI * 5e6, 2 * M_PI * 25e6};
    grid.delta_pc = {-2 * M_PI * 50e6};
    const auto pts = sweep(grid, p, SearchRegion::subspace(-1.5, 1.5, 9), 2);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].label == PhaseLabel::normal);
    CHECK(pts[0].n_roots == 1);
    CHECK_FALSE(pts[0].tracked_zeta.has_value());
    CHECK(pts[1].label == PhaseLabel::dispersive_broken);
    CHECK(pts[1].n_stable == 4);
    CHECK(pts[1].tracked_zeta.has_value());
    CHECK(pts[1].stable);
}

TEST_CASE("sweep: reactive regime labels") {
    const PhysicalParams p = testing::reactive_params();
    PhaseGrid grid;
    grid.omega_pump = {p.omega_pump};
    grid.delta_pc = {p.delta_pc};
    const auto pts = sweep(grid, p, SearchRegion::subspace(-1.25 * M_PI, 1.25 * M_PI, 13), 2);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].label == PhaseLabel::reactive_broken);
    CHECK(pts[0].n_stable == 0);
}

TEST_CASE("line_cut: first-order fold on the weakly dispersive line") {
    // continuation verified against an independent solver: the branch at
    // delta_pc = -2pi*4 MHz folds near 2pi*5.92 MHz with a ~0.77 rad jump
    const PhysicalParams p = testing::trajectory_params(4);
    const LineCut cut = line_cut(-2 * M_PI * 4e6,
                                 linspace(2 * M_PI * 1e6, 2 * M_PI * 30e6, 120), p,
                                 SearchRegion::subspace(-1.6, 1.6, 9));
    REQUIRE(cut.jump_at.has_value());
    CHECK(*cut.jump_at / (2 * M_PI * 1e6) == Approx(5.919).epsilon(0.01));
    CHECK(cut.jump_size > 0.1);
    // tracked representative carries the smaller of the two subspace
    // coordinates (0.417, 0.769) at the fold
    CHECK(cut.jump_size == Approx(0.41697).epsilon(0.02));
    // branch present at the top, absent at the bottom
    CHECK(cut.branch.back().has_value());
    CHECK_FALSE(cut.branch.front().has_value());
    // monotone nondecreasing tracked position along the stable branch
    double prev = -1.0;
    for (const auto& b : cut.branch)
        if (b) {
            CHECK(*b >= prev - 1e-9);
            prev = *b;
        }
}

TEST_CASE("line_cut: second-order endpoint at kappa = 0 matches the critical pump") {
    PhysicalParams p = testing::conservative_params(4);
    p.delta_pc = -2 * M_PI * 50e6;
    const double oc = critical_pump(p);
    const LineCut cut = line_cut(p.delta_pc,
                                 linspace(2 * M_PI * 10e6, 2 * M_PI * 30e6, 100), p,
                                 SearchRegion::subspace(-1.6, 1.6, 9));
    CHECK_FALSE(cut.jump_at.has_value());
    CHECK(cut.jump_size < 0.1);
    // the last omega with a branch value sits within 1% of Omega_c
    double last_omega = 0.0;
    for (std::size_t i = 0; i < cut.branch.size(); ++i)
        if (cut.branch[i] && last_omega == 0.0) last_omega = cut.omegas[i];
    REQUIRE(last_omega > 0.0);
    CHECK(last_omega == Approx(oc).epsilon(0.01));
}

TEST_CASE("line_cut: the two detunings fold at different pumps") {
    const PhysicalParams p = testing::trajectory_params(4);
    const auto omegas = linspace(2 * M_PI * 1e6, 2 * M_PI * 30e6, 100);
    const SearchRegion region = SearchRegion::subspace(-1.6, 1.6, 9);
    const LineCut a = line_cut(-2 * M_PI * 4e6, omegas, p, region);
    const LineCut b = line_cut(-2 * M_PI * 50e6, omegas, p, region);
    REQUIRE(a.jump_at.has_value());
    REQUIRE(b.jump_at.has_value());
    CHECK(std::abs(*a.jump_at - *b.jump_at) > 2 * M_PI * 1e6);
    CHECK(b.jump_size > 0.1);
}

TEST_CASE("sweep: labels are stable under grid refinement away from boundaries") {
    PhysicalParams p = testing::dispersive_params(0.0);
    PhaseGrid grid;
    grid.omega_pump = linspace(2 * M_PI * 4e6, 2 * M_PI * 26e6, 7);
    grid.delta_pc = {-2 * M_PI * 50e6, -2 * M_PI * 20e6};
    const auto coarse = sweep(grid, p, SearchRegion::subspace(-1.5, 1.5, 9), 2);
    const auto fine = sweep(grid, p, SearchRegion::subspace(-1.5, 1.5, 17), 2);
    REQUIRE(coarse.size() == fine.size());
    const auto cols = grid.omega_pump.size();
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        if (coarse[i].label == fine[i].label) continue;
        // a change is acceptable only next to a label boundary of the coarse run
        bool near_boundary = false;
        const std::size_t io = i % cols;
        if (io > 0 && coarse[i - 1].label != coarse[i].label) near_boundary = true;
        if (io + 1 < cols && coarse[i + 1].label != coarse[i].label) near_boundary = true;
        CHECK(near_boundary);
    }
}

TEST_CASE("contour_data: zero drive leaves only the axes") {
    PhysicalParams p = testing::trajectory_params(4);
    p.omega_pump = 0.0;
    const ContourData cd = contour_data(p, -1.5, 1.5, 101);
    REQUIRE(cd.intersections.size() == 1);
    CHECK(std::hypot(cd.intersections[0][0], cd.intersections[0][1]) < 1e-9);
    // dp1 = 0 on the a = 0 line, dp2 = 0 on the b = 0 line
    for (const auto& line : cd.dp1_zero)
        for (const auto& pt : line) CHECK(std::abs(pt[0]) < 1e-9);
    for (const auto& line : cd.dp2_zero)
        for (const auto& pt : line) CHECK(std::abs(pt[1]) < 1e-9);
}

TEST_CASE("contour_data: nine intersections in the dispersive window, all refine") {
    const double obif = 2 * M_PI * 17.5914e6;
    PhysicalParams p = testing::dispersive_params(1.1 * obif);
    const ReducedParams r = reduce(p);
    const double lim = M_PI / 2 * 0.999;
    const ContourData cd = contour_data(p, -lim, lim, 161);
    CHECK(cd.intersections.size() == 9);
    for (const auto& pt : cd.intersections) {
        Eigen::VectorXd guess(4);
        guess << pt[0], pt[1], -pt[0], -pt[1];
        const auto root = find_root(guess, r, 1e-11);
        REQUIRE(root.has_value());
        CHECK(root->residual < 1e-11);
        // the refined root stays within a grid cell of the crossing
        const double cell = 2 * lim / 160;
        CHECK(std::abs(root->zeta[0] - pt[0]) < cell);
        CHECK(std::abs(root->zeta[1] - pt[1]) < cell);
    }
}
