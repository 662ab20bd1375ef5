#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "nphase/linear.hpp"
#include "nphase/rng.hpp"
#include "nphase/stationary.hpp"
#include "test_params.hpp"

using namespace nphase;
using doctest::Approx;

TEST_CASE("classify: three-way rule") {
    using C = std::complex<double>;
    CHECK(classify({C{-1, 0}, C{-2, 0}}, 1e-9) == Stability::stable);
    CHECK(classify({C{0.1, 1}, C{0.1, -1}}, 1e-9) == Stability::unstable);
    CHECK(classify({C{0, 1}, C{0, -1}}, 1e-9) == Stability::marginal);
    CHECK(classify({C{-1, 0}, C{0, 1}}, 1e-9) == Stability::marginal);
    CHECK_THROWS_AS(classify({C{1, 0}}, 0.0), std::invalid_argument);
}

TEST_CASE("adiabatic_jacobian: finite-difference agreement") {
    Rng rng(17);
    for (int n : {2, 4, 5}) {
        const ReducedParams r = reduce(testing::trajectory_params(n));
        for (int rep = 0; rep < 8; ++rep) {
            Eigen::VectorXd z(n);
            for (int j = 0; j < n; ++j) z[j] = rng.uniform(-2.0, 2.0);
            const Eigen::MatrixXd b = position_force_jacobian(z, r);
            const double h = 1e-6;
            for (int l = 0; l < n; ++l) {
                Eigen::VectorXd zp = z, zm = z;
                zp[l] += h;
                zm[l] -= h;
                const Eigen::VectorXd col =
                    (position_force(zp, r) - position_force(zm, r)) / (2 * h);
                for (int j = 0; j < n; ++j)
                    CHECK(b(j, l) == Approx(col[j]).epsilon(1e-6).scale(1.0));
            }
        }
    }
}

TEST_CASE("adiabatic_jacobian: zero drive gives n marginal oscillator pairs") {
    PhysicalParams p = testing::trajectory_params(3);
    p.omega_pump = 0.0;
    const ReducedParams r = reduce(p);
    const auto eigs = spectrum(adiabatic_jacobian(Eigen::VectorXd::Zero(3), r));
    REQUIRE(eigs.size() == 6);
    for (const auto& ev : eigs) {
        CHECK(std::abs(ev.real()) < 1e-12);
        CHECK(std::abs(ev.imag()) == Approx(1.0).epsilon(1e-12));
    }
    CHECK(classify(eigs, 1e-9) == Stability::marginal);
}

TEST_CASE("full_jacobian: finite-difference agreement") {
    Rng rng(23);
    const int n = 4;
    const ReducedParams r = reduce(testing::trajectory_params(n));
    for (int rep = 0; rep < 6; ++rep) {
        FullState s = FullState::zero(n);
        for (int j = 0; j < n; ++j) {
            s.mech.zeta[j] = rng.uniform(-1.5, 1.5);
            s.mech.pi[j] = rng.uniform(-1.0, 1.0);
        }
        s.alpha = {rng.uniform(-3, 3), rng.uniform(-3, 3)};
        const Eigen::MatrixXd j = full_jacobian(s, r);
        const Eigen::VectorXd y0 = pack(s);
        const double h = 1e-6;
        for (int c = 0; c < 2 * n + 2; ++c) {
            Eigen::VectorXd yp = y0, ym = y0;
            yp[c] += h;
            ym[c] -= h;
            const Eigen::VectorXd col =
                (pack(full_drift(unpack_full(yp), r)) -
                 pack(full_drift(unpack_full(ym), r))) /
                (2 * h);
            for (int rr = 0; rr < 2 * n + 2; ++rr)
                CHECK(j(rr, c) == Approx(col[rr]).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("full_jacobian: zero-drive block structure") {
    PhysicalParams p = testing::trajectory_params(4);
    p.omega_pump = 0.0;
    const ReducedParams r = reduce(p);
    const auto eigs = spectrum(full_jacobian(FullState::zero(4), r));
    int cavity = 0, mech = 0;
    for (const auto& ev : eigs) {
        if (std::abs(ev.real() + r.kappa_t) < 1e-10 &&
            std::abs(std::abs(ev.imag()) - std::abs(r.delta)) < 1e-8)
            ++cavity;
        else if (std::abs(ev.real()) < 1e-12 && std::abs(std::abs(ev.imag()) - 1.0) < 1e-12)
            ++mech;
    }
    CHECK(cavity == 2);
    CHECK(mech == 8);
}

TEST_CASE("find_root: origin from the origin") {
    const ReducedParams r = reduce(testing::trajectory_params(4));
    const auto root = find_root(Eigen::VectorXd::Zero(4), r, 1e-12);
    REQUIRE(root.has_value());
    CHECK(root->is_origin());
    CHECK(root->residual == 0.0);
    CHECK(root->stability == Stability::unstable);  // n = 4, kappa > 0
}

TEST_CASE("find_root: converges onto a Lyapunov minimum at kappa = 0") {
    const ReducedParams r = reduce(testing::conservative_params(4));
    const auto minima = lyapunov_minimize(grid_starts(4, -1.55, 1.55, 3), r, 1e-10, M_PI);
    REQUIRE(minima.size() == 4);  // the origin is a saddle above threshold
    for (const auto& m : minima) {
        Eigen::VectorXd guess = m.zeta;
        guess.array() += 0.05;
        const auto root = find_root(guess, r, 1e-11);
        REQUIRE(root.has_value());
        CHECK((root->zeta - m.zeta).lpNorm<Eigen::Infinity>() < 1e-8);
    }
}

TEST_CASE("find_root: Newton step equals the finite-difference Jacobian solve") {
    const ReducedParams r = reduce(testing::trajectory_params(4));
    Eigen::VectorXd z(4);
    z << 0.9, 0.7, -0.8, -0.6;
    const Eigen::VectorXd f = position_force(z, r);
    const Eigen::VectorXd analytic =
        position_force_jacobian(z, r).partialPivLu().solve(-f);
    Eigen::MatrixXd fd(4, 4);
    const double h = 1e-7;
    for (int c = 0; c < 4; ++c) {
        Eigen::VectorXd zp = z, zm = z;
        zp[c] += h;
        zm[c] -= h;
        fd.col(c) = (position_force(zp, r) - position_force(zm, r)) / (2 * h);
    }
    const Eigen::VectorXd numeric = fd.partialPivLu().solve(-f);
    for (int j = 0; j < 4; ++j)
        CHECK(analytic[j] == Approx(numeric[j]).epsilon(1e-6));
}

TEST_CASE("multistart_search: single root far below threshold") {
    PhysicalParams p = testing::dispersive_params(2 * M_PI * 2e6);  // well below Oc
    const ReducedParams r = reduce(p);
    const auto pts = multistart_search(SearchRegion::subspace(-1.5, 1.5, 9), r);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].is_origin());
}

TEST_CASE("multistart_search: dispersive census, nine roots, four stars") {
    // 10% above the numerically detected bifurcation on the dispersive line
    const double obif = 2 * M_PI * 17.5914e6;  // located independently by scan
    PhysicalParams p = testing::dispersive_params(1.1 * obif);
    const ReducedParams r = reduce(p);
    auto pts = multistart_search(SearchRegion::subspace(-M_PI / 2 * 0.999, M_PI / 2 * 0.999, 13),
                                 r, 1e-11, nullptr, 2);
    CHECK(pts.size() == 9);
    int stars = 0, origin = 0;
    for (const auto& q : pts) {
        if (q.is_origin()) {
            ++origin;
            CHECK(q.stability == Stability::unstable);
            continue;
        }
        CHECK(q.residual < 1e-10);
        if (q.dynamically_stable()) ++stars;
    }
    CHECK(origin == 1);
    CHECK(stars == 4);
    // the stars disagree with the full Jacobian here: weak cavity heating
    // in the deep-dispersive limit; the reduced model calls them stable
    for (const auto& q : pts)
        if (!q.is_origin() && q.dynamically_stable()) CHECK(q.full_max_re > 0.0);
}

TEST_CASE("multistart_search: reactive regime has only unstable broken roots") {
    const PhysicalParams p = testing::reactive_params();
    const ReducedParams r = reduce(p);
    auto pts = multistart_search(SearchRegion::subspace(-1.25 * M_PI, 1.25 * M_PI, 15),
                                 r, 1e-11, nullptr, 2);
    int small_broken = 0, big = 0, big_unstable = 0;
    for (const auto& q : pts) {
        if (q.is_origin()) continue;
        if (q.zeta.lpNorm<Eigen::Infinity>() < M_PI / 2)
            ++small_broken;
        else {
            ++big;
            if (q.stability == Stability::unstable) ++big_unstable;
        }
    }
    CHECK(small_broken == 0);
    CHECK(big > 0);
    CHECK(big == big_unstable);
}

TEST_CASE("symmetry_orbits: origin is a singleton; broken minima form full orbits") {
    for (int n : {3, 4, 5, 6}) {
        const ReducedParams r = reduce(testing::conservative_params(n));
        auto minima = lyapunov_minimize(grid_starts(n, -1.55, 1.55, n <= 4 ? 5 : 4),
                                        r, 1e-10, M_PI);
        const int expected = (n % 2 == 0) ? n : 2 * n;
        REQUIRE(static_cast<int>(minima.size()) == expected);

        std::vector<StationaryPoint> pts;
        for (const auto& m : minima) {
            StationaryPoint q;
            q.zeta = m.zeta;
            pts.push_back(q);
        }
        StationaryPoint origin;
        origin.zeta = Eigen::VectorXd::Zero(n);
        pts.push_back(origin);

        const auto classes = symmetry_orbits(pts, r, 1e-5);
        REQUIRE(classes.size() == 2);
        bool found_singleton = false, found_broken = false;
        for (const auto& cls : classes) {
            if (cls.size() == 1) found_singleton = true;
            if (static_cast<int>(cls.size()) == expected) found_broken = true;
        }
        CHECK(found_singleton);
        CHECK(found_broken);

        // the group action maps members to members
        for (const auto& m : minima) {
            const MechState ms{m.zeta, Eigen::VectorXd::Zero(n)};
            for (const auto& g : symmetry_group(n)) {
                const Eigen::VectorXd img = symmetry_transform(ms, g).zeta;
                bool present = false;
                for (const auto& other : minima)
                    if ((img - other.zeta).lpNorm<Eigen::Infinity>() < 1e-7)
                        present = true;
                CHECK(present);
            }
        }
    }
}

TEST_CASE("lyapunov_minimize: zero drive leaves only the origin") {
    PhysicalParams p = testing::conservative_params(3);
    p.omega_pump = 0.0;
    const ReducedParams r = reduce(p);
    const auto minima = lyapunov_minimize(grid_starts(3, -1.0, 1.0, 3), r, 1e-12);
    REQUIRE(minima.size() == 1);
    CHECK(minima[0].zeta.lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("lyapunov_minimize: rejects kappa != 0") {
    const ReducedParams r = reduce(testing::trajectory_params(3));
    CHECK_THROWS_AS(lyapunov_minimize({Eigen::VectorXd::Zero(3)}, r),
                    std::invalid_argument);
}

TEST_CASE("lyapunov_minimize: matches a dense scan for n = 1 and n = 2") {
    SUBCASE("n = 1") {
        const ReducedParams r = reduce(testing::conservative_params(1));
        const auto minima = lyapunov_minimize(grid_starts(1, -2.5, 2.5, 11), r, 1e-12, M_PI);
        REQUIRE(minima.size() == 2);
        // dense scan oracle
        double best_v = 1e300, best_z = 0.0;
        for (int i = 0; i <= 40000; ++i) {
            Eigen::VectorXd z(1);
            z[0] = -M_PI + 2 * M_PI * i / 40000.0;
            const double v = lyapunov_potential(z, r);
            if (v < best_v) {
                best_v = v;
                best_z = z[0];
            }
        }
        bool matched = false;
        for (const auto& m : minima)
            if (std::abs(std::abs(m.zeta[0]) - std::abs(best_z)) < 1e-3) {
                matched = true;
                CHECK(m.value == Approx(best_v).epsilon(1e-6));
            }
        CHECK(matched);
        // minima maximize the field magnitude among scanned stationary candidates
        for (const auto& m : minima)
            CHECK(std::abs(m.alpha) > 0.0);
        // fields of the two minima are opposite and in phase with the pump
        // (red detuning makes g_t / delta positive): phases exactly 0 and pi
        CHECK(std::abs(minima[0].alpha + minima[1].alpha) < 1e-9);
        for (const auto& m : minima)
            CHECK(std::abs(m.alpha.imag()) < 1e-12 * std::abs(m.alpha.real()));
    }
    SUBCASE("n = 2") {
        const ReducedParams r = reduce(testing::conservative_params(2));
        const auto minima = lyapunov_minimize(grid_starts(2, -2.0, 2.0, 7), r, 1e-12, M_PI);
        REQUIRE(minima.size() == 2);
        double best_v = 1e300;
        std::array<double, 2> best{};
        for (int i = 0; i <= 600; ++i)
            for (int j = 0; j <= 600; ++j) {
                Eigen::VectorXd z(2);
                z << -M_PI + 2 * M_PI * i / 600.0, -M_PI + 2 * M_PI * j / 600.0;
                const double v = lyapunov_potential(z, r);
                if (v < best_v) {
                    best_v = v;
                    best = {z[0], z[1]};
                }
            }
        bool matched = false;
        for (const auto& m : minima)
            if (std::abs(m.zeta[0] - best[0]) < 0.02 && std::abs(m.zeta[1] - best[1]) < 0.02) {
                matched = true;
                CHECK(m.value == Approx(best_v).epsilon(1e-4));
            }
        CHECK(matched);
    }
}

TEST_CASE("lyapunov minima sit near +-pi/2 and are marginal under the reduced Jacobian") {
    const ReducedParams r = reduce(testing::conservative_params(4));
    const auto minima = lyapunov_minimize(grid_starts(4, -1.55, 1.55, 5), r, 1e-10, M_PI);
    REQUIRE(minima.size() == 4);
    for (const auto& m : minima) {
        for (int j = 0; j < 4; ++j)
            CHECK(std::abs(std::abs(m.zeta[j]) - M_PI / 2) < 0.15);
        const auto eigs = spectrum(adiabatic_jacobian(m.zeta, r));
        CHECK(classify(eigs, kStabilityTol) == Stability::marginal);
    }
}

TEST_CASE("origin instability for n > 2 with kappa > 0 at any drive") {
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        PhysicalParams p = testing::trajectory_params(3 + rep % 4);
        p.omega_pump = rng.uniform(0.01, 1.0) * critical_pump(p);
        const ReducedParams r = reduce(p);
        const auto eigs = spectrum(adiabatic_jacobian(Eigen::VectorXd::Zero(r.n), r));
        CHECK(eigs.front().real() > 1e-12 * r.eps);
    }
}

TEST_CASE("stationary points report matching recomputed spectra") {
    const double obif = 2 * M_PI * 17.5914e6;
    PhysicalParams p = testing::dispersive_params(1.1 * obif);
    const ReducedParams r = reduce(p);
    auto pts = multistart_search(SearchRegion::subspace(-1.5, 1.5, 9), r);
    for (const auto& q : pts) {
        const auto fresh = spectrum(adiabatic_jacobian(q.zeta, r));
        REQUIRE(fresh.size() == q.eigenvalues.size());
        for (std::size_t k = 0; k < fresh.size(); ++k)
            CHECK(std::abs(fresh[k] - q.eigenvalues[k]) < 1e-12);
        CHECK(classify(q.eigenvalues, kStabilityTol) == q.stability);
        CHECK(q.residual < 1e-11);
    }
}
