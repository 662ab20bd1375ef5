#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "nphase/model.hpp"
#include "nphase/rng.hpp"
#include "test_params.hpp"

using namespace nphase;
using doctest::Approx;

namespace {

MechState random_mech(Rng& rng, int n, double scale) {
    MechState m = MechState::zero(n);
    for (int j = 0; j < n; ++j) {
        m.zeta[j] = scale * rng.gaussian();
        m.pi[j] = scale * rng.gaussian();
    }
    return m;
}

FullState random_full(Rng& rng, int n, double scale) {
    FullState s;
    s.mech = random_mech(rng, n, scale);
    s.alpha = {scale * rng.gaussian(), scale * rng.gaussian()};
    return s;
}

}  // namespace

TEST_CASE("reduce: zero drive zeroes every coupling") {
    PhysicalParams p = testing::trajectory_params(4);
    p.omega_pump = 0.0;
    const ReducedParams r = reduce(p);
    CHECK(r.g_t == 0.0);
    CHECK(r.u == 0.0);
    CHECK(r.eps == 0.0);
}

TEST_CASE("reduce: theta lands on +pi for kappa = 0, red detuning") {
    PhysicalParams p = testing::conservative_params(4);
    const ReducedParams r = reduce(p);
    CHECK(r.theta == M_PI);
}

TEST_CASE("reduce: collective coupling at the trajectory parameters") {
    // frozen from direct evaluation of the eps formula with CODATA hbar,
    // 87Rb mass and the 780.24 nm default wavelength
    const ReducedParams r = reduce(testing::trajectory_params(4));
    CHECK(r.eps == Approx(16.4947640611).epsilon(1e-9));
    CHECK(r.eps > 10.0);
    CHECK(r.delta == Approx(-4e6 / 70e3).epsilon(1e-12));
    CHECK(r.kappa_t == Approx(0.5e6 / 70e3).epsilon(1e-12));
    CHECK(std::tan(r.theta) == Approx(-r.kappa_t / r.delta).epsilon(1e-12));
    // eps scales quadratically in the pump
    PhysicalParams doubled = testing::trajectory_params(4);
    doubled.omega_pump *= 2.0;
    CHECK(reduce(doubled).eps == Approx(4.0 * r.eps).epsilon(1e-12));
}

TEST_CASE("reduce: rejects bad inputs") {
    PhysicalParams p = testing::trajectory_params(4);
    p.delta_pa = 0.0;
    CHECK_THROWS_AS(reduce(p), std::invalid_argument);
    p = testing::trajectory_params(4);
    p.omega_z = 0.0;
    CHECK_THROWS_AS(reduce(p), std::invalid_argument);
    p = testing::trajectory_params(4);
    p.omega_z = -1.0;
    CHECK_THROWS_AS(reduce(p), std::invalid_argument);
}

TEST_CASE("adiabatic_field: trivial zeroes") {
    const ReducedParams r = reduce(testing::trajectory_params(4));

    SUBCASE("all groups at the nodes") {
        CHECK(std::abs(adiabatic_field(MechState::zero(4), r)) == 0.0);
    }
    SUBCASE("equal displacements sum to zero over the roots of unity") {
        MechState m = MechState::zero(4);
        m.zeta.setConstant(0.7);
        CHECK(std::abs(adiabatic_field(m, r)) < 1e-14);
    }
}

TEST_CASE("adiabatic_field: single group, quarter-wavelength displacement") {
    PhysicalParams p = testing::conservative_params(1);
    const ReducedParams r = reduce(p);
    MechState m = MechState::zero(1);
    m.zeta[0] = M_PI / 2.0;
    const std::complex<double> c = adiabatic_field(m, r);
    // hand evaluation: c = nu Omega g0 / (delta_pa delta_pc), purely real
    const double expected = p.nu * p.omega_pump * p.g0 / (p.delta_pa * p.delta_pc);
    CHECK(c.real() == Approx(expected).epsilon(1e-12));
    CHECK(c.imag() == Approx(0.0).scale(std::abs(expected)).epsilon(1e-14));
}

TEST_CASE("adiabatic_field: rejects the undamped resonant cavity") {
    PhysicalParams p = testing::trajectory_params(4);
    p.delta_pc = 0.0;
    p.kappa = 0.0;
    const ReducedParams r = reduce(p);
    CHECK_THROWS_AS(adiabatic_field(MechState::zero(4), r), std::invalid_argument);
}

TEST_CASE("full_drift: origin is stationary") {
    const ReducedParams r = reduce(testing::trajectory_params(4));
    const FullState d = full_drift(FullState::zero(4), r);
    CHECK(std::abs(d.alpha) == 0.0);
    CHECK(d.mech.zeta.lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(d.mech.pi.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("full_drift: empty cavity decays at the complex pole") {
    PhysicalParams p = testing::trajectory_params(4);
    p.omega_pump = 0.0;
    const ReducedParams r = reduce(p);
    FullState s = FullState::zero(4);
    s.alpha = {1.0, 0.0};
    const FullState d = full_drift(s, r);
    CHECK(d.alpha.real() == Approx(-r.kappa_t).epsilon(1e-14));
    CHECK(d.alpha.imag() == Approx(r.delta).epsilon(1e-14));
    CHECK(d.mech.pi.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("full_drift: symplectic gradient of the energy at kappa = 0") {
    // dzeta = dE/dpi / M, dpi = -dE/dzeta / M, and for the field
    // d alpha/d tau = -i dE/d(alpha*), i.e. d(Re a) = dE/d(Im a) / 2 and
    // d(Im a) = -dE/d(Re a) / 2, checked by central differences
    const ReducedParams r = reduce(testing::conservative_params(3));
    Rng rng(42);
    const double h = 1e-6;
    for (int rep = 0; rep < 20; ++rep) {
        const FullState s = random_full(rng, 3, 0.8);
        const FullState d = full_drift(s, r);
        for (int j = 0; j < 3; ++j) {
            FullState sp = s, sm = s;
            sp.mech.pi[j] += h;
            sm.mech.pi[j] -= h;
            const double dE_dpi = (energy(sp, r) - energy(sm, r)) / (2 * h);
            CHECK(d.mech.zeta[j] == Approx(dE_dpi / r.mass_t).epsilon(1e-6));

            sp = sm = s;
            sp.mech.zeta[j] += h;
            sm.mech.zeta[j] -= h;
            const double dE_dz = (energy(sp, r) - energy(sm, r)) / (2 * h);
            CHECK(d.mech.pi[j] == Approx(-dE_dz / r.mass_t).epsilon(1e-6));
        }
        FullState sp = s, sm = s;
        sp.alpha += std::complex<double>(0.0, h);
        sm.alpha -= std::complex<double>(0.0, h);
        const double dE_dy = (energy(sp, r) - energy(sm, r)) / (2 * h);
        CHECK(d.alpha.real() == Approx(0.5 * dE_dy).epsilon(1e-6));

        sp = sm = s;
        sp.alpha += h;
        sm.alpha -= h;
        const double dE_dx = (energy(sp, r) - energy(sm, r)) / (2 * h);
        CHECK(d.alpha.imag() == Approx(-0.5 * dE_dx).epsilon(1e-6));
    }
}

TEST_CASE("adiabatic_force: normal phase is stationary") {
    const ReducedParams r = reduce(testing::trajectory_params(5));
    const MechState d = adiabatic_force(MechState::zero(5), r);
    CHECK(d.zeta.lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(d.pi.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("adiabatic_force: matches full_drift evaluated at the adiabatic field") {
    Rng rng(7);
    for (int n : {1, 2, 3, 4, 6}) {
        const ReducedParams r = reduce(testing::trajectory_params(n));
        for (int rep = 0; rep < 10; ++rep) {
            const MechState m = random_mech(rng, n, 1.1);
            FullState s;
            s.mech = m;
            s.alpha = adiabatic_field(m, r);
            const FullState dfull = full_drift(s, r);
            const MechState dad = adiabatic_force(m, r);
            for (int j = 0; j < n; ++j) {
                CHECK(dad.zeta[j] == Approx(dfull.mech.zeta[j]).epsilon(1e-12));
                CHECK(dad.pi[j] ==
                      Approx(dfull.mech.pi[j]).epsilon(1e-12).scale(1.0));
            }
        }
    }
}

TEST_CASE("adiabatic_force: minus the Lyapunov gradient at kappa = 0") {
    Rng rng(11);
    for (int n : {1, 2, 4, 5}) {
        const ReducedParams r = reduce(testing::conservative_params(n));
        const double h = 1e-6;
        for (int rep = 0; rep < 25; ++rep) {
            Eigen::VectorXd z(n);
            for (int j = 0; j < n; ++j) z[j] = rng.uniform(-2.5, 2.5);
            const Eigen::VectorXd f = position_force(z, r);
            for (int j = 0; j < n; ++j) {
                Eigen::VectorXd zp = z, zm = z;
                zp[j] += h;
                zm[j] -= h;
                const double grad =
                    (lyapunov_potential(zp, r) - lyapunov_potential(zm, r)) / (2 * h);
                CHECK(f[j] == Approx(-grad).epsilon(1e-6).scale(1.0));
            }
        }
    }
}

TEST_CASE("lyapunov_potential: pure harmonic at zero drive") {
    PhysicalParams p = testing::conservative_params(3);
    p.omega_pump = 0.0;
    const ReducedParams r = reduce(p);
    Eigen::VectorXd z(3);
    z << 0.3, -1.2, 0.9;
    CHECK(lyapunov_potential(z, r) == Approx(0.5 * z.squaredNorm()).epsilon(1e-14));
    CHECK(lyapunov_potential(Eigen::VectorXd::Zero(3), r) == 0.0);
}

TEST_CASE("lyapunov_potential: rejects kappa != 0") {
    const ReducedParams r = reduce(testing::trajectory_params(4));
    CHECK_THROWS_AS(lyapunov_potential(Eigen::VectorXd::Zero(4), r),
                    std::invalid_argument);
}

TEST_CASE("energy: vacuum origin and bare cavity values") {
    const ReducedParams r = reduce(testing::trajectory_params(4));
    CHECK(energy(FullState::zero(4), r) == 0.0);

    PhysicalParams p = testing::trajectory_params(4);
    p.omega_pump = 0.0;
    const ReducedParams r0 = reduce(p);
    FullState s = FullState::zero(4);
    s.alpha = {1.0, 0.0};
    CHECK(energy(s, r0) == Approx(-r0.delta).epsilon(1e-14));
}

TEST_CASE("symmetry_transform: identity and cyclic order") {
    const ReducedParams r = reduce(testing::trajectory_params(4));
    Rng rng(3);
    const FullState s = random_full(rng, 4, 1.0);

    const FullState id = symmetry_transform(s, 0, false, r);
    CHECK(id.alpha == s.alpha);
    CHECK((id.mech.zeta - s.mech.zeta).lpNorm<Eigen::Infinity>() == 0.0);

    FullState cyc = s;
    for (int k = 0; k < 4; ++k) cyc = symmetry_transform(cyc, 1, false, r);
    CHECK(std::abs(cyc.alpha - s.alpha) < 1e-14);
    CHECK((cyc.mech.zeta - s.mech.zeta).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((cyc.mech.pi - s.mech.pi).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("symmetry_transform: for even n parity equals n/2 shifts") {
    for (int n : {2, 4, 6}) {
        const ReducedParams r = reduce(testing::trajectory_params(n));
        Rng rng(n);
        const FullState s = random_full(rng, n, 0.9);
        const FullState via_parity = symmetry_transform(s, 0, true, r);
        const FullState via_shift = symmetry_transform(s, n / 2, false, r);
        // identical only on states with the antipodal structure; generic states
        // differ, but both are symmetries, so compare drifts instead
        const FullState da = full_drift(via_parity, r);
        const FullState db = full_drift(via_shift, r);
        CHECK(std::isfinite(da.alpha.real()));
        CHECK(std::isfinite(db.alpha.real()));
        // on an antipodal state the two coincide exactly
        FullState anti = s;
        for (int j = 0; j < n; ++j) {
            anti.mech.zeta[j] = (j < n / 2 ? 1.0 : -1.0) * s.mech.zeta[j % (n / 2)];
            anti.mech.pi[j] = (j < n / 2 ? 1.0 : -1.0) * s.mech.pi[j % (n / 2)];
        }
        const FullState pa = symmetry_transform(anti, 0, true, r);
        const FullState pb = symmetry_transform(anti, n / 2, false, r);
        CHECK(std::abs(pa.alpha - pb.alpha) < 1e-14);
        CHECK((pa.mech.zeta - pb.mech.zeta).lpNorm<Eigen::Infinity>() < 1e-14);
    }
}

TEST_CASE("equivariance of both drifts under the full group") {
    Rng rng(19);
    for (int n : {1, 2, 3, 4, 5, 6}) {
        const ReducedParams r = reduce(testing::trajectory_params(n));
        for (int rep = 0; rep < 5; ++rep) {
            const FullState s = random_full(rng, n, 1.2);
            for (const auto& g : symmetry_group(n)) {
                const FullState lhs = full_drift(symmetry_transform(s, g, r), r);
                const FullState rhs = symmetry_transform(full_drift(s, r), g, r);
                CHECK(std::abs(lhs.alpha - rhs.alpha) < 1e-12);
                CHECK((lhs.mech.zeta - rhs.mech.zeta).lpNorm<Eigen::Infinity>() < 1e-12);
                CHECK((lhs.mech.pi - rhs.mech.pi).lpNorm<Eigen::Infinity>() < 1e-12);

                const MechState ml = adiabatic_force(symmetry_transform(s.mech, g), r);
                const MechState mr =
                    symmetry_transform(adiabatic_force(s.mech, r), g);
                CHECK((ml.zeta - mr.zeta).lpNorm<Eigen::Infinity>() < 1e-12);
                CHECK((ml.pi - mr.pi).lpNorm<Eigen::Infinity>() < 1e-12);
            }
        }
    }
}

TEST_CASE("n = 1 and n = 2 couplings are purely dispersive") {
    for (int n : {1, 2}) {
        const ReducedParams r = reduce(testing::trajectory_params(n));
        // every reactive weight sin(phi (j-l)) vanishes; the force weights
        // reduce to cos(theta) cos(phi(j-l)), so flipping kappa's sign must
        // leave the force invariant up to the |pole| change captured in eps
        Rng rng(n);
        Eigen::VectorXd z(n);
        for (int j = 0; j < n; ++j) z[j] = rng.uniform(-1.5, 1.5);
        const Eigen::VectorXd f = position_force(z, r);
        for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l)
                CHECK(std::sin(r.phi * (j - l)) == Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(f.allFinite());
    }
}

TEST_CASE("pack/unpack round-trip") {
    Rng rng(5);
    const FullState s = random_full(rng, 5, 1.0);
    const FullState back = unpack_full(pack(s));
    CHECK(back.alpha == s.alpha);
    CHECK((back.mech.zeta - s.mech.zeta).lpNorm<Eigen::Infinity>() == 0.0);
    const MechState m = back.mech;
    const MechState m2 = unpack_mech(pack(m));
    CHECK((m2.pi - m.pi).lpNorm<Eigen::Infinity>() == 0.0);
}
