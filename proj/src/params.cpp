#include "nphase/params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nphase {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("PhysicalParams: " + what);
}

}  // namespace

void PhysicalParams::validate() const {
    require(n >= 1, "n must be >= 1");
    require(nu >= 1, "nu must be >= 1");
    require(omega_pump >= 0.0, "omega_pump must be >= 0");
    require(delta_pa != 0.0, "delta_pa must be nonzero");
    require(kappa >= 0.0, "kappa must be >= 0");
    require(omega_z > 0.0, "omega_z must be > 0");
    require(g0 > 0.0, "g0 must be > 0");
    require(k_pump > 0.0, "k_pump must be > 0");
    require(mass > 0.0, "mass must be > 0");
    require(std::isfinite(omega_pump) && std::isfinite(delta_pa) &&
                std::isfinite(delta_pc) && std::isfinite(kappa) &&
                std::isfinite(omega_z) && std::isfinite(g0) &&
                std::isfinite(k_pump) && std::isfinite(mass),
            "all fields must be finite");
}

ReducedParams reduce(const PhysicalParams& p) {
    p.validate();

    const double wz = p.omega_z;
    const double k2 = p.k_pump * p.k_pump;
    const double mu = p.group_mass();
    const double hyp = std::hypot(p.delta_pc, p.kappa);

    ReducedParams r;
    r.n = p.n;
    r.phi = 2.0 * M_PI / p.n;
    r.delta = p.delta_pc / wz;
    r.kappa_t = p.kappa / wz;
    r.g_t = p.nu * p.omega_pump * p.g0 / (p.delta_pa * wz);
    r.u = constants::hbar * k2 * p.nu * p.omega_pump * p.g0 /
          (mu * p.delta_pa * wz * wz);
    if (p.omega_pump == 0.0) {
        r.eps = 0.0;
    } else if (hyp > 0.0) {
        r.eps = p.total_atoms() * p.omega_pump * p.omega_pump * constants::hbar *
                k2 * p.g0 * p.g0 /
                (p.mass * p.delta_pa * p.delta_pa * wz * wz * hyp);
    } else {
        // driven but exactly on an undamped cavity resonance
        r.eps = std::numeric_limits<double>::infinity();
    }
    // atan2(-0.0, x<0) would land on -pi; force the +0.0 branch so that
    // kappa = 0, delta_pc < 0 gives theta = +pi exactly.
    r.theta = std::atan2(p.kappa == 0.0 ? 0.0 : -p.kappa, p.delta_pc);
    r.mass_t = mu * wz / (constants::hbar * k2);
    return r;
}

}  // namespace nphase
