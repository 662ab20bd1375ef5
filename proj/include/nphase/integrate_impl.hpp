#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace nphase::detail {

// Butcher tableau of Dormand & Prince RK5(4)7M (FSAL).
struct Dopri5Tableau {
    static constexpr double a21 = 1.0 / 5.0;
    static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                            a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                            a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                            a65 = -5103.0 / 18656.0;
    static constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0,
                            a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                            a76 = 11.0 / 84.0;
    // 5th-order minus embedded 4th-order weights.
    static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                            e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                            e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    // Dense-output coefficients.
    static constexpr double d1 = -12715105075.0 / 11282082432.0,
                            d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0,
                            d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0,
                            d7 = 69997945.0 / 29380423.0;
};

template <class Rhs>
Trajectory dopri5(Rhs&& rhs, const Eigen::VectorXd& y0, const IntegratorControls& ctl) {
    using T = Dopri5Tableau;
    ctl.validate();

    const auto dim = y0.size();
    Eigen::VectorXd y = y0, ynew(dim), ytmp(dim);
    Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    Eigen::VectorXd r1(dim), r2(dim), r3(dim), r4(dim), r5(dim);

    Trajectory out;
    out.times.push_back(0.0);
    out.states.push_back(y);

    const double hmax = ctl.max_step > 0.0 ? std::min(ctl.max_step, ctl.t_end)
                                           : ctl.t_end;
    const double uround = std::numeric_limits<double>::epsilon();

    rhs(y, k1);

    // Initial step from the scaled norms of y and f (Hairer's simple variant).
    double h;
    {
        double dn = 0.0, fn = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double sc = ctl.abs_tol + ctl.rel_tol * std::abs(y[i]);
            dn = std::max(dn, std::abs(y[i]) / sc);
            fn = std::max(fn, std::abs(k1[i]) / sc);
        }
        h = (fn > 1e-10) ? 0.01 * dn / fn : 1e-6;
        h = std::min(std::max(h, 1e-12), hmax);
    }

    double t = 0.0;
    double next_sample = ctl.sample_every;
    bool rejected_last = false;

    auto emit = [&](double ts, const Eigen::VectorXd& ys) {
        out.times.push_back(ts);
        out.states.push_back(ys);
    };

    while (t < ctl.t_end) {
        if (h < 16.0 * uround * std::max(1.0, std::abs(t))) {
            out.status = IntegrationStatus::step_underflow;
            break;
        }
        bool last = false;
        if (t + h >= ctl.t_end) {
            h = ctl.t_end - t;
            last = true;
        }

        ytmp = y + h * (T::a21 * k1);
        rhs(ytmp, k2);
        ytmp = y + h * (T::a31 * k1 + T::a32 * k2);
        rhs(ytmp, k3);
        ytmp = y + h * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3);
        rhs(ytmp, k4);
        ytmp = y + h * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4);
        rhs(ytmp, k5);
        ytmp = y + h * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5);
        rhs(ytmp, k6);
        ynew = y + h * (T::a71 * k1 + T::a73 * k3 + T::a74 * k4 + T::a75 * k5 + T::a76 * k6);
        rhs(ynew, k7);
        ++out.n_steps;

        if (!ynew.allFinite()) {
            out.status = IntegrationStatus::non_finite;
            break;
        }

        // Scaled RMS error of the embedded pair.
        double err = 0.0;
        double scbar = 0.0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double sc =
                ctl.abs_tol + ctl.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double e = h * (T::e1 * k1[i] + T::e3 * k3[i] + T::e4 * k4[i] +
                                  T::e5 * k5[i] + T::e6 * k6[i] + T::e7 * k7[i]);
            err += (e / sc) * (e / sc);
            scbar = std::max(scbar, sc);
        }
        err = std::sqrt(err / static_cast<double>(dim));

        if (err <= 1.0 || !std::isfinite(err)) {
            if (!std::isfinite(err)) {
                out.status = IntegrationStatus::non_finite;
                break;
            }
            out.err_estimate += err * scbar;

            // Dense output over (t, t + h].
            const double tend_step = t + h;
            if (next_sample <= tend_step + 1e-14 * std::max(1.0, tend_step) &&
                ctl.sample_every > 0.0) {
                r1 = y;
                r2 = ynew - y;
                r3 = h * k1 - r2;
                r4 = r2 - h * k7 - r3;
                r5 = h * (T::d1 * k1 + T::d3 * k3 + T::d4 * k4 + T::d5 * k5 +
                          T::d6 * k6 + T::d7 * k7);
                while (next_sample <= tend_step - 1e-14 * std::max(1.0, tend_step)) {
                    const double s = (next_sample - t) / h;
                    emit(next_sample,
                         r1 + s * (r2 + (1.0 - s) * (r3 + s * (r4 + (1.0 - s) * r5))));
                    next_sample += ctl.sample_every;
                }
                // Samples landing on a step end use the step value itself.
                while (next_sample <= tend_step + 1e-14 * std::max(1.0, tend_step)) {
                    if (!last) emit(tend_step, ynew);
                    next_sample += ctl.sample_every;
                }
            }

            t = tend_step;
            y.swap(ynew);
            k1.swap(k7);  // FSAL

            double fac = 0.9 * std::pow(err > 1e-16 ? err : 1e-16, -0.2);
            fac = std::clamp(fac, 0.2, rejected_last ? 1.0 : 10.0);
            h = std::min(h * fac, hmax);
            rejected_last = false;
            if (last) break;
        } else {
            ++out.n_rejected;
            const double fac = std::max(0.2, 0.9 * std::pow(err, -0.2));
            h *= fac;
            rejected_last = true;
        }
    }

    if (out.times.back() != t && out.status == IntegrationStatus::ok) {
        emit(t, y);
    } else if (out.status != IntegrationStatus::ok && out.times.back() != t) {
        emit(t, y);  // report the last accepted state alongside the failure
    }
    return out;
}

}  // namespace nphase::detail
