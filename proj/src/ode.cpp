#include "optosync/ode.hpp"

#include "optosync/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace optosync {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

} // namespace

void integrate_adaptive(const OdeRhs& rhs, std::vector<double>& y, double t0, double t1,
                        double sample_dt, const OdeObserver& observe, const OdeOptions& opt) {
    if (!(sample_dt > 0.0) || !(t1 > t0))
        throw ConfigError("integration span and sample step must be positive");
    const size_t n = y.size();

    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    std::vector<double> ytmp(n), ynew(n);

    double t = t0;
    if (observe) observe(t, y);

    // crude but serviceable initial step guess, refined by the controller
    rhs(t, y, k1);
    double ynorm = 0.0, fnorm = 0.0;
    for (size_t i = 0; i < n; ++i) {
        ynorm = std::max(ynorm, std::abs(y[i]));
        fnorm = std::max(fnorm, std::abs(k1[i]));
    }
    double h = 0.01 * (ynorm + 1.0) / (fnorm + 1.0);
    h = std::min({h, sample_dt, t1 - t0});
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

    long n_steps = 0;
    long sample_index = 1;
    double t_next = std::min(t0 + sample_dt, t1);

    while (t < t1) {
        if (++n_steps > opt.max_steps) throw StepFailure("step budget exhausted");
        bool hit_sample = false;
        double h_try = h;
        if (t + h_try >= t_next - 1e-14 * std::max(1.0, std::abs(t_next))) {
            h_try = t_next - t;
            hit_sample = true;
        }
        if (h_try < 1e-14 * std::max(1.0, std::abs(t)))
            throw StepFailure("step size underflow at t=" + std::to_string(t));

        rhs(t, y, k1);
        for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h_try * a21 * k1[i];
        rhs(t + c2 * h_try, ytmp, k2);
        for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h_try * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h_try, ytmp, k3);
        for (size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h_try * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h_try, ytmp, k4);
        for (size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h_try * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(t + c5 * h_try, ytmp, k5);
        for (size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] +
                      h_try * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(t + h_try, ytmp, k6);
        for (size_t i = 0; i < n; ++i)
            ynew[i] = y[i] +
                      h_try * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(t + h_try, ynew, k7);

        double err_sq = 0.0;
        for (size_t i = 0; i < n; ++i) {
            const double err_i = h_try * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                          e6 * k6[i] + e7 * k7[i]);
            const double sk = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double q = err_i / sk;
            err_sq += q * q;
        }
        const double err = std::sqrt(err_sq / static_cast<double>(n));

        if (err <= 1.0 || !std::isfinite(err)) {
            if (!std::isfinite(err)) throw StepFailure("non-finite state during integration");
            t += h_try;
            y.swap(ynew);
            if (hit_sample) {
                t = t_next; // land exactly on the grid point
                if (observe) observe(t, y);
                ++sample_index;
                t_next = t0 + sample_dt * static_cast<double>(sample_index);
                if (t_next > t1 - 1e-14 * std::max(1.0, std::abs(t1))) t_next = t1;
            }
            const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
            h = h_try * fac;
        } else {
            const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
            h = h_try * fac;
        }
        if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    }
}

} // namespace optosync
