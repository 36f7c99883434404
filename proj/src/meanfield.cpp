#include "optosync/meanfield.hpp"

#include "optosync/errors.hpp"
#include "optosync/linalg.hpp"
#include "optosync/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace optosync {

double MeanFieldState::norm() const {
    const auto a = to_array();
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

MeanFieldState classical_rhs(const MeanFieldState& s, double t, const SystemParams& p) {
    const double qsum = s.q1 + s.q2;
    const double delta_eff = p.delta - p.g * qsum;
    const double photon = s.alpha_re * s.alpha_re + s.alpha_im * s.alpha_im;
    const double w1 = p.omega_m;
    const double w2 = p.omega_m2();

    MeanFieldState d;
    d.alpha_re = -p.kappa * s.alpha_re + delta_eff * s.alpha_im + p.drive_e;
    d.alpha_im = -p.kappa * s.alpha_im - delta_eff * s.alpha_re;
    d.q1 = w1 * s.p1;
    d.p1 = -w1 * modulation_factor(p, t) * s.q1 + p.g * photon - p.gamma_m1 * s.p1;
    d.q2 = w2 * s.p2;
    d.p2 = -w2 * s.q2 + p.g * photon - p.gamma_m2 * s.p2;
    return d;
}

MeanFieldState steady_state(const SystemParams& p) {
    const double w1 = p.omega_m;
    const double w2 = p.omega_m2();
    const double e2 = p.drive_e * p.drive_e;
    // Static spring shift of the detuning per unit photon number.
    const double c = p.g * p.g * (1.0 / w1 + 1.0 / w2);

    double photon = 0.0;
    if (p.drive_e == 0.0) {
        photon = 0.0;
    } else if (c == 0.0) {
        photon = e2 / (p.kappa * p.kappa + p.delta * p.delta);
    } else {
        // |alpha|^2 is a fixed point of u -> E^2 / (kappa^2 + (delta - c u)^2).
        // Plain iteration from the weak-coupling value selects the branch that
        // is continuously connected to it; when no branch attracts (the fold
        // of the bistable response, or a strongly anti-damped upper branch)
        // the iteration wanders and we refuse to pick.
        auto next_u = [&](double u) {
            const double d = p.delta - c * u;
            return e2 / (p.kappa * p.kappa + d * d);
        };
        double u = e2 / (p.kappa * p.kappa + p.delta * p.delta);
        bool converged = false;
        for (int it = 0; it < 5000; ++it) {
            const double un = next_u(u);
            if (!std::isfinite(un)) break;
            if (std::abs(un - u) <= 1e-15 * std::max(1.0, un)) {
                u = un;
                converged = true;
                break;
            }
            u = un;
        }
        if (!converged)
            throw NoConvergence("photon-number iteration did not settle on a branch");
        // Newton polish on f(u) = u*(kappa^2 + (delta - c u)^2) - E^2.
        for (int it = 0; it < 4; ++it) {
            const double d = p.delta - c * u;
            const double f = u * (p.kappa * p.kappa + d * d) - e2;
            const double df = p.kappa * p.kappa + d * (p.delta - 3.0 * c * u);
            if (df == 0.0) break;
            u -= f / df;
        }
        photon = u;
    }

    const double delta_eff = p.delta - c * photon;
    const double denom = p.kappa * p.kappa + delta_eff * delta_eff;
    MeanFieldState s;
    s.alpha_re = p.drive_e * p.kappa / denom;
    s.alpha_im = -p.drive_e * delta_eff / denom;
    s.q1 = p.g * photon / w1;
    s.q2 = p.g * photon / w2;
    s.p1 = 0.0;
    s.p2 = 0.0;

    SystemParams frozen = p;
    frozen.mod_eps = 0.0;
    const double residual = classical_rhs(s, 0.0, frozen).norm();
    if (!(residual < 1e-9 * std::max(1.0, s.norm())))
        throw NoConvergence("stationary-point residual too large");

    const double g_eff = effective_coupling(s, p);
    const Mat drift = build_drift_matrix(p, g_eff, 0.0);
    for (const cplx& lam : eigenvalues(drift))
        if (lam.real() > 1e-10)
            throw Unstable("operating point has a growing linearized mode");
    return s;
}

double effective_coupling(const MeanFieldState& s, const SystemParams& p) {
    return std::sqrt(2.0) * p.g * std::hypot(s.alpha_re, s.alpha_im);
}

namespace {

OdeRhs make_rhs(const SystemParams& p) {
    return [p](double t, std::span<const double> y, std::span<double> dy) {
        const MeanFieldState d = classical_rhs(MeanFieldState::from_array(y), t, p);
        const auto a = d.to_array();
        std::copy(a.begin(), a.end(), dy.begin());
    };
}

} // namespace

MeanTrajectory integrate_meanfield(const MeanFieldState& initial, double t0, double t1,
                                   double sample_dt, const SystemParams& p,
                                   const MeanFieldOptions& opt) {
    MeanTrajectory traj;
    const auto arr = initial.to_array();
    std::vector<double> y(arr.begin(), arr.end());
    OdeOptions oopt;
    oopt.rtol = opt.rtol;
    oopt.atol = opt.atol;
    integrate_adaptive(
        make_rhs(p), y, t0, t1, sample_dt,
        [&](double t, std::span<const double> yy) {
            traj.t.push_back(t);
            traj.states.push_back(MeanFieldState::from_array(yy));
        },
        oopt);
    return traj;
}

PeriodicOrbit settle_meanfield_orbit(const MeanFieldState& initial, const SystemParams& p,
                                     double sample_dt, double rel_tol, double t_cap) {
    const double period =
        (p.mod_omega > 0.0) ? 2.0 * std::numbers::pi / p.mod_omega : 2.0 * std::numbers::pi / p.omega_m;
    if (t_cap <= 0.0) t_cap = 50.0 / std::min(p.gamma_m1, p.gamma_m2);

    const int n_sub = std::max(8, static_cast<int>(std::ceil(period / sample_dt)));
    const double dt = period / n_sub;

    const auto arr = initial.to_array();
    std::vector<double> y(arr.begin(), arr.end());
    OdeOptions oopt;
    oopt.rtol = 1e-9;
    oopt.atol = 1e-12;
    const OdeRhs rhs = make_rhs(p);

    std::vector<std::array<double, 6>> prev, cur;
    PeriodicOrbit out;
    double t = 0.0;
    while (t < t_cap) {
        cur.clear();
        integrate_adaptive(
            rhs, y, t, t + period, dt,
            [&](double, std::span<const double> yy) {
                std::array<double, 6> a;
                std::copy(yy.begin(), yy.end(), a.begin());
                cur.push_back(a);
            },
            oopt);
        t += period;
        if (!prev.empty() && prev.size() == cur.size()) {
            double resid = 0.0, amp = 0.0;
            for (size_t k = 0; k < cur.size(); ++k)
                for (int i = 0; i < 6; ++i) {
                    resid = std::max(resid, std::abs(cur[k][i] - prev[k][i]));
                    amp = std::max(amp, std::abs(cur[k][i]));
                }
            out.residual = resid / std::max(amp, 1e-12);
            if (out.residual < rel_tol) {
                out.converged = true;
                break;
            }
        }
        prev = cur;
    }

    out.t_start = t - period;
    out.window.t.reserve(cur.size());
    out.window.states.reserve(cur.size());
    for (size_t k = 0; k < cur.size(); ++k) {
        out.window.t.push_back(out.t_start + static_cast<double>(k) * dt);
        out.window.states.push_back(MeanFieldState::from_array(cur[k]));
    }
    return out;
}

double orbit_area(const MeanTrajectory& window, int mirror) {
    if (mirror != 1 && mirror != 2) throw DimensionMismatch("mirror index must be 1 or 2");
    const size_t n = window.states.size();
    if (n < 3) return 0.0;
    auto qp = [&](size_t k) {
        const MeanFieldState& s = window.states[k];
        return (mirror == 1) ? std::pair<double, double>{s.q1, s.p1}
                             : std::pair<double, double>{s.q2, s.p2};
    };
    double twice_area = 0.0;
    for (size_t k = 0; k < n; ++k) {
        const auto [x0, y0] = qp(k);
        const auto [x1, y1] = qp((k + 1) % n);
        twice_area += x0 * y1 - x1 * y0;
    }
    return 0.5 * std::abs(twice_area);
}

} // namespace optosync
