#ifndef OPTOSYNC_MEANFIELD_HPP
#define OPTOSYNC_MEANFIELD_HPP

#include "optosync/ode.hpp"
#include "optosync/params.hpp"

#include <array>
#include <vector>

namespace optosync {

// Classical (noise-free) amplitudes: cavity field split into quadrature
// components, plus mean positions/momenta of the two mirrors.
struct MeanFieldState {
    double alpha_re = 0.0;
    double alpha_im = 0.0;
    double q1 = 0.0, p1 = 0.0;
    double q2 = 0.0, p2 = 0.0;

    std::array<double, 6> to_array() const { return {alpha_re, alpha_im, q1, p1, q2, p2}; }
    static MeanFieldState from_array(std::span<const double> v) {
        return {v[0], v[1], v[2], v[3], v[4], v[5]};
    }
    double norm() const;
};

// Deterministic right-hand side of the nonlinear amplitude equations.
MeanFieldState classical_rhs(const MeanFieldState& s, double t, const SystemParams& p);

// Self-consistent stationary operating point with the modulation frozen off.
// Throws NoConvergence (no root, or several coexisting branches) and
// Unstable (linearized dynamics grow at the operating point).
MeanFieldState steady_state(const SystemParams& p);

// G = sqrt(2) g |alpha|; the operating point is phase-rotated so that the
// effective coupling enters the fluctuation dynamics as a positive number.
double effective_coupling(const MeanFieldState& s, const SystemParams& p);

struct MeanTrajectory {
    std::vector<double> t;
    std::vector<MeanFieldState> states;
};

struct MeanFieldOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
};

// Adaptive integration of the classical amplitudes, sampled on a uniform grid.
MeanTrajectory integrate_meanfield(const MeanFieldState& initial, double t0, double t1,
                                   double sample_dt, const SystemParams& p,
                                   const MeanFieldOptions& opt = {});

// Integrates until the orbit repeats itself (period 2*pi/mod_omega) to a
// relative residual, or until t_cap. Returns the trajectory over one final
// period plus the convergence flag and the time where that window starts.
struct PeriodicOrbit {
    MeanTrajectory window; // one period, sampled on sample_dt
    double t_start = 0.0;
    bool converged = false;
    double residual = 0.0;
};
PeriodicOrbit settle_meanfield_orbit(const MeanFieldState& initial, const SystemParams& p,
                                     double sample_dt, double rel_tol = 1e-3, double t_cap = 0.0);

// Signed area enclosed by the (q, p) orbit of one mirror over the window.
double orbit_area(const MeanTrajectory& window, int mirror);

} // namespace optosync

#endif
