#include "optosync/errors.hpp"
#include "optosync/meanfield.hpp"
#include "optosync/model.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace optosync;

TEST_CASE("classical rhs at the origin") {
    SystemParams p;
    p.drive_e = 0.0;
    const MeanFieldState zero{};
    CHECK(classical_rhs(zero, 0.0, p).norm() == 0.0);

    p.drive_e = 2.1;
    const MeanFieldState d = classical_rhs(zero, 0.0, p);
    CHECK(d.alpha_re == doctest::Approx(2.1));
    CHECK(d.alpha_im == 0.0);
    CHECK(d.q1 == 0.0);
    CHECK(d.p1 == 0.0);
    CHECK(d.q2 == 0.0);
    CHECK(d.p2 == 0.0);
}

TEST_CASE("steady state is a fixed point of the unmodulated flow") {
    SystemParams p; // defaults
    const MeanFieldState s = steady_state(p);
    SystemParams frozen = p;
    frozen.mod_eps = 0.0;
    for (double t : {0.0, 1.0, 7.7}) CHECK(classical_rhs(s, t, frozen).norm() < 1e-9);
}

TEST_CASE("steady state at zero coupling has the closed form") {
    SystemParams p;
    p.g = 0.0;
    const MeanFieldState s = steady_state(p);
    const double expect_mod = 2.1 / std::sqrt(0.1 * 0.1 + 1.0 * 1.0);
    CHECK(std::hypot(s.alpha_re, s.alpha_im) == doctest::Approx(expect_mod).epsilon(1e-12));
    CHECK(s.q1 == 0.0);
    CHECK(s.q2 == 0.0);
    CHECK(s.p1 == 0.0);
    CHECK(s.p2 == 0.0);
}

TEST_CASE("undriven system settles at the origin") {
    SystemParams p;
    p.drive_e = 0.0;
    const MeanFieldState s = steady_state(p);
    CHECK(s.norm() == 0.0);
}

TEST_CASE("steady state agrees with a long relaxation run") {
    // Independent oracle: run the unmodulated flow from rest until the
    // transients die and compare against the algebraic fixed point.
    SystemParams p;
    p.mod_eps = 0.0;
    const MeanFieldState fixed = steady_state(p);
    const MeanFieldState zero{};
    MeanTrajectory traj = integrate_meanfield(zero, 0.0, 9000.0, 1500.0, p);
    const MeanFieldState& last = traj.states.back();
    const auto a = last.to_array();
    const auto b = fixed.to_array();
    for (int i = 0; i < 6; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(2e-6));
}

TEST_CASE("effective coupling arithmetic") {
    SystemParams p;
    CHECK(effective_coupling(MeanFieldState{}, p) == 0.0);

    p.g = 0.05;
    MeanFieldState s;
    s.alpha_re = 2.0896;
    const double expect = std::numbers::sqrt2 * 0.05 * 2.0896;
    CHECK(effective_coupling(s, p) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect == doctest::Approx(0.14776).epsilon(1e-4));

    SystemParams p2 = p;
    p2.g = 0.1;
    CHECK(effective_coupling(s, p2) == doctest::Approx(2.0 * effective_coupling(s, p)));
}

TEST_CASE("bistable fold refuses to pick a branch") {
    SystemParams p;
    p.g = 0.5;
    p.drive_e = 0.6;
    CHECK_THROWS_AS(steady_state(p), NoConvergence);
}

TEST_CASE("heating detuning is reported unstable") {
    SystemParams p;
    p.delta = -1.0;
    CHECK_THROWS_AS(steady_state(p), Unstable);
}

TEST_CASE("undriven trajectory from rest stays at rest") {
    SystemParams p;
    p.drive_e = 0.0;
    const MeanTrajectory traj = integrate_meanfield(MeanFieldState{}, 0.0, 20.0, 2.0, p);
    for (const auto& s : traj.states) CHECK(s.norm() == 0.0);
}

TEST_CASE("decoupled cavity relaxes along the closed-form transient") {
    SystemParams p;
    p.g = 0.0;
    p.mod_eps = 0.0;
    const MeanTrajectory traj = integrate_meanfield(MeanFieldState{}, 0.0, 12.0, 1.5, p);
    const std::complex<double> decay_rate(p.kappa, p.delta);
    const std::complex<double> alpha_inf = p.drive_e / decay_rate;
    for (size_t k = 0; k < traj.t.size(); ++k) {
        const std::complex<double> expect =
            alpha_inf * (1.0 - std::exp(-decay_rate * traj.t[k]));
        CHECK(traj.states[k].alpha_re == doctest::Approx(expect.real()).epsilon(1e-7));
        CHECK(traj.states[k].alpha_im == doctest::Approx(expect.imag()).epsilon(1e-7));
        CHECK(traj.states[k].q1 == 0.0);
        CHECK(traj.states[k].p2 == 0.0);
    }
}

TEST_CASE("modulated orbit settles onto a periodic cycle") {
    SystemParams p; // defaults
    const MeanFieldState start = steady_state(p);
    const PeriodicOrbit orbit = settle_meanfield_orbit(start, p, 0.05);
    CHECK(orbit.converged);
    CHECK(orbit.residual < 1e-3);

    // one further period reproduces the window start
    const double period = 2.0 * std::numbers::pi / p.mod_omega;
    MeanTrajectory cont = integrate_meanfield(orbit.window.states.front(), orbit.t_start,
                                              orbit.t_start + period, period, p);
    const auto a = cont.states.back().to_array();
    const auto b = orbit.window.states.front().to_array();
    double amp = 0.0;
    for (const auto& s : orbit.window.states)
        for (double v : s.to_array()) amp = std::max(amp, std::abs(v));
    for (int i = 0; i < 6; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-3 * amp);
}

TEST_CASE("orbit area of a known ellipse") {
    // parametric circle of radius r in (q1, p1): area pi r^2
    MeanTrajectory w;
    const double r = 0.7;
    const int n = 400;
    for (int k = 0; k < n; ++k) {
        const double th = 2.0 * std::numbers::pi * k / n;
        MeanFieldState s;
        s.q1 = r * std::cos(th);
        s.p1 = r * std::sin(th);
        w.t.push_back(th);
        w.states.push_back(s);
    }
    CHECK(orbit_area(w, 1) == doctest::Approx(std::numbers::pi * r * r).epsilon(1e-3));
    CHECK(orbit_area(w, 2) == doctest::Approx(0.0));
}
