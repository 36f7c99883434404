#include "optosync/errors.hpp"
#include "optosync/model.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace optosync;

namespace {

SystemParams defaults() { return SystemParams{}; }

int count_nonzeros(const Mat& m) {
    int n = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0.0) ++n;
    return n;
}

} // namespace

TEST_CASE("modulation factor at reference times") {
    SystemParams p = defaults(); // eps = 0.5, Omega = 0.5
    CHECK(modulation_factor(p, 0.0) == doctest::Approx(1.0));
    CHECK(modulation_factor(p, std::numbers::pi) == doctest::Approx(1.5));
    // sin^2(pi/4) = 1/2 exactly
    const double expected = 1.0 + 0.5 * std::pow(std::sin(0.25 * std::numbers::pi), 2);
    CHECK(expected == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(modulation_factor(p, 0.5 * std::numbers::pi) == doctest::Approx(1.25));
}

TEST_CASE("modulation factor is bounded and periodic") {
    SystemParams p = defaults();
    const double period = std::numbers::pi / p.mod_omega;
    for (int k = 0; k <= 200; ++k) {
        const double t = 2.0 * period * k / 200.0;
        const double f = modulation_factor(p, t);
        CHECK(f >= 1.0);
        CHECK(f <= 1.0 + p.mod_eps + 1e-12);
        CHECK(modulation_factor(p, t + period) == doctest::Approx(f).epsilon(1e-12));
    }
}

TEST_CASE("drift matrix in the pure-cavity-decay limit") {
    SystemParams p;
    p.omega_m = 0.0;
    p.delta_m = 0.0;
    p.delta = 0.0;
    p.kappa = 1.0;
    p.gamma_m1 = p.gamma_m2 = 0.0;
    p.g = 0.0;
    p.drive_e = 0.0;
    p.mod_omega = 0.0;
    p.mod_eps = 0.0;
    const Mat a = build_drift_matrix(p, 0.0, 0.0);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            const double expect = (i == j && i < 2) ? -1.0 : 0.0;
            CHECK(a(i, j) == doctest::Approx(expect));
        }
}

TEST_CASE("drift matrix entries at the default parameter set") {
    SystemParams p = defaults();
    const double g_eff = 0.151; // representative effective coupling
    const Mat a0 = build_drift_matrix(p, g_eff, 0.0);
    CHECK(a0(3, 2) == doctest::Approx(-1.0)); // modulation factor 1 at t=0
    CHECK(a0(0, 0) == doctest::Approx(-p.kappa));
    CHECK(a0(0, 1) == doctest::Approx(p.delta));
    CHECK(a0(1, 0) == doctest::Approx(-p.delta));
    CHECK(a0(1, 2) == doctest::Approx(g_eff));
    CHECK(a0(1, 4) == doctest::Approx(g_eff));
    CHECK(a0(3, 0) == doctest::Approx(g_eff));
    CHECK(a0(5, 0) == doctest::Approx(g_eff));
    CHECK(a0(2, 3) == doctest::Approx(p.omega_m));
    CHECK(a0(4, 5) == doctest::Approx(p.omega_m + p.delta_m));
    CHECK(a0(5, 4) == doctest::Approx(-(p.omega_m + p.delta_m)));
    CHECK(a0(3, 3) == doctest::Approx(-p.gamma_m1));
    CHECK(a0(5, 5) == doctest::Approx(-p.gamma_m2));

    // spring entry follows the modulation: at Omega t = pi/2 it is -(1+eps)
    const double t_quarter = 0.5 * std::numbers::pi / p.mod_omega;
    const Mat aq = build_drift_matrix(p, g_eff, t_quarter);
    CHECK(aq(3, 2) == doctest::Approx(-1.5));
}

TEST_CASE("drift matrix has exactly the structural nonzeros") {
    SystemParams p = defaults();
    p.delta_m = 0.07; // generic values everywhere
    const Mat a = build_drift_matrix(p, 0.151, 0.3);
    CHECK(count_nonzeros(a) == 14);
}

TEST_CASE("unmodulated drift matrix is time independent") {
    SystemParams p = defaults();
    p.mod_eps = 0.0;
    const Mat a1 = build_drift_matrix(p, 0.2, 0.0);
    const Mat a2 = build_drift_matrix(p, 0.2, 17.3);
    CHECK(max_abs_diff(a1, a2) == 0.0);
}

TEST_CASE("diffusion matrix at the default rates") {
    SystemParams p = defaults();
    const Mat d = build_diffusion_matrix(p);
    const double expect[6] = {0.1, 0.1, 0.0, 0.001, 0.0, 0.001};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(d(i, j) == doctest::Approx(i == j ? expect[i] : 0.0));
}

TEST_CASE("diffusion matrix limiting cases") {
    SystemParams p = defaults();
    p.kappa = 0.0;
    p.gamma_m1 = p.gamma_m2 = 0.0;
    CHECK(build_diffusion_matrix(p).max_abs() == 0.0);

    SystemParams q = defaults();
    q.kappa = 0.1;
    q.n_ph = 1.0;
    q.gamma_m1 = q.gamma_m2 = 0.0;
    const Mat d = build_diffusion_matrix(q);
    CHECK(d(0, 0) == doctest::Approx(0.3));
    CHECK(d(1, 1) == doctest::Approx(0.3));
    CHECK(d(3, 3) == doctest::Approx(0.0));
}

TEST_CASE("parameter validation rejects bad rates") {
    SystemParams p = defaults();
    p.kappa = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);

    SystemParams q = defaults();
    q.delta_m = -2.0; // mirror-2 frequency would be negative
    CHECK_THROWS_AS(q.validate(), ConfigError);

    SystemParams r = defaults();
    r.mod_eps = -0.1;
    CHECK_THROWS_AS(r.validate(), ConfigError);

    SystemParams s = defaults();
    s.n_m1 = -1e-9;
    CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("parameters parse from key=value text and JSON") {
    const SystemParams p = params_from_string("kappa = 0.2\n# comment\ndrive_e = 1.5\n");
    CHECK(p.kappa == doctest::Approx(0.2));
    CHECK(p.drive_e == doctest::Approx(1.5));
    CHECK(p.delta == doctest::Approx(1.0)); // untouched default

    const SystemParams j = params_from_string(R"({"mod_eps": 0.25, "delta_m": 0.05})");
    CHECK(j.mod_eps == doctest::Approx(0.25));
    CHECK(j.delta_m == doctest::Approx(0.05));

    CHECK_THROWS_AS(params_from_string("not_a_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(params_from_string("kappa : 0.3\n"), ConfigError);
    CHECK_THROWS_AS(params_from_string(R"({"kappa": "soft"})"), ConfigError);
}

TEST_CASE("defaults match the documented operating point") {
    const SystemParams p = defaults();
    CHECK(p.omega_m == 1.0);
    CHECK(p.delta == 1.0);
    CHECK(p.kappa == 0.1);
    CHECK(p.gamma_m1 == 0.001);
    CHECK(p.gamma_m2 == 0.001);
    CHECK(p.g == 0.05);
    CHECK(p.mod_omega == 0.5);
    CHECK(p.mod_eps == 0.5);
    CHECK(p.drive_e == 2.1);
    CHECK(p.delta_m == 0.0);
    CHECK(p.n_ph == 0.0);
    CHECK(p.n_m1 == 0.0);
    CHECK(p.n_m2 == 0.0);
}

TEST_CASE("symplectic form squares to minus identity") {
    const Mat o = symplectic_form(3);
    const Mat o2 = o * o;
    CHECK(max_abs_diff(o2, Mat::identity(6) * -1.0) == 0.0);
}
