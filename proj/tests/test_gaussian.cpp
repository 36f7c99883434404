#include "optosync/errors.hpp"
#include "optosync/gaussian.hpp"
#include "optosync/meanfield.hpp"
#include "optosync/ode.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace optosync;

namespace {

// Two-mode squeezed state in standard form, vacuum convention 1/2.
Mat two_mode_squeezed(double r) {
    const double ch = 0.5 * std::cosh(2.0 * r);
    const double sh = 0.5 * std::sinh(2.0 * r);
    Mat s(4, 4);
    s(0, 0) = s(1, 1) = s(2, 2) = s(3, 3) = ch;
    s(0, 2) = s(2, 0) = sh;
    s(1, 3) = s(3, 1) = -sh;
    return s;
}

double entropy_f(double nu) {
    const double up = nu + 0.5, dn = nu - 0.5;
    double s = up * std::log2(up);
    if (dn > 0.0) s -= dn * std::log2(dn);
    return s;
}

MeanFieldState equal_means() {
    MeanFieldState m;
    m.q1 = m.q2 = 0.37;
    m.p1 = m.p2 = -0.12;
    return m;
}

} // namespace

TEST_CASE("zero covariance is a fixed point of the homogeneous equation") {
    // d sigma/dt = A sigma + sigma A^T with sigma(0) = 0 stays zero.
    SystemParams p;
    p.mod_eps = 0.0;
    const Mat a = build_drift_matrix(p, 0.15, 0.0);
    std::vector<double> y(36, 0.0);
    integrate_adaptive(
        [&](double, std::span<const double> yy, std::span<double> dy) {
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < 6; ++k) s += a(i, k) * yy[k * 6 + j] + yy[i * 6 + k] * a(j, k);
                    dy[i * 6 + j] = s;
                }
        },
        y, 0.0, 50.0, 10.0, nullptr);
    for (double v : y) CHECK(v == 0.0);
}

TEST_CASE("uncoupled damped vacuum is stationary") {
    SystemParams p; // default rates, zero occupancies
    p.mod_eps = 0.0; // an unmodulated spring keeps the vacuum invariant
    const CovTrajectory traj =
        propagate_covariance(vacuum_covariance(), 0.0, 40.0, 5.0, p, 0.0);
    for (const Mat& s : traj.sigma) CHECK(max_abs_diff(s, vacuum_covariance()) < 1e-9);
}

TEST_CASE("variance ratio of reference states") {
    CHECK(quadrature_variance_ratio(vacuum_covariance(), kIdxQ1) == doctest::Approx(1.0));
    const Mat thermal = Mat::identity(6) * 1.5; // occupation 1 on every mode
    CHECK(quadrature_variance_ratio(thermal, kIdxQ2) == doctest::Approx(3.0));
    CHECK_THROWS_AS(quadrature_variance_ratio(vacuum_covariance(), 9), DimensionMismatch);
}

TEST_CASE("synchronization measure of reference states") {
    // uncorrelated vacuum mirrors with equal means sit exactly at the bound
    CHECK(synchronization_measure(vacuum_covariance(), equal_means()) == doctest::Approx(1.0));

    // identical correlated mirrors whose difference mode sits at the vacuum
    // limit: the measure reaches its maximum 1 exactly
    Mat corr = vacuum_covariance();
    corr(kIdxQ1, kIdxQ1) = corr(kIdxQ2, kIdxQ2) = 1.0;
    corr(kIdxP1, kIdxP1) = corr(kIdxP2, kIdxP2) = 1.0;
    corr(kIdxQ1, kIdxQ2) = corr(kIdxQ2, kIdxQ1) = 0.5;
    corr(kIdxP1, kIdxP2) = corr(kIdxP2, kIdxP1) = 0.5;
    CHECK(synchronization_measure(corr, equal_means()) == doctest::Approx(1.0));

    // a two-mode squeezed pair trades synchronization for entanglement:
    // S = 1/cosh(2r) below the bound
    Mat full = vacuum_covariance();
    const Mat tmss = two_mode_squeezed(0.4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) full(kIdxQ1 + i, kIdxQ1 + j) = tmss(i, j);
    CHECK(synchronization_measure(full, equal_means()) ==
          doctest::Approx(1.0 / std::cosh(0.8)).epsilon(1e-12));

    // uncorrelated thermal mirrors, occupation 1
    Mat thermal = vacuum_covariance();
    thermal(kIdxQ1, kIdxQ1) = thermal(kIdxP1, kIdxP1) = 1.5;
    thermal(kIdxQ2, kIdxQ2) = thermal(kIdxP2, kIdxP2) = 1.5;
    CHECK(synchronization_measure(thermal, equal_means()) == doctest::Approx(1.0 / 3.0));

    // mean offsets reduce the measure
    MeanFieldState offset = equal_means();
    offset.q1 += 1.0; // q_- mean = 1/sqrt(2), contributes 1/2
    CHECK(synchronization_measure(vacuum_covariance(), offset) == doctest::Approx(1.0 / 1.5));
}

TEST_CASE("reduced mirror block extracts rows and columns 3..6") {
    Mat sigma = vacuum_covariance();
    sigma(kIdxQ1, kIdxQ2) = sigma(kIdxQ2, kIdxQ1) = 0.21;
    sigma(kIdxX, kIdxQ1) = sigma(kIdxQ1, kIdxX) = 0.77; // must not leak in
    const Mat m = reduced_mirror_block(sigma);
    CHECK(m.rows() == 4);
    CHECK(m(0, 0) == doctest::Approx(0.5));
    CHECK(m(0, 2) == doctest::Approx(0.21));
    CHECK(m(1, 3) == doctest::Approx(0.0));
}

TEST_CASE("symplectic eigenvalues of reference states") {
    const std::vector<double> nus = symplectic_eigenvalues(vacuum_covariance());
    REQUIRE(nus.size() == 3);
    for (double nu : nus) CHECK(nu == doctest::Approx(0.5).epsilon(1e-12));

    Mat single(2, 2);
    single(0, 0) = single(1, 1) = 1.5; // thermal, occupation 1
    const std::vector<double> one = symplectic_eigenvalues(single);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == doctest::Approx(1.5).epsilon(1e-12));

    // a pure two-mode squeezed state has both values at 1/2
    for (double r : {0.3, 1.0}) {
        const std::vector<double> pair = symplectic_eigenvalues(two_mode_squeezed(r));
        REQUIRE(pair.size() == 2);
        CHECK(pair[0] == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(pair[1] == doctest::Approx(0.5).epsilon(1e-10));
    }
}

TEST_CASE("logarithmic negativity of reference states") {
    CHECK(logarithmic_negativity(vacuum_covariance(2)) == doctest::Approx(0.0));
    for (double r : {0.1, 0.5, 1.0}) {
        const double expect = 2.0 * r / std::log(2.0);
        CHECK(logarithmic_negativity(two_mode_squeezed(r)) ==
              doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("gaussian entropy of reference states") {
    CHECK(gaussian_entropy(vacuum_covariance()) == doctest::Approx(0.0));
    Mat single(2, 2);
    single(0, 0) = single(1, 1) = 1.5;
    CHECK(gaussian_entropy(single) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(gaussian_entropy(two_mode_squeezed(0.8)) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("mutual information of reference states") {
    CHECK(mutual_information(vacuum_covariance(2)) == doctest::Approx(0.0));
    for (double r : {0.2, 0.7}) {
        const double expect = 2.0 * entropy_f(0.5 * std::cosh(2.0 * r));
        CHECK(mutual_information(two_mode_squeezed(r)) == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("entanglement and correlations grow with squeezing") {
    double last_en = -1.0, last_mi = -1.0;
    for (double r = 0.0; r <= 2.0001; r += 0.25) {
        const Mat s = two_mode_squeezed(r);
        const double en = logarithmic_negativity(s);
        const double mi = mutual_information(s);
        if (r > 0.0) {
            CHECK(en > last_en);
            CHECK(mi > last_mi);
        }
        last_en = en;
        last_mi = mi;
    }
}

TEST_CASE("logarithmic negativity is invariant under local rotations") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    const Mat base = two_mode_squeezed(0.6);
    const double ref = logarithmic_negativity(base);
    for (int trial = 0; trial < 10; ++trial) {
        Mat s(4, 4);
        const double t1 = u(rng), t2 = u(rng);
        // block-diagonal phase rotations, one per mirror
        Mat rot(4, 4);
        rot(0, 0) = std::cos(t1);
        rot(0, 1) = std::sin(t1);
        rot(1, 0) = -std::sin(t1);
        rot(1, 1) = std::cos(t1);
        rot(2, 2) = std::cos(t2);
        rot(2, 3) = std::sin(t2);
        rot(3, 2) = -std::sin(t2);
        rot(3, 3) = std::cos(t2);
        s = rot * base * rot.transposed();
        CHECK(logarithmic_negativity(s) == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("floquet stability of a constant-coefficient system") {
    SystemParams p;
    p.mod_eps = 0.0; // constant drift
    const double g_eff = 0.15;
    const StabilityReport rep = floquet_stability(p, g_eff);
    // analytic route: moduli are exp(Re lambda * period) for constant A
    const Mat a = build_drift_matrix(p, g_eff, 0.0);
    std::vector<double> expect;
    for (const cplx& lam : eigenvalues(a)) expect.push_back(std::exp(lam.real() * rep.period));
    std::sort(expect.begin(), expect.end());
    REQUIRE(rep.moduli.size() == expect.size());
    for (size_t k = 0; k < expect.size(); ++k)
        CHECK(rep.moduli[k] == doctest::Approx(expect[k]).epsilon(1e-7));
    CHECK(rep.stable);
}

TEST_CASE("closed dynamics sit on the unit circle") {
    SystemParams p;
    p.kappa = 1e-300; // no dissipation, distinct frequencies
    p.gamma_m1 = p.gamma_m2 = 1e-300;
    p.delta = 1.3;
    p.delta_m = 0.25;
    p.mod_eps = 0.0;
    const StabilityReport rep = floquet_stability(p, 0.0);
    for (double m : rep.moduli) CHECK(m == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("default operating point is floquet stable") {
    SystemParams p;
    const MeanFieldState ss = steady_state(p);
    const StabilityReport rep = floquet_stability(p, effective_coupling(ss, p));
    CHECK(rep.stable);
    CHECK(rep.moduli.back() < 1.0);
}

TEST_CASE("unmodulated propagation converges to the algebraic steady state") {
    SystemParams p;
    p.mod_eps = 0.0;
    const MeanFieldState ss = steady_state(p);
    const double g_eff = effective_coupling(ss, p);
    const Mat direct = steady_covariance_unmodulated(p, g_eff);

    PropagateOptions opt;
    opt.rtol = 1e-10;
    opt.atol = 1e-12;
    const CovTrajectory traj =
        propagate_covariance(vacuum_covariance(), 0.0, 8000.0, 2000.0, p, g_eff, opt);
    CHECK(max_abs_diff(traj.sigma.back(), direct) < 1e-6);

    // and the algebraic solution really solves the equation
    const Mat a = build_drift_matrix(p, g_eff, 0.0);
    const Mat resid = a * direct + direct * a.transposed() + build_diffusion_matrix(p);
    CHECK(resid.max_abs() < 1e-10);
}

TEST_CASE("default run keeps its invariants") {
    SystemParams p;
    const MeanFieldState ss = steady_state(p);
    const double g_eff = effective_coupling(ss, p);
    MeanTrajectory mf = integrate_meanfield(ss, 0.0, 400.0, 1.0, p);
    PropagateOptions opt;
    opt.physical_slack = 1e-3; // transient of the momentum-only damping model
    const CovTrajectory traj =
        propagate_covariance(vacuum_covariance(), 0.0, 400.0, 1.0, p, g_eff, opt);
    REQUIRE(traj.t.size() == mf.t.size());
    for (size_t k = 0; k < traj.t.size(); ++k) {
        const Mat& s = traj.sigma[k];
        for (double up : uncertainty_products(s)) CHECK(up >= 0.25 - 1e-9);
        const double sync = synchronization_measure(s, mf.states[k]);
        CHECK(sync > 0.0);
        CHECK(sync <= 1.0 + 1e-9);
        CHECK(min_symplectic_eigenvalue(s) >= 0.5 - 1e-3);
        // reductions stay physical
        CHECK(symplectic_eigenvalues(reduced_mirror_block(s)).front() >= 0.5 - 1e-3);
    }
}

TEST_CASE("modulated covariance settles onto a periodic cycle") {
    SystemParams p;
    const MeanFieldState ss = steady_state(p);
    const double g_eff = effective_coupling(ss, p);
    const PeriodicCovariance pc = settle_covariance(vacuum_covariance(), p, g_eff, 0.05);
    CHECK(pc.converged);
    CHECK(pc.residual < 1e-5);

    // squeezing below the zero-point level somewhere in the cycle
    double min_q1 = 1e9, min_q2 = 1e9;
    for (const Mat& s : pc.window.sigma) {
        min_q1 = std::min(min_q1, quadrature_variance_ratio(s, kIdxQ1));
        min_q2 = std::min(min_q2, quadrature_variance_ratio(s, kIdxQ2));
    }
    CHECK(min_q1 < 1.0);
    CHECK(min_q2 < 1.0);

    // one more period reproduces the window start
    PropagateOptions opt;
    const CovTrajectory cont =
        propagate_covariance(pc.window.sigma.front(), pc.t_start,
                             pc.t_start + std::numbers::pi / p.mod_omega,
                             std::numbers::pi / p.mod_omega, p, g_eff, opt);
    CHECK(max_abs_diff(cont.sigma.back(), pc.window.sigma.front()) < 2e-5);
}

TEST_CASE("unphysical input is rejected during propagation") {
    SystemParams p;
    Mat bad = vacuum_covariance() * 0.2; // far below the vacuum floor
    CHECK_THROWS_AS(propagate_covariance(bad, 0.0, 1.0, 0.5, p, 0.0), UnphysicalState);
}
