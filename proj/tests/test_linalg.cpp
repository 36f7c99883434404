#include "optosync/errors.hpp"
#include "optosync/linalg.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace optosync;

namespace {

std::mt19937 rng(20240811);

Mat random_mat(int n, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = u(rng);
    return m;
}

Mat random_symmetric(int n, double scale = 1.0) {
    Mat m = random_mat(n, scale);
    m.symmetrize();
    return m;
}

// Orthogonal matrix from a product of random Givens rotations.
Mat random_orthogonal(int n) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    Mat q = Mat::identity(n);
    for (int p = 0; p < n; ++p)
        for (int r = p + 1; r < n; ++r) {
            const double th = u(rng);
            const double c = std::cos(th), s = std::sin(th);
            for (int k = 0; k < n; ++k) {
                const double qp = q(k, p), qr = q(k, r);
                q(k, p) = c * qp - s * qr;
                q(k, r) = s * qp + c * qr;
            }
        }
    return q;
}

} // namespace

TEST_CASE("matrix product matches a hand-computed case") {
    const Mat a(2, 3, {1, 2, 3, 4, 5, 6});
    const Mat b(3, 2, {7, 8, 9, 10, 11, 12});
    const Mat c = a * b;
    CHECK(c(0, 0) == doctest::Approx(58));
    CHECK(c(0, 1) == doctest::Approx(64));
    CHECK(c(1, 0) == doctest::Approx(139));
    CHECK(c(1, 1) == doctest::Approx(154));
    CHECK(max_abs_diff(a.transposed().transposed(), a) == 0.0);
}

TEST_CASE("lu solve reproduces the right-hand side") {
    for (int n : {1, 2, 5, 12}) {
        const Mat a = random_mat(n) + Mat::identity(n) * (n + 1.0);
        std::vector<double> x_ref(n);
        for (int i = 0; i < n; ++i) x_ref[i] = std::sin(i + 1.0);
        const std::vector<double> b = a * x_ref;
        const std::vector<double> x = solve(a, b);
        for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(x_ref[i]).epsilon(1e-10));
    }
}

TEST_CASE("determinant of a triangular matrix is the diagonal product") {
    Mat a(3, 3, {2, 5, 1, 0, -3, 4, 0, 0, 0.5});
    CHECK(determinant(a) == doctest::Approx(-3.0));
    CHECK(determinant(Mat::identity(4)) == doctest::Approx(1.0));
}

TEST_CASE("singular system throws") {
    Mat a(2, 2, {1, 2, 2, 4});
    std::vector<double> b = {1, 1};
    CHECK_THROWS_AS(solve(a, b), NumericalDegeneracy);
}

TEST_CASE("symmetric eigensolver on a known 2x2") {
    const Mat a(2, 2, {2, 1, 1, 2});
    const SymEig e = sym_eig(a);
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[1] == doctest::Approx(3.0));
}

TEST_CASE("symmetric eigensolver properties on random matrices") {
    for (int n : {2, 3, 6, 10, 17}) {
        const Mat a = random_symmetric(n);
        const SymEig e = sym_eig(a);
        // residual ||A v - lambda v|| and orthonormality
        for (int k = 0; k < n; ++k) {
            for (int i = 0; i < n; ++i) {
                double av = 0.0;
                for (int j = 0; j < n; ++j) av += a(i, j) * e.vectors(j, k);
                CHECK(av == doctest::Approx(e.values[k] * e.vectors(i, k)).epsilon(1e-9));
            }
            for (int l = k; l < n; ++l) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += e.vectors(i, k) * e.vectors(i, l);
                CHECK(dot == doctest::Approx(k == l ? 1.0 : 0.0).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("two symmetric eigenvalue routes agree") {
    // Jacobi (with vectors) against Householder+QL (values only).
    for (int n : {1, 2, 5, 9, 24, 41}) {
        const Mat a = random_symmetric(n, 3.0);
        const SymEig e = sym_eig(a);
        const std::vector<double> v = sym_eigvals(a);
        REQUIRE(v.size() == static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) CHECK(v[k] == doctest::Approx(e.values[k]).epsilon(1e-9));
    }
}

TEST_CASE("symmetric square root squares back") {
    const Mat m = random_mat(5);
    const Mat spd = m * m.transposed() + Mat::identity(5) * 0.1;
    const Mat r = sym_sqrt(spd);
    CHECK(max_abs_diff(r * r, spd) < 1e-9);
}

TEST_CASE("general eigenvalues of a triangular matrix") {
    Mat a(4, 4);
    const double diag[4] = {-1.5, 0.25, 2.0, 7.0};
    for (int i = 0; i < 4; ++i) {
        a(i, i) = diag[i];
        for (int j = i + 1; j < 4; ++j) a(i, j) = 0.3 * (i + j);
    }
    auto ev = eigenvalues(a);
    std::sort(ev.begin(), ev.end(), [](cplx x, cplx y) { return x.real() < y.real(); });
    for (int i = 0; i < 4; ++i) {
        CHECK(ev[i].real() == doctest::Approx(diag[i]).epsilon(1e-10));
        CHECK(std::abs(ev[i].imag()) < 1e-10);
    }
}

TEST_CASE("general eigenvalues of a rotation-scaling block") {
    // [[a,-b],[b,a]] has eigenvalues a +/- i b
    Mat m(2, 2, {0.3, -1.7, 1.7, 0.3});
    auto ev = eigenvalues(m);
    std::sort(ev.begin(), ev.end(), [](cplx x, cplx y) { return x.imag() < y.imag(); });
    CHECK(ev[0].real() == doctest::Approx(0.3));
    CHECK(ev[0].imag() == doctest::Approx(-1.7));
    CHECK(ev[1].imag() == doctest::Approx(1.7));
}

TEST_CASE("general eigenvalues survive an orthogonal similarity") {
    const int n = 6;
    std::vector<double> diag = {-2.0, -0.5, -0.1, 0.4, 1.3, 3.7};
    Mat d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = diag[i];
    const Mat q = random_orthogonal(n);
    const Mat a = q * d * q.transposed();
    auto ev = eigenvalues(a);
    std::vector<double> re;
    for (auto& e : ev) {
        CHECK(std::abs(e.imag()) < 1e-8);
        re.push_back(e.real());
    }
    std::sort(re.begin(), re.end());
    for (int i = 0; i < n; ++i) CHECK(re[i] == doctest::Approx(diag[i]).epsilon(1e-8));
}

TEST_CASE("repeated eigenvalue is found to the expected reduced accuracy") {
    Mat j(2, 2, {3, 1, 0, 3});
    auto ev = eigenvalues(j);
    for (auto& e : ev) CHECK(std::abs(e - cplx(3.0, 0.0)) < 1e-5);
}

TEST_CASE("cubic polynomial roots") {
    // (x-1)(x-2)(x-3) = -6 + 11x - 6x^2 + x^3
    const std::vector<double> c = {-6, 11, -6, 1};
    auto r = poly_roots(c);
    std::vector<double> re;
    for (auto& z : r) re.push_back(z.real());
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(1.0));
    CHECK(re[1] == doctest::Approx(2.0));
    CHECK(re[2] == doctest::Approx(3.0));
}

TEST_CASE("lyapunov solver satisfies its defining equation") {
    for (int n : {2, 4, 6}) {
        Mat a = random_mat(n);
        for (int i = 0; i < n; ++i) a(i, i) -= n + 1.0; // push spectrum left
        const Mat m = random_mat(n);
        const Mat q = m * m.transposed() + Mat::identity(n) * 0.01;
        const Mat x = solve_lyapunov(a, q);
        const Mat resid = a * x + x * a.transposed() + q;
        CHECK(resid.max_abs() < 1e-9);
        CHECK(max_abs_diff(x, x.transposed()) < 1e-12);
    }
}
