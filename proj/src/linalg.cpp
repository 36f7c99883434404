#include "optosync/linalg.hpp"

#include "optosync/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace optosync {

Mat::Mat(int rows, int cols, std::initializer_list<double> vals) : Mat(rows, cols) {
    if (static_cast<int>(vals.size()) != rows * cols)
        throw DimensionMismatch("matrix initializer has wrong length");
    std::copy(vals.begin(), vals.end(), a_.begin());
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Mat Mat::diagonal(std::span<const double> d) {
    Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

Mat& Mat::operator+=(const Mat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix add shape mismatch");
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

Mat& Mat::operator-=(const Mat& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sub shape mismatch");
    for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

Mat& Mat::operator*=(double s) {
    for (double& x : a_) x *= s;
    return *this;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw DimensionMismatch("matrix product shape mismatch");
    Mat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    }
    return r;
}

std::vector<double> Mat::operator*(std::span<const double> v) const {
    if (cols_ != static_cast<int>(v.size())) throw DimensionMismatch("matrix-vector shape mismatch");
    std::vector<double> r(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
        r[i] = s;
    }
    return r;
}

Mat Mat::transposed() const {
    Mat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

double Mat::trace() const {
    double s = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
}

double Mat::max_abs() const {
    double m = 0.0;
    for (double x : a_) m = std::max(m, std::abs(x));
    return m;
}

void Mat::symmetrize() {
    for (int i = 0; i < rows_; ++i)
        for (int j = i + 1; j < cols_; ++j) {
            const double m = 0.5 * ((*this)(i, j) + (*this)(j, i));
            (*this)(i, j) = m;
            (*this)(j, i) = m;
        }
}

double max_abs_diff(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("shape mismatch");
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
    return m;
}

LuFactors lu_factor(Mat a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("LU needs a square matrix");
    const int n = a.rows();
    LuFactors f;
    f.perm.resize(n);
    std::iota(f.perm.begin(), f.perm.end(), 0);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                piv = i;
            }
        }
        if (best == 0.0) {
            f.singular = true;
            continue;
        }
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(k, j));
            std::swap(f.perm[piv], f.perm[k]);
            f.sign = -f.sign;
        }
        for (int i = k + 1; i < n; ++i) {
            a(i, k) /= a(k, k);
            const double lik = a(i, k);
            if (lik == 0.0) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
        }
    }
    f.lu = std::move(a);
    return f;
}

std::vector<double> lu_solve(const LuFactors& f, std::span<const double> b) {
    const int n = f.lu.rows();
    if (static_cast<int>(b.size()) != n) throw DimensionMismatch("rhs length mismatch");
    if (f.singular) throw NumericalDegeneracy("singular matrix in linear solve");
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (int i = 1; i < n; ++i) {
        double s = x[i];
        for (int j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = x[i];
        for (int j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s / f.lu(i, i);
    }
    return x;
}

std::vector<double> solve(const Mat& a, std::span<const double> b) {
    return lu_solve(lu_factor(a), b);
}

double determinant(const Mat& a) {
    LuFactors f = lu_factor(a);
    if (f.singular) return 0.0;
    double d = f.sign;
    for (int i = 0; i < f.lu.rows(); ++i) d *= f.lu(i, i);
    return d;
}

SymEig sym_eig(Mat a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("sym_eig needs a square matrix");
    const int n = a.rows();
    Mat v = Mat::identity(n);
    SymEig out;
    if (n == 0) return out;

    auto offdiag_norm = [&]() {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
        return std::sqrt(2.0 * s);
    };

    const double scale = std::max(a.max_abs(), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (offdiag_norm() <= 1e-15 * scale * n) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (int r = 0; r < n; ++r) {
                    if (r == p || r == q) continue;
                    const double arp = a(r, p), arq = a(r, q);
                    a(r, p) = arp - s * (arq + tau * arp);
                    a(p, r) = a(r, p);
                    a(r, q) = arq + s * (arp - tau * arq);
                    a(q, r) = a(r, q);
                }
                for (int r = 0; r < n; ++r) {
                    const double vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (int r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

// Householder reduction to tridiagonal form (eigenvalues only) followed by
// implicit-shift QL. Classic dense-symmetric path, no vector accumulation.
std::vector<double> sym_eigvals(Mat a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("sym_eigvals needs a square matrix");
    const int n = a.rows();
    if (n == 0) return {};
    if (n == 1) return {a(0, 0)};

    std::vector<double> d(n, 0.0), e(n, 0.0);

    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0, sc = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) sc += std::abs(a(i, k));
            if (sc == 0.0) {
                e[i] = a(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    a(i, k) /= sc;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = sc * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (int k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = a(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    for (int i = 0; i < n; ++i) d[i] = a(i, i);

    // QL with implicit shifts on the tridiagonal (d, e).
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    double anorm = 0.0;
    for (int i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
    if (anorm == 0.0) return d;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-17 * dd + 1e-18 * anorm) break;
            }
            if (m != l) {
                if (iter++ == 50) throw NumericalDegeneracy("QL iteration failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    e[i + 1] = r = std::hypot(f, g);
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    std::sort(d.begin(), d.end());
    return d;
}

Mat sym_sqrt(const Mat& a) {
    SymEig eig = sym_eig(a);
    const int n = a.rows();
    Mat r(n, n);
    for (int k = 0; k < n; ++k) {
        const double lam = eig.values[k];
        if (lam < -1e-10 * std::max(1.0, std::abs(eig.values.back())))
            throw UnphysicalState("sym_sqrt of an indefinite matrix");
        const double s = std::sqrt(std::max(lam, 0.0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) r(i, j) += s * eig.vectors(i, k) * eig.vectors(j, k);
    }
    return r;
}

namespace {

// det(z I - A) by complex LU with partial pivoting; monic in z.
cplx shifted_determinant(const Mat& a, cplx z) {
    const int n = a.rows();
    std::vector<cplx> m(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[static_cast<size_t>(i) * n + j] = (i == j ? z : 0.0) - a(i, j);
    cplx det = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(m[static_cast<size_t>(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(m[static_cast<size_t>(i) * n + k]);
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0) return 0.0;
        if (piv != k) {
            for (int j = k; j < n; ++j)
                std::swap(m[static_cast<size_t>(piv) * n + j], m[static_cast<size_t>(k) * n + j]);
            det = -det;
        }
        const cplx pivot = m[static_cast<size_t>(k) * n + k];
        det *= pivot;
        for (int i = k + 1; i < n; ++i) {
            const cplx lik = m[static_cast<size_t>(i) * n + k] / pivot;
            if (lik == cplx(0.0)) continue;
            for (int j = k + 1; j < n; ++j)
                m[static_cast<size_t>(i) * n + j] -= lik * m[static_cast<size_t>(k) * n + j];
        }
    }
    return det;
}

// Simultaneous (Durand-Kerner) root iteration for a monic polynomial given
// as an evaluation callback.
std::vector<cplx> durand_kerner(int n, cplx center, double radius,
                                const std::function<cplx(cplx)>& p) {
    std::vector<cplx> z(n);
    for (int k = 0; k < n; ++k) {
        const double ang = 2.0 * std::numbers::pi * k / n + 0.4;
        z[k] = center + radius * cplx(std::cos(ang), std::sin(ang));
    }
    const int max_iter = 600;
    for (int it = 0; it < max_iter; ++it) {
        double worst = 0.0;
        for (int k = 0; k < n; ++k) {
            cplx denom = 1.0;
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                cplx d = z[k] - z[j];
                if (std::abs(d) < 1e-100) d = cplx(1e-100, 1e-100);
                denom *= d;
            }
            const cplx w = p(z[k]) / denom;
            z[k] -= w;
            worst = std::max(worst, std::abs(w) / std::max(1.0, std::abs(z[k])));
        }
        if (worst < 1e-14) break;
    }
    return z;
}

} // namespace

std::vector<cplx> eigenvalues(const Mat& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("eigenvalues need a square matrix");
    const int n = a.rows();
    if (n == 0) return {};
    if (n == 1) return {cplx(a(0, 0), 0.0)};

    // Gershgorin bound keeps every root inside the start circle.
    double bound = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += std::abs(a(i, j));
        bound = std::max(bound, row);
    }
    const cplx center(a.trace() / n, 0.0);
    const double radius = bound + 1.0;
    return durand_kerner(n, center, radius, [&](cplx z) { return shifted_determinant(a, z); });
}

std::vector<cplx> poly_roots(std::span<const double> coeffs) {
    int deg = static_cast<int>(coeffs.size()) - 1;
    while (deg > 0 && coeffs[deg] == 0.0) --deg;
    if (deg <= 0) return {};
    // Companion matrix of the monic normalization.
    Mat c(deg, deg);
    for (int i = 1; i < deg; ++i) c(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) c(i, deg - 1) = -coeffs[i] / coeffs[deg];
    return eigenvalues(c);
}

Mat solve_lyapunov(const Mat& a, const Mat& q) {
    if (a.rows() != a.cols() || q.rows() != q.cols() || a.rows() != q.rows())
        throw DimensionMismatch("lyapunov solve shape mismatch");
    const int n = a.rows();
    const int nn = n * n;
    Mat m(nn, nn);
    std::vector<double> rhs(nn);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int r = i * n + j;
            rhs[r] = -q(i, j);
            for (int k = 0; k < n; ++k) {
                m(r, k * n + j) += a(i, k); // A X term
                m(r, i * n + k) += a(j, k); // X A^T term
            }
        }
    }
    const std::vector<double> x = solve(m, rhs);
    Mat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = x[static_cast<size_t>(i) * n + j];
    out.symmetrize();
    return out;
}

} // namespace optosync
