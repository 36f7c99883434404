#ifndef OPTOSYNC_LINALG_HPP
#define OPTOSYNC_LINALG_HPP

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace optosync {

using cplx = std::complex<double>;

// Dense real matrix, row-major. Small sizes (the fluctuation dynamics live
// in a 6-dimensional phase space), so everything here is written for
// clarity and robustness rather than cache blocking.
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}
    Mat(int rows, int cols, std::initializer_list<double> vals);

    static Mat identity(int n);
    static Mat diagonal(std::span<const double> d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    Mat& operator+=(const Mat& o);
    Mat& operator-=(const Mat& o);
    Mat& operator*=(double s);

    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(Mat a, double s) { return a *= s; }
    friend Mat operator*(double s, Mat a) { return a *= s; }
    Mat operator*(const Mat& o) const;
    std::vector<double> operator*(std::span<const double> v) const;

    Mat transposed() const;
    double trace() const;
    double max_abs() const;
    void symmetrize();

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

double max_abs_diff(const Mat& a, const Mat& b);

// LU decomposition with partial pivoting.
struct LuFactors {
    Mat lu;
    std::vector<int> perm;
    int sign = 1;
    bool singular = false;
};

LuFactors lu_factor(Mat a);
std::vector<double> lu_solve(const LuFactors& f, std::span<const double> b);
std::vector<double> solve(const Mat& a, std::span<const double> b);
double determinant(const Mat& a);

// Eigen decomposition of a real symmetric matrix (cyclic Jacobi).
// Values ascending; vectors.col(k) is the eigenvector of values[k].
struct SymEig {
    std::vector<double> values;
    Mat vectors;
};
SymEig sym_eig(Mat a);

// Eigenvalues only, real symmetric, via Householder tridiagonalization and
// implicit QL. Much faster than Jacobi for the larger Hermitian checks.
std::vector<double> sym_eigvals(Mat a);

// Symmetric positive semidefinite square root.
Mat sym_sqrt(const Mat& a);

// All eigenvalues of a general real square matrix. Durand-Kerner iteration
// on the characteristic polynomial, evaluated by LU determinants of the
// shifted matrix; intended for the small drift/monodromy matrices.
std::vector<cplx> eigenvalues(const Mat& a);

// Roots of a polynomial c[0] + c[1] x + ... + c[n] x^n (c[n] != 0).
std::vector<cplx> poly_roots(std::span<const double> coeffs);

// Solve A X + X A^T + Q = 0 for symmetric X (vectorized direct solve).
Mat solve_lyapunov(const Mat& a, const Mat& q);

} // namespace optosync

#endif
