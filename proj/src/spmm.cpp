#include "optosync/spmm.hpp"

#include "optosync/errors.hpp"

#include <algorithm>
#include <cmath>

namespace optosync {

CMatrix CMatrix::identity(int n) {
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("CMatrix add shape mismatch");
    for (size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("CMatrix sub shape mismatch");
    for (size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
    for (cplx& x : v_) x *= s;
    return *this;
}

CMatrix CMatrix::adjoint() const {
    CMatrix r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

cplx CMatrix::trace() const {
    cplx s = 0.0;
    for (int i = 0; i < std::min(rows_, cols_); ++i) s += (*this)(i, i);
    return s;
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const cplx& x : v_) m = std::max(m, std::abs(x));
    return m;
}

double CMatrix::max_abs_diff(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("CMatrix diff shape mismatch");
    double m = 0.0;
    for (size_t i = 0; i < v_.size(); ++i) m = std::max(m, std::abs(v_[i] - o.v_[i]));
    return m;
}

void CMatrix::hermitize() {
    for (int i = 0; i < rows_; ++i) {
        (*this)(i, i) = cplx((*this)(i, i).real(), 0.0);
        for (int j = i + 1; j < cols_; ++j) {
            const cplx m = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
            (*this)(i, j) = m;
            (*this)(j, i) = std::conj(m);
        }
    }
}

void CMatrix::fill_zero() { std::fill(v_.begin(), v_.end(), cplx(0.0)); }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("CMatrix product shape mismatch");
    CMatrix r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

void axpy(cplx alpha, const CMatrix& x, CMatrix& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols())
        throw DimensionMismatch("axpy shape mismatch");
    const cplx* xs = x.data();
    cplx* ys = y.data();
    const size_t n = x.size();
    for (size_t i = 0; i < n; ++i) ys[i] += alpha * xs[i];
}

SparseOp SparseOp::from_triplets(int rows, int cols, std::vector<Triplet> trips) {
    std::sort(trips.begin(), trips.end(), [](const Triplet& a, const Triplet& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        return std::get<1>(a) < std::get<1>(b);
    });
    SparseOp m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.ptr_.assign(rows + 1, 0);
    for (size_t k = 0; k < trips.size();) {
        const int i = std::get<0>(trips[k]);
        const int j = std::get<1>(trips[k]);
        if (i < 0 || i >= rows || j < 0 || j >= cols)
            throw DimensionMismatch("sparse triplet out of range");
        cplx v = 0.0;
        while (k < trips.size() && std::get<0>(trips[k]) == i && std::get<1>(trips[k]) == j)
            v += std::get<2>(trips[k++]);
        if (v != cplx(0.0)) {
            m.col_.push_back(j);
            m.val_.push_back(v);
            ++m.ptr_[i + 1];
        }
    }
    for (int i = 0; i < rows; ++i) m.ptr_[i + 1] += m.ptr_[i];
    return m;
}

SparseOp SparseOp::identity(int n) {
    std::vector<Triplet> t;
    t.reserve(n);
    for (int i = 0; i < n; ++i) t.emplace_back(i, i, 1.0);
    return from_triplets(n, n, std::move(t));
}

SparseOp SparseOp::dagger() const {
    std::vector<Triplet> t;
    t.reserve(val_.size());
    for (int i = 0; i < rows_; ++i)
        for (int k = ptr_[i]; k < ptr_[i + 1]; ++k)
            t.emplace_back(col_[k], i, std::conj(val_[k]));
    return from_triplets(cols_, rows_, std::move(t));
}

SparseOp SparseOp::operator*(const SparseOp& o) const {
    if (cols_ != o.rows_) throw DimensionMismatch("sparse product shape mismatch");
    std::vector<Triplet> t;
    for (int i = 0; i < rows_; ++i)
        for (int k = ptr_[i]; k < ptr_[i + 1]; ++k) {
            const int mid = col_[k];
            const cplx v = val_[k];
            for (int l = o.ptr_[mid]; l < o.ptr_[mid + 1]; ++l)
                t.emplace_back(i, o.col_[l], v * o.val_[l]);
        }
    return from_triplets(rows_, o.cols_, std::move(t));
}

SparseOp SparseOp::operator+(const SparseOp& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("sparse add shape mismatch");
    std::vector<Triplet> t;
    t.reserve(val_.size() + o.val_.size());
    for (int i = 0; i < rows_; ++i)
        for (int k = ptr_[i]; k < ptr_[i + 1]; ++k) t.emplace_back(i, col_[k], val_[k]);
    for (int i = 0; i < o.rows_; ++i)
        for (int k = o.ptr_[i]; k < o.ptr_[i + 1]; ++k) t.emplace_back(i, o.col_[k], o.val_[k]);
    return from_triplets(rows_, cols_, std::move(t));
}

SparseOp SparseOp::operator-(const SparseOp& o) const { return *this + (cplx(-1.0) * o); }

SparseOp operator*(cplx s, const SparseOp& m) {
    SparseOp r = m;
    for (cplx& v : r.val_) v *= s;
    return r;
}

CMatrix SparseOp::to_dense() const {
    CMatrix d(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = ptr_[i]; k < ptr_[i + 1]; ++k) d(i, col_[k]) += val_[k];
    return d;
}

bool SparseOp::is_diagonal() const {
    for (int i = 0; i < rows_; ++i)
        for (int k = ptr_[i]; k < ptr_[i + 1]; ++k)
            if (col_[k] != i) return false;
    return true;
}

SparseOp kron(const SparseOp& a, const SparseOp& b) {
    std::vector<SparseOp::Triplet> t;
    t.reserve(static_cast<size_t>(a.nnz()) * b.nnz());
    const auto& ap = a.row_ptr();
    const auto& ac = a.col_idx();
    const auto& av = a.values();
    const auto& bp = b.row_ptr();
    const auto& bc = b.col_idx();
    const auto& bv = b.values();
    for (int ia = 0; ia < a.rows(); ++ia)
        for (int ka = ap[ia]; ka < ap[ia + 1]; ++ka)
            for (int ib = 0; ib < b.rows(); ++ib)
                for (int kb = bp[ib]; kb < bp[ib + 1]; ++kb)
                    t.emplace_back(ia * b.rows() + ib, ac[ka] * b.cols() + bc[kb],
                                   av[ka] * bv[kb]);
    return SparseOp::from_triplets(a.rows() * b.rows(), a.cols() * b.cols(), std::move(t));
}

namespace {

inline void apply_left_row(const SparseOp& op, const CMatrix& x, CMatrix& out, int i) {
    const auto& ptr = op.row_ptr();
    const auto& col = op.col_idx();
    const auto& val = op.values();
    const int nc = x.cols();
    cplx* dst = out.data() + static_cast<size_t>(i) * nc;
    std::fill(dst, dst + nc, cplx(0.0));
    for (int k = ptr[i]; k < ptr[i + 1]; ++k) {
        const cplx v = val[k];
        const cplx* src = x.data() + static_cast<size_t>(col[k]) * nc;
        for (int j = 0; j < nc; ++j) dst[j] += v * src[j];
    }
}

inline void apply_right_row(const CMatrix& x, const SparseOp& op, CMatrix& out, int i) {
    const auto& ptr = op.row_ptr();
    const auto& col = op.col_idx();
    const auto& val = op.values();
    const int nc = op.cols();
    const int nk = op.rows();
    cplx* dst = out.data() + static_cast<size_t>(i) * nc;
    std::fill(dst, dst + nc, cplx(0.0));
    const cplx* src = x.data() + static_cast<size_t>(i) * nk;
    for (int k = 0; k < nk; ++k) {
        const cplx xv = src[k];
        if (xv == cplx(0.0)) continue;
        for (int l = ptr[k]; l < ptr[k + 1]; ++l) dst[col[l]] += xv * val[l];
    }
}

void check_left(const SparseOp& op, const CMatrix& x, const CMatrix& out) {
    if (op.cols() != x.rows() || out.rows() != op.rows() || out.cols() != x.cols())
        throw DimensionMismatch("apply_left shape mismatch");
}

void check_right(const CMatrix& x, const SparseOp& op, const CMatrix& out) {
    if (x.cols() != op.rows() || out.rows() != x.rows() || out.cols() != op.cols())
        throw DimensionMismatch("apply_right shape mismatch");
}

} // namespace

void apply_left_serial(const SparseOp& op, const CMatrix& x, CMatrix& out) {
    check_left(op, x, out);
    for (int i = 0; i < op.rows(); ++i) apply_left_row(op, x, out, i);
}

void apply_left(const SparseOp& op, const CMatrix& x, CMatrix& out) {
    check_left(op, x, out);
    const int n = op.rows();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) apply_left_row(op, x, out, i);
}

void apply_right_serial(const CMatrix& x, const SparseOp& op, CMatrix& out) {
    check_right(x, op, out);
    for (int i = 0; i < x.rows(); ++i) apply_right_row(x, op, out, i);
}

void apply_right(const CMatrix& x, const SparseOp& op, CMatrix& out) {
    check_right(x, op, out);
    const int n = x.rows();
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) apply_right_row(x, op, out, i);
}

std::vector<double> herm_eigvals(const CMatrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("herm_eigvals needs a square matrix");
    const int n = m.rows();
    // Real symmetric embedding [[X, -Y], [Y, X]] doubles every eigenvalue.
    Mat e(2 * n, 2 * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double re = 0.5 * (m(i, j).real() + m(j, i).real());
            const double im = 0.5 * (m(i, j).imag() - m(j, i).imag());
            e(i, j) = re;
            e(n + i, n + j) = re;
            e(i, n + j) = -im;
            e(n + i, j) = im;
        }
    const std::vector<double> lam = sym_eigvals(std::move(e));
    std::vector<double> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) out.push_back(0.5 * (lam[2 * k] + lam[2 * k + 1]));
    return out;
}

} // namespace optosync
