#ifndef OPTOSYNC_SPMM_HPP
#define OPTOSYNC_SPMM_HPP

#include "optosync/linalg.hpp"

#include <complex>
#include <tuple>
#include <vector>

namespace optosync {

// Dense complex matrix, row-major.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols) : rows_(rows), cols_(cols), v_(static_cast<size_t>(rows) * cols) {}

    static CMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    size_t size() const { return v_.size(); }

    cplx& operator()(int i, int j) { return v_[static_cast<size_t>(i) * cols_ + j]; }
    const cplx& operator()(int i, int j) const { return v_[static_cast<size_t>(i) * cols_ + j]; }
    cplx* data() { return v_.data(); }
    const cplx* data() const { return v_.data(); }

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(cplx s);
    CMatrix adjoint() const;
    cplx trace() const;
    double max_abs() const;
    double max_abs_diff(const CMatrix& o) const;
    void hermitize(); // (m + m^dagger)/2
    void fill_zero();

private:
    int rows_ = 0, cols_ = 0;
    std::vector<cplx> v_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);

// y += alpha x
void axpy(cplx alpha, const CMatrix& x, CMatrix& y);

// Compressed sparse row complex matrix for the truncated mode operators.
class SparseOp {
public:
    using Triplet = std::tuple<int, int, cplx>;

    SparseOp() = default;
    static SparseOp from_triplets(int rows, int cols, std::vector<Triplet> trips);
    static SparseOp identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int nnz() const { return static_cast<int>(val_.size()); }

    const std::vector<int>& row_ptr() const { return ptr_; }
    const std::vector<int>& col_idx() const { return col_; }
    const std::vector<cplx>& values() const { return val_; }

    SparseOp dagger() const;
    SparseOp operator*(const SparseOp& o) const;
    SparseOp operator+(const SparseOp& o) const;
    SparseOp operator-(const SparseOp& o) const;
    friend SparseOp operator*(cplx s, const SparseOp& m);
    CMatrix to_dense() const;
    bool is_diagonal() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<int> ptr_, col_;
    std::vector<cplx> val_;
};

SparseOp kron(const SparseOp& a, const SparseOp& b);

// out = op * x. The parallel kernel splits over output rows; the serial
// twin is the reference the tests and the benchmark compare against.
void apply_left(const SparseOp& op, const CMatrix& x, CMatrix& out);
void apply_left_serial(const SparseOp& op, const CMatrix& x, CMatrix& out);

// out = x * op.
void apply_right(const CMatrix& x, const SparseOp& op, CMatrix& out);
void apply_right_serial(const CMatrix& x, const SparseOp& op, CMatrix& out);

// Eigenvalues of a Hermitian complex matrix, ascending (real symmetric
// embedding of twice the size).
std::vector<double> herm_eigvals(const CMatrix& m);

} // namespace optosync

#endif
