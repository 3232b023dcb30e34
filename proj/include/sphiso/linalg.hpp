#pragma once

// Dense complex linear algebra used by every model in the library.
//
// Storage is row-major. Matrices are small enough (<= ~2048) that nothing
// here is sparse or blocked; the only structure exploited is bandedness,
// which the Hermitian eigenvalue path detects on its own.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sphiso {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
  bool square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  // Entry with implicit zero padding outside the stored block.
  cplx at_or_zero(std::size_t i, std::size_t j) const {
    return (i < rows_ && j < cols_) ? data_[i * cols_ + j] : cplx{};
  }

  std::span<cplx> entries() noexcept { return data_; }
  std::span<const cplx> entries() const noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  // Copy into a rows x cols matrix, truncating or zero padding.
  CMatrix resized(std::size_t rows, std::size_t cols) const;
  CMatrix block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const;

  double max_abs() const noexcept;
  double frobenius() const noexcept;
  bool all_finite() const noexcept;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cplx s);

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(CMatrix a, cplx s);
CMatrix operator*(cplx s, CMatrix a);
// Product that skips zero entries of the left factor (cheap on banded input).
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CVector operator*(const CMatrix& a, std::span<const cplx> x);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// max |a_ij - b_ij| with zero padding of the smaller operand.
double max_abs_diff(const CMatrix& a, const CMatrix& b);
double hermitian_defect(const CMatrix& a);
double vec_norm(std::span<const cplx> x);

struct HermEigensystem {
  std::vector<double> values;  // ascending
  CMatrix vectors;             // column k pairs with values[k]
};

// Cyclic Jacobi. Throws PreconditionError if A is not square or
// ||A - A*||_max > tol.
HermEigensystem herm_eigensystem(const CMatrix& a, double tol);
std::vector<double> herm_eigs(const CMatrix& a, double tol);

// Eigenvalues only, for large (typically banded) Hermitian matrices:
// Givens band reduction to tridiagonal form, then Sturm bisection.
std::vector<double> herm_eigvals_banded(const CMatrix& a, double tol);
double herm_max_eig(const CMatrix& a, double tol);

// Number of sub/superdiagonals carrying a nonzero entry.
std::size_t bandwidth(const CMatrix& a);

// Largest singular value, sqrt(max eig(A*A)).
double op_norm(const CMatrix& a, double tol = 1e-12);

struct LsqResult {
  CVector x;
  double residual = 0.0;  // ||Ax - b||_2
  std::size_t rank = 0;
};

// Householder QR with column pivoting. Pivots below 1e-10 of the largest
// pivot count as rank loss and raise RankDeficientError.
LsqResult solve_lsq(const CMatrix& a, std::span<const cplx> b);

}  // namespace sphiso
