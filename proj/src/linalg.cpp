#include "sphiso/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sphiso/errors.hpp"

namespace sphiso {

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw PreconditionError("CMatrix: entry count " + std::to_string(data_.size()) +
                            " does not match " + std::to_string(rows) + "x" +
                            std::to_string(cols));
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw PreconditionError("CMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

CMatrix CMatrix::resized(std::size_t rows, std::size_t cols) const {
  CMatrix out(rows, cols);
  const std::size_t r = std::min(rows, rows_), c = std::min(cols, cols_);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out(i, j) = (*this)(i, j);
  return out;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t rows,
                       std::size_t cols) const {
  CMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = at_or_zero(r0 + i, c0 + j);
  return out;
}

double CMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

double CMatrix::frobenius() const noexcept {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

bool CMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw PreconditionError("CMatrix +=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw PreconditionError("CMatrix -=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
CMatrix operator*(cplx s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) throw PreconditionError("CMatrix *: shape mismatch");
  CMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx* orow = &out(i, 0);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      const cplx* brow = &b(k, 0);
      for (std::size_t j = 0; j < b.cols(); ++j) orow[j] += aik * brow[j];
    }
  }
  return out;
}

CVector operator*(const CMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw PreconditionError("CMatrix * vector: shape mismatch");
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s{};
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  const std::size_t r = std::max(a.rows(), b.rows()), c = std::max(a.cols(), b.cols());
  double m = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m = std::max(m, std::abs(a.at_or_zero(i, j) - b.at_or_zero(i, j)));
  return m;
}

double hermitian_defect(const CMatrix& a) {
  if (!a.square()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
  return m;
}

double vec_norm(std::span<const cplx> x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

namespace {

void require_hermitian(const CMatrix& a, double tol, const char* who) {
  if (!a.square()) throw PreconditionError(std::string(who) + ": matrix is not square");
  if (!a.all_finite()) throw PreconditionError(std::string(who) + ": non-finite entry");
  const double defect = hermitian_defect(a);
  if (defect > tol)
    throw PreconditionError(std::string(who) + ": matrix not hermitian (defect " +
                            std::to_string(defect) + ")");
}

double off_diagonal_norm(const CMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace

HermEigensystem herm_eigensystem(const CMatrix& input, double tol) {
  require_hermitian(input, tol, "herm_eigs");
  const std::size_t n = input.rows();
  CMatrix a = input;
  // Symmetrize so the rotations act on an exactly hermitian matrix.
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
  CMatrix v = CMatrix::identity(n);
  const double scale = std::max(a.frobenius(), 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm(a) <= 1e-17 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx g = a(p, q);
        const double ag = std::abs(g);
        if (ag <= 1e-300) continue;
        const double app = a(p, p).real(), aqq = a(q, q).real();
        // Skip rotations that cannot change the diagonal in floating point.
        if (sweep > 3 && 1e-18 * std::abs(app) >= ag && 1e-18 * std::abs(aqq) >= ag) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double tau = (aqq - app) / (2.0 * ag);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cplx d = std::conj(g) / ag;  // phase making a(p,q) real

        // A <- A J with J = [[c, s], [-s d, c d]] on columns p, q.
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * c - akq * (s * d);
          a(k, q) = akp * s + akq * (c * d);
        }
        // A <- J* A on rows p, q.
        const cplx dc = std::conj(d);
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = apk * c - aqk * (s * dc);
          a(q, k) = apk * s + aqk * (c * dc);
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * c - vkq * (s * d);
          v(k, q) = vkp * s + vkq * (c * d);
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  HermEigensystem out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> herm_eigs(const CMatrix& a, double tol) {
  return herm_eigensystem(a, tol).values;
}

std::size_t bandwidth(const CMatrix& a) {
  std::size_t b = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a(i, j) != cplx{}) b = std::max(b, i > j ? i - j : j - i);
  return b;
}

namespace {

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off2;  // |offdiagonal|^2, size n-1
};

// Unitary similarity reducing a hermitian band matrix to tridiagonal form
// with Givens rotations; bulges created below the band are chased off the
// bottom immediately.
// Band storage wide enough for the bulges: a(i, j) with |i - j| <= b + 4.
class BandStore {
 public:
  BandStore(const CMatrix& a, std::size_t b) : off_(b + 4), width_(2 * b + 9), data_(a.rows() * width_) {
    const std::size_t n = a.rows();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i > b ? i - b : 0, hi = std::min(n, i + b + 1);
      for (std::size_t j = lo; j < hi; ++j) (*this)(i, j) = a(i, j);
    }
  }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * width_ + (j + off_ - i)]; }

 private:
  std::size_t off_, width_;
  std::vector<cplx> data_;
};

Tridiagonal band_to_tridiagonal(const CMatrix& dense) {
  const std::size_t n = dense.rows();
  const std::size_t b = bandwidth(dense);
  BandStore a(dense, b);
  const auto lo_of = [&](std::size_t p) { return p > b + 3 ? p - b - 3 : std::size_t{0}; };
  const auto hi_of = [&](std::size_t p) { return std::min(n, p + b + 4); };

  // Zero a(p, q) using the plane (p-1, p).
  const auto rotate_out = [&](std::size_t p, std::size_t q) {
    const cplx x1 = a(p - 1, q), x2 = a(p, q);
    if (x2 == cplx{}) return false;
    const double rho = std::sqrt(std::norm(x1) + std::norm(x2));
    const cplx g00 = std::conj(x1) / rho, g01 = std::conj(x2) / rho;
    const cplx g10 = -x2 / rho, g11 = x1 / rho;
    const std::size_t lo = lo_of(p), hi = hi_of(p);
    for (std::size_t k = lo; k < hi; ++k) {
      const cplx u = a(p - 1, k), w = a(p, k);
      a(p - 1, k) = g00 * u + g01 * w;
      a(p, k) = g10 * u + g11 * w;
    }
    for (std::size_t k = lo; k < hi; ++k) {
      const cplx u = a(k, p - 1), w = a(k, p);
      a(k, p - 1) = u * std::conj(g00) + w * std::conj(g01);
      a(k, p) = u * std::conj(g10) + w * std::conj(g11);
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    return true;
  };

  if (b > 1) {
    for (std::size_t j = 0; j + 2 < n; ++j) {
      for (std::size_t r = std::min(j + b, n - 1); r >= j + 2; --r) {
        if (!rotate_out(r, j)) continue;
        // Chase the bulge at (p + b, p - 1).
        std::size_t p = r;
        while (p + b < n) {
          const std::size_t bp = p + b, bq = p - 1;
          if (!rotate_out(bp, bq)) break;
          p = bp;
        }
      }
    }
  }

  Tridiagonal t;
  t.diag.resize(n);
  t.off2.resize(n ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) t.diag[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) t.off2[i] = std::norm(a(i + 1, i));
  return t;
}

// Number of eigenvalues strictly below x (Sturm sequence count).
std::size_t count_below(const Tridiagonal& t, double x, double pivmin) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    q = (t.diag[i] - x) - (i ? t.off2[i - 1] / q : 0.0);
    if (std::abs(q) < pivmin) q = -pivmin;
    if (q < 0) ++count;
  }
  return count;
}

std::pair<double, double> gershgorin(const Tridiagonal& t) {
  double lo = INFINITY, hi = -INFINITY;
  const std::size_t n = t.diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::sqrt(t.off2[i - 1]);
    if (i + 1 < n) r += std::sqrt(t.off2[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  return {lo, hi};
}

// k-th smallest eigenvalue (0-based) by bisection.
double bisect_eig(const Tridiagonal& t, std::size_t k, double lo, double hi, double pivmin) {
  const double scale = std::max(std::abs(lo), std::abs(hi));
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 2e-16 * scale + pivmin || mid == lo || mid == hi) break;
    if (count_below(t, mid, pivmin) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

Tridiagonal checked_tridiagonal(const CMatrix& a, double tol, const char* who) {
  require_hermitian(a, tol, who);
  CMatrix h = a;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    h(i, i) = h(i, i).real();
    for (std::size_t j = i + 1; j < h.cols(); ++j) {
      const cplx v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return band_to_tridiagonal(h);
}

double pivmin_of(const Tridiagonal& t) {
  double m = 0.0;
  for (double d : t.diag) m = std::max(m, std::abs(d));
  for (double e : t.off2) m = std::max(m, e);
  return std::max(m, 1.0) * 1e-300;
}

}  // namespace

std::vector<double> herm_eigvals_banded(const CMatrix& a, double tol) {
  const Tridiagonal t = checked_tridiagonal(a, tol, "herm_eigvals_banded");
  const std::size_t n = t.diag.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  const auto [lo, hi] = gershgorin(t);
  const double pad = 1e-12 * std::max({std::abs(lo), std::abs(hi), 1e-300});
  const double pm = pivmin_of(t);
  for (std::size_t k = 0; k < n; ++k) out[k] = bisect_eig(t, k, lo - pad, hi + pad, pm);
  return out;
}

double herm_max_eig(const CMatrix& a, double tol) {
  const Tridiagonal t = checked_tridiagonal(a, tol, "herm_max_eig");
  const std::size_t n = t.diag.size();
  if (n == 0) return 0.0;
  const auto [lo, hi] = gershgorin(t);
  const double pad = 1e-12 * std::max({std::abs(lo), std::abs(hi), 1e-300});
  return bisect_eig(t, n - 1, lo - pad, hi + pad, pivmin_of(t));
}

double op_norm(const CMatrix& a, double tol) {
  if (!a.all_finite()) throw PreconditionError("op_norm: non-finite entry");
  if (a.empty()) return 0.0;
  // Gram matrix on the smaller side.
  const CMatrix gram = a.rows() >= a.cols() ? a.adjoint() * a : a * a.adjoint();
  if (gram.max_abs() == 0.0) return 0.0;
  const double scale = gram.max_abs();
  const double lmax = herm_max_eig(gram, std::max(tol, 1e-12) * scale);
  return std::sqrt(std::max(0.0, lmax));
}

LsqResult solve_lsq(const CMatrix& a, std::span<const cplx> b) {
  const std::size_t m = a.rows(), n = a.cols();
  if (b.size() != m) throw PreconditionError("solve_lsq: rhs length mismatch");
  if (n > m) throw RankDeficientError("solve_lsq: more unknowns than equations", m);
  if (!a.all_finite()) throw PreconditionError("solve_lsq: non-finite entry");

  CMatrix r = a;
  CVector qtb(b.begin(), b.end());
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> colnorm(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::norm(r(i, j));
    colnorm[j] = s;
  }

  double first_pivot = 0.0;
  std::size_t rank = n;
  for (std::size_t k = 0; k < n; ++k) {
    // Pivot on the largest remaining column norm (recomputed, n is small).
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < m; ++i) s += std::norm(r(i, j));
      colnorm[j] = s;
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (best != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(r(i, k), r(i, best));
      std::swap(perm[k], perm[best]);
    }
    const double alpha_abs = std::sqrt(best_norm);
    if (k == 0) first_pivot = alpha_abs;
    if (alpha_abs <= 1e-10 * first_pivot || alpha_abs == 0.0) {
      rank = k;
      break;
    }
    // Householder reflector mapping column k (rows k..m) onto e_k.
    const cplx x0 = r(k, k);
    const cplx phase = std::abs(x0) > 0 ? x0 / std::abs(x0) : cplx{1.0};
    const cplx alpha = -phase * alpha_abs;
    CVector v(m - k);
    for (std::size_t i = k; i < m; ++i) v[i - k] = r(i, k);
    v[0] -= alpha;
    const double vn2 = [&] {
      double s = 0.0;
      for (const auto& e : v) s += std::norm(e);
      return s;
    }();
    if (vn2 > 0) {
      for (std::size_t j = k; j < n; ++j) {
        cplx dot{};
        for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i - k]) * r(i, j);
        const cplx f = 2.0 * dot / vn2;
        for (std::size_t i = k; i < m; ++i) r(i, j) -= f * v[i - k];
      }
      cplx dot{};
      for (std::size_t i = k; i < m; ++i) dot += std::conj(v[i - k]) * qtb[i];
      const cplx f = 2.0 * dot / vn2;
      for (std::size_t i = k; i < m; ++i) qtb[i] -= f * v[i - k];
    }
  }
  if (rank < n)
    throw RankDeficientError("solve_lsq: rank deficient (detected rank " +
                                 std::to_string(rank) + " of " + std::to_string(n) + ")",
                             rank);

  CVector z(n);
  for (std::size_t kk = n; kk-- > 0;) {
    cplx s = qtb[kk];
    for (std::size_t j = kk + 1; j < n; ++j) s -= r(kk, j) * z[j];
    z[kk] = s / r(kk, kk);
  }
  LsqResult out;
  out.x.assign(n, cplx{});
  for (std::size_t k = 0; k < n; ++k) out.x[perm[k]] = z[k];
  const CVector ax = a * std::span<const cplx>(out.x);
  double res = 0.0;
  for (std::size_t i = 0; i < m; ++i) res += std::norm(ax[i] - b[i]);
  out.residual = std::sqrt(res);
  out.rank = rank;
  return out;
}

}  // namespace sphiso
