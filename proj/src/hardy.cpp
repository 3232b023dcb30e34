#include "sphiso/hardy.hpp"

#include <algorithm>
#include <cmath>

#include "sphiso/errors.hpp"

namespace sphiso {

namespace {

constexpr int kPositivityGrid = 1024;
constexpr double kPivotFloor = 1e-12;

std::size_t u(int k) { return static_cast<std::size_t>(k); }

}  // namespace

CircleMeasure::CircleMeasure(std::map<int, cplx> coefficients, double min_density) {
  for (const auto& [k, c] : coefficients) {
    if (k < 0) throw PreconditionError("CircleMeasure: give coefficients for k >= 0 only");
    if (c != cplx{}) coeffs_.emplace(k, c);
  }
  auto it = coeffs_.find(0);
  if (it == coeffs_.end() || it->second != cplx{1.0})
    throw PreconditionError("CircleMeasure: density must have w^(0) = 1");
  degree_ = coeffs_.rbegin()->first;
  if (4 * degree_ > kPositivityGrid)
    throw PreconditionError("CircleMeasure: density degree too large for the positivity grid");
  const EssRange r = eval_grid(density(), kPositivityGrid);
  grid_min_ = std::numeric_limits<double>::infinity();
  for (cplx v : r.samples) grid_min_ = std::min(grid_min_, v.real());
  if (!(grid_min_ >= min_density))
    throw PreconditionError("CircleMeasure: density minimum " + format_double(grid_min_) +
                            " below " + format_double(min_density));
}

cplx CircleMeasure::coeff(int k) const {
  auto it = coeffs_.find(std::abs(k));
  if (it == coeffs_.end()) return 0.0;
  return k >= 0 ? it->second : std::conj(it->second);
}

LaurentPoly CircleMeasure::density() const {
  LaurentPoly w(1);
  for (const auto& [k, c] : coeffs_) {
    w.add_term({k}, c);
    if (k != 0) w.add_term({-k}, std::conj(c));
  }
  return w;
}

CMatrix moment_matrix(const CircleMeasure& m, int d) {
  CMatrix g(u(d + 1), u(d + 1));
  for (int i = 0; i <= d; ++i)
    for (int j = 0; j <= d; ++j) g(u(i), u(j)) = m.coeff(i - j);
  return g;
}

HardyBasis onb(const CircleMeasure& m, int d) {
  if (d < 0) throw PreconditionError("onb: degree must be >= 0");
  const std::size_t n = u(d + 1);
  // G = L L*, row by row.
  CMatrix l(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      cplx s = m.coeff(static_cast<int>(i) - static_cast<int>(j));
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      if (i == j) {
        if (!(s.real() >= kPivotFloor))
          throw ConditioningError("onb: Cholesky pivot " + format_double(s.real()) +
                                      " below 1e-12 at degree " + std::to_string(i),
                                  static_cast<int>(i));
        l(i, i) = std::sqrt(s.real());
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  // Columns of B = (L*)^{-1}: solve L* b = e_k upward from row k.
  HardyBasis b{d, CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<cplx> col(k + 1);
    col[k] = 1.0 / l(k, k);
    for (std::size_t jj = k; jj-- > 0;) {
      cplx s = 0.0;
      for (std::size_t r = jj + 1; r <= k; ++r) s += std::conj(l(r, jj)) * col[r];
      col[jj] = -s / l(jj, jj);
    }
    for (std::size_t j = 0; j <= k; ++j) b.coeffs(k, j) = col[j];
  }
  return b;
}

double gram_residual(const HardyBasis& b, const CircleMeasure& m) {
  const CMatrix bc = b.columns();
  const CMatrix h = bc.adjoint() * moment_matrix(m, b.d) * bc;
  return max_abs_diff(h, CMatrix::identity(h.rows()));
}

CMatrix truncated_toeplitz(const LaurentPoly& phi, const CircleMeasure& m, const HardyBasis& b) {
  const int d = b.d;
  if (2 * phi.max_abs_exponent() > d)
    throw PreconditionError("truncated_toeplitz: symbol band exceeds d/2");
  const std::size_t n = u(d + 1);
  // A_ml = <phi z^l, z^m>_m = sum_s phi^(s) w^(m - l - s).
  CMatrix a(n, n);
  for (int mm = 0; mm <= d; ++mm)
    for (int l = 0; l <= d; ++l) {
      cplx s = 0.0;
      for (const auto& [e, c] : phi.terms()) s += c * m.coeff(mm - l - e[0]);
      a(u(mm), u(l)) = s;
    }
  // X = B* A B with B upper triangular, B_jk = coeffs(k, j).
  CMatrix ab(n, n);
  for (std::size_t mm = 0; mm < n; ++mm)
    for (std::size_t k = 0; k < n; ++k) {
      cplx s = 0.0;
      for (std::size_t l = 0; l <= k; ++l) s += a(mm, l) * b.coeffs(k, l);
      ab(mm, k) = s;
    }
  CMatrix x(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      cplx s = 0.0;
      for (std::size_t mm = 0; mm <= i; ++mm) s += std::conj(b.coeffs(i, mm)) * ab(mm, k);
      x(i, k) = s;
    }
  return x;
}

CMatrix truncated_toeplitz(const LaurentPoly& phi, const CircleMeasure& m, int d) {
  return truncated_toeplitz(phi, m, onb(m, d));
}

double brown_halmos_residual(const CMatrix& x, const CMatrix& tz, int window) {
  const std::size_t w = u(window);
  if (tz.rows() < w + 2 || x.rows() < w + 2)
    throw PreconditionError("brown_halmos_residual: window too large for the truncation");
  // T_z is Hessenberg (z p_j has degree j + 1), so only indices <= j + 1 enter.
  double worst = 0.0;
  for (std::size_t i = 0; i < w; ++i)
    for (std::size_t j = 0; j < w; ++j) {
      cplx s = -x(i, j);
      for (std::size_t a = 0; a <= i + 1; ++a) {
        cplx inner = 0.0;
        for (std::size_t b = 0; b <= j + 1; ++b) inner += x(a, b) * tz(b, j);
        s += std::conj(tz(a, i)) * inner;
      }
      worst = std::max(worst, std::abs(s));
    }
  return worst;
}

std::vector<double> brown_halmos_residual(const LaurentPoly& phi, const CircleMeasure& m,
                                          int window, const std::vector<int>& degrees) {
  if (degrees.empty()) throw PreconditionError("brown_halmos_residual: no degrees given");
  const int dmin = *std::min_element(degrees.begin(), degrees.end());
  if (window + phi.max_abs_exponent() >= dmin)
    throw PreconditionError("brown_halmos_residual: window + band must be below every degree");
  std::vector<double> out;
  const LaurentPoly z = LaurentPoly::power(1);
  for (int d : degrees) {
    const HardyBasis b = onb(m, d);
    out.push_back(brown_halmos_residual(truncated_toeplitz(phi, m, b), truncated_toeplitz(z, m, b),
                                        window));
  }
  return out;
}

double interior_isometry_defect(const CircleMeasure& m, int d) {
  if (d < 2) throw PreconditionError("interior_isometry_defect: d must be >= 2");
  const CMatrix tz = truncated_toeplitz(LaurentPoly::power(1), m, d);
  const std::size_t k = u(d);  // columns 0 .. d-1
  const CMatrix cols = tz.block(0, 0, tz.rows(), k);
  return max_abs_diff(cols.adjoint() * cols, CMatrix::identity(k));
}

}  // namespace sphiso
