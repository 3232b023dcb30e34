#pragma once

// Weighted Hardy spaces H^2(m) on the circle, dm = w(theta) dtheta/2pi with
// w a positive trigonometric polynomial. <z^j, z^i>_m = w^(i - j).
//
// Every loop below is bounded by triangular structure, never by d, so the
// leading block of any matrix is bitwise the same for every d.

#include <map>
#include <vector>

#include "sphiso/linalg.hpp"
#include "sphiso/symbols.hpp"

namespace sphiso {

class CircleMeasure {
 public:
  // coefficients[k] = w^(k) for k >= 0; negative k follow by conjugation.
  // Requires w^(0) == 1 and w >= min_density on a 1024-point grid.
  explicit CircleMeasure(std::map<int, cplx> coefficients, double min_density = 1e-9);
  static CircleMeasure lebesgue() { return CircleMeasure({{0, 1.0}}); }

  cplx coeff(int k) const;
  int degree() const noexcept { return degree_; }
  const std::map<int, cplx>& coefficients() const noexcept { return coeffs_; }
  LaurentPoly density() const;
  double grid_minimum() const noexcept { return grid_min_; }

 private:
  std::map<int, cplx> coeffs_;
  int degree_ = 0;
  double grid_min_ = 1.0;
};

struct HardyBasis {
  int d = 0;
  // Row k holds the monomial coefficients of p_k (lower triangular).
  CMatrix coeffs;
  // Columns are the p_k: coeffs transposed, upper triangular.
  CMatrix columns() const { return coeffs.transpose(); }
};

// Moment matrix G_ij = w^(i - j), 0 <= i, j <= d.
CMatrix moment_matrix(const CircleMeasure& m, int d);
// Cholesky orthonormalization of 1, z, ..., z^d. Throws ConditioningError
// with the degree of the first pivot below 1e-12.
HardyBasis onb(const CircleMeasure& m, int d);
// max |<p_j, p_i>_m - delta_ij|.
double gram_residual(const HardyBasis& b, const CircleMeasure& m);

// (d+1) x (d+1) matrix <phi p_j, p_i>_m.
CMatrix truncated_toeplitz(const LaurentPoly& phi, const CircleMeasure& m, int d);
CMatrix truncated_toeplitz(const LaurentPoly& phi, const CircleMeasure& m, const HardyBasis& b);

// max over the top-left window of |T_z* X T_z - X|. tz must be the
// truncated shift of the same measure, with at least window + 2 rows.
double brown_halmos_residual(const CMatrix& x, const CMatrix& tz, int window);
std::vector<double> brown_halmos_residual(const LaurentPoly& phi, const CircleMeasure& m,
                                          int window, const std::vector<int>& degrees);

// max |<T_z p_j, T_z p_i> - delta_ij| over j, i <= d - 1: T_z is an isometry
// on the columns whose images stay in degree <= d.
double interior_isometry_defect(const CircleMeasure& m, int d);

}  // namespace sphiso
