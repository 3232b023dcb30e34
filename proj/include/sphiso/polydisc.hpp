#pragma once

// Bidisc Hardy space H^2(T^2) = H^2(T) (x) H^2(T). Elements are finite
// sums of elementary tensors of circle Toeplitz elements, so every
// operation is exact per factor. Equality is decided on truncations.

#include <utility>
#include <vector>

#include "sphiso/circle.hpp"

namespace sphiso {

constexpr std::size_t kMaxTensorTerms = 4096;

class TensorElement {
 public:
  using Term = std::pair<ToeplitzElement, ToeplitzElement>;

  TensorElement() = default;
  explicit TensorElement(std::vector<Term> terms);
  static TensorElement elementary(ToeplitzElement a, ToeplitzElement b);
  static TensorElement identity();

  const std::vector<Term>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  // sum_i kron(A_i truncated, B_i truncated), size n^2.
  CMatrix truncation(std::size_t n) const;
  // R v for v a vectorized n x n array (row index from the first factor).
  CVector apply_truncated(std::size_t n, const CVector& v, bool adjoint) const;

  TensorElement& operator+=(const TensorElement& o);
  TensorElement& operator-=(const TensorElement& o);
  TensorElement& operator*=(cplx s);
  friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
  friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
  friend TensorElement operator*(cplx s, TensorElement a) { return a *= s; }

 private:
  // Drops zero factors and merges terms sharing a factor.
  void canonicalize();
  std::vector<Term> terms_;
};

double gamma(int n);

TensorElement tensor_mul(const TensorElement& x, const TensorElement& y);
TensorElement tensor_adjoint(const TensorElement& x);

// T_{z1} = T_z (x) I, T_{z2} = I (x) T_z.
TensorElement coordinate_shift(int j);

// max entry gap between the n-per-factor truncations.
double truncation_diff(const TensorElement& x, const TensorElement& y, std::size_t n = 32);

// lower: power-iteration Rayleigh bound on the truncation;
// upper: sum over terms of (l1 + Frobenius) products.
NormBracket norm_bracket(const TensorElement& x, std::size_t n = 32);

// (1/gamma^2) sum_j T_j* T_j - I. With scaled = false the 1/gamma^2 is
// left out, which must fail.
struct ScaledIsometryReport {
  TensorElement defect;
  double residual = 0.0;  // upper bracket of the defect
  double per_factor = 0.0;  // |T_z* T_z - I| on the circle
};
ScaledIsometryReport scaled_isometry_check(bool scaled = true);

enum class GammaVerdict { toeplitz, not_toeplitz };
std::string to_string(GammaVerdict v);

struct GammaResidual {
  TensorElement residual;  // sum_j T_j* X T_j - gamma^2 X
  NormBracket bracket;
  GammaVerdict verdict = GammaVerdict::not_toeplitz;
  // |gamma^2 (Psi(X) - X) - residual| on truncations, with Psi the CP map
  // of the gamma-scaled coordinates.
  double scaling_mismatch = 0.0;
};

GammaResidual gamma_equation_residual(const TensorElement& x, std::size_t n = 32);

}  // namespace sphiso
