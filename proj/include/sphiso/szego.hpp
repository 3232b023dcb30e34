#pragma once

// Graded weighted-shift model of the Szego n-tuple on H^2 of the unit
// sphere in C^n. Basis: normalized monomials z^alpha / ||z^alpha||, ordered
// by total degree, then lexicographically. Matrices are indexed
// (beta, alpha): column alpha holds the image of e_alpha. Images of degree
// above d are dropped, so only the safe region is trusted.

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <memory>
#include <vector>

#include "sphiso/linalg.hpp"
#include "sphiso/symbols.hpp"

namespace sphiso {

using Rational = boost::multiprecision::cpp_rational;

int total_degree(const Exponent& a);

// int_{S^{2n-1}} |z^alpha|^2 dsigma = (n-1)! alpha! / (n-1+|alpha|)!.
Rational sphere_moment(int n, const Exponent& alpha);
// int z^gamma zbar^delta dsigma (zero unless gamma == delta).
Rational sphere_integral(int n, const Exponent& gamma, const Exponent& delta);

class MonomialBasis {
 public:
  MonomialBasis(int n, int d);
  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const Exponent& operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<Exponent>& indices() const noexcept { return indices_; }
  // Position of alpha, or size() if |alpha| > d or alpha is not in range.
  std::size_t find(const Exponent& alpha) const;
  std::size_t index(const Exponent& alpha) const;  // throws if absent

 private:
  int n_, d_;
  std::vector<Exponent> indices_;
  std::map<Exponent, std::size_t> lookup_;
};

// All multi-indices of length n and total degree exactly k.
std::vector<Exponent> shell(int n, int k);

struct GradedOperator {
  std::shared_ptr<const MonomialBasis> basis;
  int band = 0;         // largest total-degree shift
  int safe_degree = 0;  // entries involving degrees <= safe_degree are exact
  CMatrix matrix;       // (beta, alpha)

  GradedOperator() = default;
  GradedOperator(int n, int d, int band, int safe_degree);
  int n() const { return basis->n(); }
  int d() const { return basis->d(); }
  cplx entry(const Exponent& beta, const Exponent& alpha) const;
  void set(const Exponent& beta, const Exponent& alpha, cplx v);
  bool valid(const Exponent& beta, const Exponent& alpha) const {
    return total_degree(alpha) <= safe_degree && total_degree(beta) <= safe_degree;
  }
  // Nonzero entries keyed (beta, alpha).
  std::map<std::pair<Exponent, Exponent>, cplx> entries() const;
};

GradedOperator graded_identity(int n, int d);

struct SzegoTuple {
  int n = 1;
  int d = 2;
  std::vector<GradedOperator> shifts;
};

SzegoTuple szego_tuple(int n, int d);

// Compression of multiplication by phi to H^2(sphere), in the normalized
// monomial basis.
GradedOperator toeplitz_graded(const BiPoly& phi, int n, int d);

struct FixedPointResidual {
  double interior = 0.0;  // |alpha|, |beta| <= safe_degree - 1
  double boundary = 0.0;
};

// max entries of sum_j T_j* X T_j - X, split by the validity region.
FixedPointResidual fixed_point_residual(const GradedOperator& x, const SzegoTuple& tuple);

struct DefectReport {
  double interior_defect = 0.0;   // max |(sum T_j*T_j - I)| off the top shell
  double top_shell_defect = 0.0;  // max |entry + 1| on the top-shell diagonal
  double off_diagonal = 0.0;      // max |entry| off the diagonal on the top shell
  std::size_t top_shell_size = 0;
  // Largest deviation from the -identity-on-top-shell pattern.
  double value() const { return std::max({interior_defect, top_shell_defect, off_diagonal}); }
};

DefectReport defect_report(const SzegoTuple& tuple);

// max |T_i T_j - T_j T_i| on degrees <= d - 2.
double commutator_defect(const SzegoTuple& tuple);

struct NormalExtensionReport {
  int degree = 0;
  std::size_t dimension = 0;       // two-sided monomials z^g zbar^h, |g|+|h| <= degree
  double adjoint_defect = 0.0;     // <M_zj u, v> - <u, M_zbarj v>
  double sphere_defect = 0.0;      // sum_j <M_zj u, M_zj v> - <u, v>
  double shift_compression = 0.0;  // vs szego_tuple
  double symbol_compression = 0.0; // vs toeplitz_graded for the test symbols
};

// Multiplication by z_j on the L^2(sphere) polynomial model restricted to
// the analytic monomials. Inner products use exact moment Gram entries.
NormalExtensionReport normal_extension_check(int n, int degree, const std::vector<BiPoly>& symbols);

}  // namespace sphiso
