#pragma once

// Laurent polynomial symbols on the torus, their essential ranges,
// winding numbers and convex hulls.
//
// Text format (parse/print round-trips exactly):
//   2.5*z^3 - zbar + (1-0.5i)*z^2       one variable
//   z1^2*zbar2 + 3*z3                   several variables
// On the torus zbar_j = 1/z_j, so a LaurentPoly stores z_j^a zbar_j^b as
// the single exponent a - b. BiPoly keeps the two exponents apart; it is
// the symbol class of the sphere model, where zbar_j != 1/z_j.

#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sphiso/linalg.hpp"

namespace sphiso {

using Exponent = std::vector<int>;

class LaurentPoly {
 public:
  LaurentPoly() : nvars_(1) {}
  explicit LaurentPoly(int nvars);

  static LaurentPoly constant(cplx c, int nvars = 1);
  static LaurentPoly monomial(Exponent e, cplx c = 1.0);
  // z^k (or zbar^{-k}) in one variable.
  static LaurentPoly power(int k, cplx c = 1.0);
  // z_j in nvars variables (j is 0-based).
  static LaurentPoly coordinate(int j, int nvars);

  int nvars() const noexcept { return nvars_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::map<Exponent, cplx>& terms() const noexcept { return coeffs_; }

  cplx coeff(const Exponent& e) const;
  cplx coeff(int k) const;  // one variable
  void add_term(const Exponent& e, cplx c);

  // Largest positive / negative exponent seen in any variable (>= 0).
  int max_degree() const;
  int max_codegree() const;
  int max_abs_exponent() const { return std::max(max_degree(), max_codegree()); }
  bool is_analytic() const { return max_codegree() == 0; }

  double l1_norm() const;
  // sum |c_k| * ||k||_1, a Lipschitz bound for theta -> phi(e^{i theta}).
  double derivative_bound() const;
  // sum |c_k| * ||k||_1^2, bounds the second derivative along the circle.
  double second_derivative_bound() const;

  // Coefficient conjugation plus exponent negation (the torus conjugate).
  LaurentPoly conj() const;

  // Evaluation at a point of (C \ 0)^nvars; negative powers are inverses.
  cplx eval(std::span<const cplx> z) const;
  cplx eval(cplx z) const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(cplx s);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(LaurentPoly a, cplx s) { return a *= s; }
  friend LaurentPoly operator*(cplx s, LaurentPoly a) { return a *= s; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  // Largest coefficient gap |a_k - b_k| over the union of supports.
  friend double max_coeff_diff(const LaurentPoly& a, const LaurentPoly& b);

  std::string to_string() const;

 private:
  void check_arity(const Exponent& e) const;
  int nvars_;
  std::map<Exponent, cplx> coeffs_;
};

// Polynomial in z and zbar on C^n: terms c * z^alpha * zbar^beta.
class BiPoly {
 public:
  using Key = std::pair<Exponent, Exponent>;

  BiPoly() : nvars_(1) {}
  explicit BiPoly(int nvars);

  static BiPoly constant(cplx c, int nvars);
  static BiPoly term(Exponent alpha, Exponent beta, cplx c = 1.0);

  int nvars() const noexcept { return nvars_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  const std::map<Key, cplx>& terms() const noexcept { return coeffs_; }
  void add_term(const Exponent& alpha, const Exponent& beta, cplx c);

  // max | |alpha| - |beta| | over terms: the total-degree shift it causes.
  int band() const;
  int max_total_degree() const;  // max |alpha| + |beta|
  bool is_analytic() const;

  BiPoly conj() const;
  cplx eval(std::span<const cplx> z) const;
  // Restriction to the torus: z^alpha zbar^beta -> z^(alpha - beta).
  LaurentPoly to_torus() const;

  BiPoly& operator+=(const BiPoly& o);
  BiPoly& operator*=(cplx s);
  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend bool operator==(const BiPoly&, const BiPoly&) = default;

  std::string to_string() const;

 private:
  int nvars_;
  std::map<Key, cplx> coeffs_;
};

// nvars == 0 infers the arity from the variable names used.
LaurentPoly parse_laurent(std::string_view text, int nvars = 0);
BiPoly parse_bipoly(std::string_view text, int nvars = 0);

// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

struct EssRange {
  int nvars = 1;
  int grid_size = 0;
  std::vector<cplx> samples;  // row-major over the grid, last variable fastest
};

// Samples phi at the equispaced points of the torus. Requires
// grid_size >= 4 * max(1, max |exponent|).
EssRange eval_grid(const LaurentPoly& phi, int grid_size);

// 10 * grid spacing * derivative bound: closer than this to the sampled
// curve, the winding number is not certified.
double curve_tolerance(const LaurentPoly& phi, int grid_size);

struct WindingResult {
  bool on_curve = false;
  int winding = 0;
  double min_distance = 0.0;  // min over grid of |phi(x) - lambda|
  double tolerance = 0.0;     // curve tolerance that was applied
  double total_arg = 0.0;     // accumulated argument (radians)
};

WindingResult winding(const LaurentPoly& phi, cplx lambda, int grid_size);
// Same, reusing precomputed one-variable samples.
WindingResult winding(const EssRange& samples, cplx lambda, double tolerance);

class ConvexHull {
 public:
  explicit ConvexHull(std::span<const cplx> points);

  // Hull vertices, counter-clockwise, no repeated or collinear points.
  const std::vector<cplx>& vertices() const noexcept { return vertices_; }
  bool contains(cplx lambda, double tol) const;
  // Euclidean distance from lambda to the hull (0 inside).
  double distance(cplx lambda) const;

 private:
  std::vector<cplx> vertices_;
};

struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
};

// lower = max over the grid of |phi|, upper = l1 norm of the coefficients.
NormBracket sup_norm(const LaurentPoly& phi, int grid_size);

enum class DomainKind { circle, sphere, torus };

struct Domain {
  DomainKind kind = DomainKind::circle;
  int n = 1;
  double gamma = 1.0;  // coordinates are divided by gamma on the torus
};

// A family of functions with sum_j |phi_j|^2 = 1 on the domain.
class SphericalMultifunction {
 public:
  SphericalMultifunction(std::vector<LaurentPoly> components, Domain domain);

  static SphericalMultifunction circle();
  static SphericalMultifunction sphere_coordinates(int n);
  // z_j / gamma on the torus T^n scaled by gamma = sqrt(n).
  static SphericalMultifunction torus_coordinates(int n);

  const std::vector<LaurentPoly>& components() const noexcept { return components_; }
  const Domain& domain() const noexcept { return domain_; }

  // max over grid points of |sum_j |phi_j(x)|^2 - 1|.
  double sphericity_defect(int grid_size) const;

 private:
  std::vector<LaurentPoly> components_;
  Domain domain_;
};

}  // namespace sphiso
