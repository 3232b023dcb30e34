#pragma once

// Exact calculus for the C*-algebra generated by Toeplitz operators with
// Laurent polynomial symbols on the Hardy space of the circle.
//
// Convention: H^2 has orthonormal basis e_k = z^k (k >= 0) and
//   (T_phi)_{ij} = phi^(i - j).
// Every element is stored as T_symbol + F with F a finite matrix anchored
// at (0, 0). The decomposition is unique: far-diagonal entries determine
// the symbol, so the symbol map and the projection onto Toeplitz
// operators are read off without truncation error.

#include <optional>
#include <string>
#include <vector>

#include "sphiso/linalg.hpp"
#include "sphiso/symbols.hpp"

namespace sphiso {

class ToeplitzElement {
 public:
  ToeplitzElement() = default;
  ToeplitzElement(LaurentPoly symbol, CMatrix correction);

  static ToeplitzElement toeplitz(LaurentPoly symbol);
  static ToeplitzElement finite(CMatrix correction);
  static ToeplitzElement identity();
  // Matrix unit E_ij (finite rank one).
  static ToeplitzElement unit(std::size_t i, std::size_t j, cplx c = 1.0);

  const LaurentPoly& symbol() const noexcept { return symbol_; }
  const CMatrix& correction() const noexcept { return correction_; }
  bool has_correction() const noexcept { return !correction_.empty(); }
  std::size_t active_size() const noexcept {
    return std::max(correction_.rows(), correction_.cols());
  }
  // Largest |exponent| of the symbol.
  int band() const { return symbol_.max_abs_exponent(); }

  cplx entry(std::size_t i, std::size_t j) const;
  // P_N X P_N as an N x N matrix.
  CMatrix truncation(std::size_t n) const;

  ToeplitzElement& operator+=(const ToeplitzElement& o);
  ToeplitzElement& operator-=(const ToeplitzElement& o);
  ToeplitzElement& operator*=(cplx s);
  friend ToeplitzElement operator+(ToeplitzElement a, const ToeplitzElement& b) { return a += b; }
  friend ToeplitzElement operator-(ToeplitzElement a, const ToeplitzElement& b) { return a -= b; }
  friend ToeplitzElement operator*(ToeplitzElement a, cplx s) { return a *= s; }
  friend ToeplitzElement operator*(cplx s, ToeplitzElement a) { return a *= s; }
  friend bool operator==(const ToeplitzElement&, const ToeplitzElement&) = default;

 private:
  void normalize();
  LaurentPoly symbol_{1};
  CMatrix correction_;
};

// Largest coefficient / entry gap between two elements.
double max_diff(const ToeplitzElement& a, const ToeplitzElement& b);

ToeplitzElement make_toeplitz(const LaurentPoly& phi);
ToeplitzElement mul(const ToeplitzElement& x, const ToeplitzElement& y);
ToeplitzElement adjoint(const ToeplitzElement& x);

// X -> T_z* X T_z.
ToeplitzElement phi_map(const ToeplitzElement& x);
// Idempotent projection onto Toeplitz operators; iterates phi_map until
// the correction is gone.
ToeplitzElement project_phi(const ToeplitzElement& x);
LaurentPoly symbol_map(const ToeplitzElement& x);

// T_phi T_psi - T_{phi psi}. The correction lives in the box
// [0, deg+(phi)) x [0, deg-(psi)).
ToeplitzElement semicommutator(const LaurentPoly& phi, const LaurentPoly& psi);

struct ToeplitzTest {
  bool fixed_point = false;    // phi_map(X) == X
  bool correction_free = false;
  double fixed_point_residual = 0.0;
};
ToeplitzTest toeplitz_test(const ToeplitzElement& x);
// Brown-Halmos: true iff X is a fixed point of phi_map. Throws
// std::logic_error if the fixed-point and correction criteria disagree.
bool is_toeplitz(const ToeplitzElement& x);

struct AveragingReport {
  ToeplitzElement phi_x_y;        // Phi(Phi(X) Y)
  ToeplitzElement x_phi_y;        // Phi(X Phi(Y))
  ToeplitzElement phi_x_phi_y;    // Phi(Phi(X) Phi(Y)), the Choi-Effros product
  double max_pairwise_diff = 0.0;
  double choi_effros_diff = 0.0;  // vs T_{pi(X) pi(Y)}
};
AveragingReport verify_averaging_identities(const ToeplitzElement& x, const ToeplitzElement& y);

// k x k matrix of one-variable symbols, row-major.
struct SymbolMatrix {
  std::size_t k = 1;
  std::vector<LaurentPoly> entries;
  const LaurentPoly& operator()(std::size_t a, std::size_t b) const { return entries[a * k + b]; }
};

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct CrossSectionReport {
  std::vector<std::size_t> truncations;
  std::vector<double> lower_bounds;  // ||P_N [T_ab] P_N|| for each N
  double grid_sup = 0.0;             // max over grid of ||[phi_ab(x)]||
  double l1_upper = 0.0;
  double gap = 0.0;                  // |lower(max_trunc) - grid_sup|
  bool monotone = true;
  Verdict verdict = Verdict::inconclusive;
};

// Block Toeplitz compression norms for N = 64, 128, ..., max_trunc against
// the sup of the pointwise matrix norm.
CrossSectionReport cross_section_isometry(const SymbolMatrix& symbols, std::size_t max_trunc,
                                          double tolerance, int grid_size = 4096);
CrossSectionReport cross_section_isometry(const LaurentPoly& phi, std::size_t max_trunc,
                                          double tolerance, int grid_size = 4096);

// Block truncation of [T_{phi_ab}] with interleaved indexing i*k + a.
CMatrix block_truncation(const SymbolMatrix& symbols, std::size_t n);

enum class CommutantClass { not_toeplitz, toeplitz_not_analytic, analytic_toeplitz };
std::string to_string(CommutantClass c);

struct CommutantLift {
  LaurentPoly multiplier;        // acts on L^2 of the circle as a multiplication
  NormBracket sup_bracket;       // grid sup and l1 bound of the multiplier
  double truncation_lower = 0.0; // ||P_N X P_N|| at the requested truncation
  double compression_residual = 0.0;  // |P M P - X| on a window
  double extension_commutator = 0.0;  // |[M, M_z]| on a window
};

struct CommutantReport {
  CommutantClass classification = CommutantClass::not_toeplitz;
  bool x_toeplitz = false;
  bool xstar_x_toeplitz = false;
  bool commutes_with_shift = false;
  bool criteria_agree = false;
  double commutator_residual = 0.0;  // max |X T_z - T_z X|
  std::optional<CommutantLift> lift;
};

CommutantReport commutant_character(const ToeplitzElement& x, std::size_t truncation = 256,
                                    int grid_size = 4096);

struct ExactSequenceReport {
  LaurentPoly symbol_product;     // pi(X) pi(Y)
  LaurentPoly symbol_of_product;  // pi(XY)
  double multiplicativity_residual = 0.0;
  double star_residual = 0.0;     // |pi(X*) - conj(pi(X))|
  bool kernel_member = false;     // X - T_{pi(X)} has zero symbol
  std::size_t correction_rank = 0;
  CrossSectionReport cross_section;
};

ExactSequenceReport exact_sequence_report(const ToeplitzElement& x, const ToeplitzElement& y,
                                          std::size_t max_trunc = 128);

// Numerical rank of a matrix: eigenvalues of F*F above 1e-20 of the largest.
std::size_t numerical_rank(const CMatrix& f);

}  // namespace sphiso
