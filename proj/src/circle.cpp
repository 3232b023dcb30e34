#include "sphiso/circle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sphiso/errors.hpp"

namespace sphiso {

namespace {

// Dense coefficient table of a one-variable symbol over [-neg, pos].
struct Coeffs {
  int pos = 0;
  int neg = 0;
  std::vector<cplx> c;

  explicit Coeffs(const LaurentPoly& p) : pos(p.max_degree()), neg(p.max_codegree()) {
    if (p.nvars() != 1) throw PreconditionError("circle calculus: one-variable symbol required");
    c.assign(static_cast<std::size_t>(pos + neg + 1), cplx{});
    for (const auto& [e, v] : p.terms()) c[static_cast<std::size_t>(e[0] + neg)] = v;
  }
  cplx operator[](long long k) const {
    if (k > pos || k < -neg) return {};
    return c[static_cast<std::size_t>(k + neg)];
  }
};

// Drop float dust below 1e-14 of the block maximum, then trailing zero
// rows and columns.
CMatrix trim(CMatrix f) {
  const double m = f.max_abs();
  if (m == 0.0) return {};
  const double floor = 1e-14 * m;
  for (auto& v : f.entries())
    if (std::abs(v) < floor) v = 0.0;
  std::size_t rows = 0, cols = 0;
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t j = 0; j < f.cols(); ++j)
      if (f(i, j) != cplx{}) {
        rows = std::max(rows, i + 1);
        cols = std::max(cols, j + 1);
      }
  if (rows == f.rows() && cols == f.cols()) return f;
  return f.resized(rows, cols);
}

CMatrix add_padded(const CMatrix& a, const CMatrix& b, cplx sb) {
  const std::size_t r = std::max(a.rows(), b.rows()), c = std::max(a.cols(), b.cols());
  CMatrix out(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out(i, j) = a.at_or_zero(i, j) + sb * b.at_or_zero(i, j);
  return out;
}

}  // namespace

ToeplitzElement::ToeplitzElement(LaurentPoly symbol, CMatrix correction)
    : symbol_(std::move(symbol)), correction_(std::move(correction)) {
  if (symbol_.nvars() != 1)
    throw PreconditionError("ToeplitzElement: symbol must have one variable");
  if (!correction_.all_finite()) throw PreconditionError("ToeplitzElement: non-finite correction");
  normalize();
}

void ToeplitzElement::normalize() { correction_ = trim(std::move(correction_)); }

ToeplitzElement ToeplitzElement::toeplitz(LaurentPoly symbol) { return {std::move(symbol), {}}; }
ToeplitzElement ToeplitzElement::finite(CMatrix correction) {
  return {LaurentPoly(1), std::move(correction)};
}
ToeplitzElement ToeplitzElement::identity() { return toeplitz(LaurentPoly::constant(1.0)); }
ToeplitzElement ToeplitzElement::unit(std::size_t i, std::size_t j, cplx c) {
  CMatrix f(i + 1, j + 1);
  f(i, j) = c;
  return finite(std::move(f));
}

cplx ToeplitzElement::entry(std::size_t i, std::size_t j) const {
  const long long d = static_cast<long long>(i) - static_cast<long long>(j);
  cplx v{};
  if (d <= symbol_.max_degree() && -d <= symbol_.max_codegree())
    v = symbol_.coeff(static_cast<int>(d));
  return v + correction_.at_or_zero(i, j);
}

CMatrix ToeplitzElement::truncation(std::size_t n) const {
  CMatrix t(n, n);
  for (const auto& [e, c] : symbol_.terms()) {
    const long long d = e[0];
    for (std::size_t j = 0; j < n; ++j) {
      const long long i = static_cast<long long>(j) + d;
      if (i >= 0 && i < static_cast<long long>(n)) t(static_cast<std::size_t>(i), j) += c;
    }
  }
  const std::size_t r = std::min(n, correction_.rows()), cc = std::min(n, correction_.cols());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < cc; ++j) t(i, j) += correction_(i, j);
  return t;
}

ToeplitzElement& ToeplitzElement::operator+=(const ToeplitzElement& o) {
  symbol_ += o.symbol_;
  correction_ = trim(add_padded(correction_, o.correction_, 1.0));
  return *this;
}

ToeplitzElement& ToeplitzElement::operator-=(const ToeplitzElement& o) {
  symbol_ -= o.symbol_;
  correction_ = trim(add_padded(correction_, o.correction_, -1.0));
  return *this;
}

ToeplitzElement& ToeplitzElement::operator*=(cplx s) {
  symbol_ *= s;
  correction_ *= s;
  normalize();
  return *this;
}

double max_diff(const ToeplitzElement& a, const ToeplitzElement& b) {
  return std::max(max_coeff_diff(a.symbol(), b.symbol()),
                  max_abs_diff(a.correction(), b.correction()));
}

ToeplitzElement make_toeplitz(const LaurentPoly& phi) { return ToeplitzElement::toeplitz(phi); }

ToeplitzElement mul(const ToeplitzElement& x, const ToeplitzElement& y) {
  const Coeffs a(x.symbol()), b(y.symbol());
  const CMatrix& f = x.correction();
  const CMatrix& g = y.correction();
  const std::size_t p = static_cast<std::size_t>(a.pos), q = static_cast<std::size_t>(b.neg);

  const std::size_t rows = std::max({p, g.rows() + p, f.rows()});
  const std::size_t cols = std::max({q, g.cols(), f.cols() + q});
  CMatrix out(rows, cols);

  // T_phi T_psi - T_{phi psi}: C_ij = -sum_{k <= -1} phi^(i-k) psi^(k-j).
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < q; ++j) {
      cplx s{};
      const long long lo = std::max(static_cast<long long>(i) - a.pos,
                                    static_cast<long long>(j) - b.neg);
      for (long long k = lo; k <= -1; ++k)
        s += a[static_cast<long long>(i) - k] * b[k - static_cast<long long>(j)];
      out(i, j) -= s;
    }

  // T_phi G: column j of G pushed through the band of T_phi.
  for (std::size_t k = 0; k < g.rows(); ++k)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const cplx gkj = g(k, j);
      if (gkj == cplx{}) continue;
      const long long ilo = std::max(0LL, static_cast<long long>(k) - a.neg);
      const long long ihi = static_cast<long long>(k) + a.pos;
      for (long long i = ilo; i <= ihi; ++i)
        out(static_cast<std::size_t>(i), j) += a[i - static_cast<long long>(k)] * gkj;
    }

  // F T_psi.
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t k = 0; k < f.cols(); ++k) {
      const cplx fik = f(i, k);
      if (fik == cplx{}) continue;
      const long long jlo = std::max(0LL, static_cast<long long>(k) - b.pos);
      const long long jhi = static_cast<long long>(k) + b.neg;
      for (long long j = jlo; j <= jhi; ++j)
        out(i, static_cast<std::size_t>(j)) += fik * b[static_cast<long long>(k) - j];
    }

  // F G.
  const std::size_t inner = std::min(f.cols(), g.rows());
  for (std::size_t i = 0; i < f.rows(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      const cplx fik = f(i, k);
      if (fik == cplx{}) continue;
      for (std::size_t j = 0; j < g.cols(); ++j) out(i, j) += fik * g(k, j);
    }

  return {x.symbol() * y.symbol(), std::move(out)};
}

ToeplitzElement adjoint(const ToeplitzElement& x) {
  return {x.symbol().conj(), x.correction().adjoint()};
}

ToeplitzElement phi_map(const ToeplitzElement& x) {
  const CMatrix& f = x.correction();
  if (f.rows() <= 1 || f.cols() <= 1) return ToeplitzElement::toeplitz(x.symbol());
  return {x.symbol(), f.block(1, 1, f.rows() - 1, f.cols() - 1)};
}

ToeplitzElement project_phi(const ToeplitzElement& x) {
  ToeplitzElement cur = x;
  const std::size_t steps = x.active_size();
  for (std::size_t s = 0; s < steps && cur.has_correction(); ++s) cur = phi_map(cur);
  if (cur.has_correction()) throw std::logic_error("project_phi: correction survived iteration");
  return cur;
}

LaurentPoly symbol_map(const ToeplitzElement& x) { return x.symbol(); }

ToeplitzElement semicommutator(const LaurentPoly& phi, const LaurentPoly& psi) {
  ToeplitzElement out = mul(make_toeplitz(phi), make_toeplitz(psi)) - make_toeplitz(phi * psi);
  const auto p = static_cast<std::size_t>(phi.max_degree());
  const auto q = static_cast<std::size_t>(psi.max_codegree());
  if (!out.symbol().is_zero() || out.correction().rows() > p || out.correction().cols() > q)
    throw std::logic_error("semicommutator: result escaped the degree box");
  return out;
}

ToeplitzTest toeplitz_test(const ToeplitzElement& x) {
  ToeplitzTest t;
  t.fixed_point_residual = max_diff(phi_map(x), x);
  t.fixed_point = t.fixed_point_residual == 0.0;
  t.correction_free = !x.has_correction();
  return t;
}

bool is_toeplitz(const ToeplitzElement& x) {
  const ToeplitzTest t = toeplitz_test(x);
  if (t.fixed_point != t.correction_free)
    throw std::logic_error("is_toeplitz: fixed-point and correction criteria disagree");
  return t.fixed_point;
}

AveragingReport verify_averaging_identities(const ToeplitzElement& x, const ToeplitzElement& y) {
  const ToeplitzElement px = project_phi(x), py = project_phi(y);
  AveragingReport r;
  r.phi_x_y = project_phi(mul(px, y));
  r.x_phi_y = project_phi(mul(x, py));
  r.phi_x_phi_y = project_phi(mul(px, py));
  r.max_pairwise_diff = std::max({max_diff(r.phi_x_y, r.x_phi_y),
                                  max_diff(r.phi_x_y, r.phi_x_phi_y),
                                  max_diff(r.x_phi_y, r.phi_x_phi_y)});
  r.choi_effros_diff =
      max_diff(r.phi_x_phi_y, make_toeplitz(symbol_map(x) * symbol_map(y)));
  return r;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

CMatrix block_truncation(const SymbolMatrix& symbols, std::size_t n) {
  const std::size_t k = symbols.k;
  CMatrix t(k * n, k * n);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (const auto& [e, c] : symbols(a, b).terms()) {
        const long long d = e[0];
        for (std::size_t j = 0; j < n; ++j) {
          const long long i = static_cast<long long>(j) + d;
          if (i >= 0 && i < static_cast<long long>(n))
            t(static_cast<std::size_t>(i) * k + a, j * k + b) += c;
        }
      }
  return t;
}

CrossSectionReport cross_section_isometry(const SymbolMatrix& symbols, std::size_t max_trunc,
                                          double tolerance, int grid_size) {
  const std::size_t k = symbols.k;
  if (k < 1 || k > 3 || symbols.entries.size() != k * k)
    throw PreconditionError("cross_section_isometry: level must be 1, 2 or 3");
  if (max_trunc < 1) throw PreconditionError("cross_section_isometry: max_trunc must be >= 1");

  CrossSectionReport r;
  int max_exp = 1;
  for (const auto& p : symbols.entries) {
    if (p.nvars() != 1) throw PreconditionError("cross_section_isometry: one-variable symbols");
    max_exp = std::max(max_exp, p.max_abs_exponent());
  }
  const int grid = std::max(grid_size, 4 * max_exp);

  std::vector<EssRange> samples;
  for (const auto& p : symbols.entries) samples.push_back(eval_grid(p, grid));
  for (std::size_t g = 0; g < static_cast<std::size_t>(grid); ++g) {
    double norm = 0.0;
    if (k == 1) {
      norm = std::abs(samples[0].samples[g]);
    } else {
      CMatrix m(k, k);
      for (std::size_t e = 0; e < k * k; ++e) m(e / k, e % k) = samples[e].samples[g];
      norm = std::sqrt(std::max(0.0, herm_eigs(m.adjoint() * m, 1e-12).back()));
    }
    r.grid_sup = std::max(r.grid_sup, norm);
  }
  double frob2 = 0.0;
  for (const auto& p : symbols.entries) frob2 += p.l1_norm() * p.l1_norm();
  r.l1_upper = k == 1 ? symbols.entries[0].l1_norm() : std::sqrt(frob2);

  std::size_t n = std::min<std::size_t>(64, max_trunc);
  for (;;) {
    r.truncations.push_back(n);
    r.lower_bounds.push_back(op_norm(block_truncation(symbols, n)));
    if (n >= max_trunc) break;
    n = std::min(2 * n, max_trunc);
  }
  for (std::size_t i = 1; i < r.lower_bounds.size(); ++i)
    if (r.lower_bounds[i] < r.lower_bounds[i - 1] - 1e-12) r.monotone = false;
  r.gap = std::abs(r.lower_bounds.back() - r.grid_sup);
  if (!r.monotone || r.lower_bounds.back() > r.l1_upper + 1e-12)
    r.verdict = Verdict::fail;
  else
    r.verdict = r.gap <= tolerance ? Verdict::pass : Verdict::inconclusive;
  return r;
}

CrossSectionReport cross_section_isometry(const LaurentPoly& phi, std::size_t max_trunc,
                                          double tolerance, int grid_size) {
  return cross_section_isometry(SymbolMatrix{1, {phi}}, max_trunc, tolerance, grid_size);
}

std::string to_string(CommutantClass c) {
  switch (c) {
    case CommutantClass::not_toeplitz: return "NOT_TOEPLITZ";
    case CommutantClass::toeplitz_not_analytic: return "TOEPLITZ_NOT_ANALYTIC";
    case CommutantClass::analytic_toeplitz: return "ANALYTIC_TOEPLITZ";
  }
  return "?";
}

CommutantReport commutant_character(const ToeplitzElement& x, std::size_t truncation,
                                    int grid_size) {
  CommutantReport r;
  r.x_toeplitz = is_toeplitz(x);
  r.xstar_x_toeplitz = is_toeplitz(mul(adjoint(x), x));
  const ToeplitzElement shift = make_toeplitz(LaurentPoly::power(1));
  const ToeplitzElement left = mul(x, shift), right = mul(shift, x);
  r.commutator_residual = max_diff(left, right);
  const double scale = std::max(1.0, x.symbol().l1_norm() + x.correction().max_abs());
  r.commutes_with_shift = r.commutator_residual <= 1e-12 * scale;

  const bool by_3f = r.x_toeplitz && r.xstar_x_toeplitz;
  r.criteria_agree = by_3f == r.commutes_with_shift;
  if (!r.x_toeplitz)
    r.classification = CommutantClass::not_toeplitz;
  else if (by_3f)
    r.classification = CommutantClass::analytic_toeplitz;
  else
    r.classification = CommutantClass::toeplitz_not_analytic;

  if (r.classification == CommutantClass::analytic_toeplitz) {
    CommutantLift lift;
    lift.multiplier = x.symbol();
    lift.sup_bracket = sup_norm(lift.multiplier, grid_size);
    lift.truncation_lower = op_norm(x.truncation(truncation));

    // Laurent (bilateral) matrix of the multiplier on indices [-w, w).
    const std::size_t w = 32;
    const auto laurent = [&](const LaurentPoly& p) {
      CMatrix m(2 * w, 2 * w);
      for (const auto& [e, c] : p.terms())
        for (std::size_t j = 0; j < 2 * w; ++j) {
          const long long i = static_cast<long long>(j) + e[0];
          if (i >= 0 && i < static_cast<long long>(2 * w)) m(static_cast<std::size_t>(i), j) = c;
        }
      return m;
    };
    const CMatrix big = laurent(lift.multiplier);
    const CMatrix compressed = big.block(w, w, w, w);
    lift.compression_residual = max_abs_diff(compressed, x.truncation(w));
    const CMatrix mz = laurent(LaurentPoly::power(1));
    const CMatrix comm = big * mz - mz * big;
    // Edge rows/cols of the window see the cut; compare on the interior.
    const std::size_t pad = static_cast<std::size_t>(lift.multiplier.max_abs_exponent()) + 1;
    lift.extension_commutator =
        comm.block(pad, pad, 2 * w - 2 * pad, 2 * w - 2 * pad).max_abs();
    r.lift = lift;
  }
  return r;
}

std::size_t numerical_rank(const CMatrix& f) {
  if (f.empty()) return 0;
  const CMatrix g = f.rows() >= f.cols() ? f.adjoint() * f : f * f.adjoint();
  const auto ev = herm_eigs(g, 1e-10 * std::max(1.0, g.max_abs()));
  const double top = ev.back();
  if (top <= 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(ev.begin(), ev.end(), [&](double v) { return v > 1e-20 * top; }));
}

ExactSequenceReport exact_sequence_report(const ToeplitzElement& x, const ToeplitzElement& y,
                                          std::size_t max_trunc) {
  ExactSequenceReport r;
  r.symbol_product = symbol_map(x) * symbol_map(y);
  r.symbol_of_product = symbol_map(mul(x, y));
  r.multiplicativity_residual = max_coeff_diff(r.symbol_product, r.symbol_of_product);
  r.star_residual = max_coeff_diff(symbol_map(adjoint(x)), symbol_map(x).conj());
  const ToeplitzElement kernel_part = x - make_toeplitz(symbol_map(x));
  r.kernel_member = kernel_part.symbol().is_zero();
  r.correction_rank = numerical_rank(kernel_part.correction());
  r.cross_section = cross_section_isometry(symbol_map(x), max_trunc, 1e-2);
  return r;
}

}  // namespace sphiso
