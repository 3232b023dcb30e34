#include "sphiso/polydisc.hpp"

#include <algorithm>
#include <cmath>

#include "sphiso/errors.hpp"

namespace sphiso {

namespace {

bool zero_factor(const ToeplitzElement& x) { return x.symbol().is_zero() && !x.has_correction(); }

double upper(const ToeplitzElement& x) { return x.symbol().l1_norm() + x.correction().frobenius(); }

// First nonzero symbol coefficient, else first nonzero correction entry.
cplx leading(const ToeplitzElement& x) {
  if (!x.symbol().is_zero()) return x.symbol().terms().begin()->second;
  for (cplx v : x.correction().entries())
    if (v != cplx{}) return v;
  return 1.0;
}

void check_size(std::size_t terms) {
  if (terms > kMaxTensorTerms)
    throw ResourceError("tensor term count " + std::to_string(terms) + " exceeds " +
                        std::to_string(kMaxTensorTerms));
}

}  // namespace

TensorElement::TensorElement(std::vector<Term> terms) : terms_(std::move(terms)) {
  check_size(terms_.size());
  canonicalize();
}

TensorElement TensorElement::elementary(ToeplitzElement a, ToeplitzElement b) {
  return TensorElement({{std::move(a), std::move(b)}});
}

TensorElement TensorElement::identity() {
  return elementary(ToeplitzElement::identity(), ToeplitzElement::identity());
}

void TensorElement::canonicalize() {
  // Scale each right factor to a unit leading coefficient so proportional
  // terms share it, merge on the right factor, then on the left.
  std::vector<Term> merged;
  for (auto& t : terms_) {
    if (zero_factor(t.first) || zero_factor(t.second)) continue;
    const cplx lead = leading(t.second);
    t.second *= 1.0 / lead;
    t.first *= lead;
    auto it = std::find_if(merged.begin(), merged.end(),
                           [&](const Term& m) { return m.second == t.second; });
    if (it == merged.end()) merged.push_back(std::move(t));
    else it->first += t.first;
  }
  std::vector<Term> out;
  for (auto& t : merged) {
    if (zero_factor(t.first)) continue;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Term& m) { return m.first == t.first; });
    if (it == out.end()) out.push_back(std::move(t));
    else it->second += t.second;
  }
  std::erase_if(out, [](const Term& t) { return zero_factor(t.first) || zero_factor(t.second); });
  terms_ = std::move(out);
}

CMatrix TensorElement::truncation(std::size_t n) const {
  CMatrix out(n * n, n * n);
  for (const auto& [a, b] : terms_) out += kron(a.truncation(n), b.truncation(n));
  return out;
}

CVector TensorElement::apply_truncated(std::size_t n, const CVector& v, bool adj) const {
  const CMatrix vm(n, n, v);
  CMatrix acc(n, n);
  for (const auto& [a, b] : terms_) {
    CMatrix at = a.truncation(n), bt = b.truncation(n);
    if (adj) {
      at = at.adjoint();
      bt = bt.adjoint();
    }
    acc += at * vm * bt.transpose();
  }
  return {acc.entries().begin(), acc.entries().end()};
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
  check_size(terms_.size() + o.terms_.size());
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  canonicalize();
  return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o) {
  return *this += cplx{-1.0} * o;
}

TensorElement& TensorElement::operator*=(cplx s) {
  for (auto& t : terms_) t.first *= s;
  canonicalize();
  return *this;
}

double gamma(int n) {
  if (n < 1) throw PreconditionError("gamma: n must be >= 1");
  return std::sqrt(static_cast<double>(n));
}

TensorElement tensor_mul(const TensorElement& x, const TensorElement& y) {
  check_size(x.terms().size() * y.terms().size());
  std::vector<TensorElement::Term> out;
  for (const auto& [a, b] : x.terms())
    for (const auto& [c, d] : y.terms()) out.emplace_back(mul(a, c), mul(b, d));
  return TensorElement(std::move(out));
}

TensorElement tensor_adjoint(const TensorElement& x) {
  std::vector<TensorElement::Term> out;
  for (const auto& [a, b] : x.terms()) out.emplace_back(adjoint(a), adjoint(b));
  return TensorElement(std::move(out));
}

TensorElement coordinate_shift(int j) {
  const auto tz = make_toeplitz(LaurentPoly::power(1));
  if (j == 0) return TensorElement::elementary(tz, ToeplitzElement::identity());
  if (j == 1) return TensorElement::elementary(ToeplitzElement::identity(), tz);
  throw PreconditionError("coordinate_shift: the bidisc has coordinates 0 and 1");
}

double truncation_diff(const TensorElement& x, const TensorElement& y, std::size_t n) {
  return max_abs_diff(x.truncation(n), y.truncation(n));
}

NormBracket norm_bracket(const TensorElement& x, std::size_t n) {
  NormBracket b;
  for (const auto& [a, c] : x.terms()) b.upper += upper(a) * upper(c);
  if (x.is_zero()) return b;
  // Any unit vector gives |R v| <= |R|; power iteration on R*R pushes it up.
  CVector v(n * n);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (1.0 + static_cast<double>(i));
  for (int it = 0; it < 60; ++it) {
    const double nv = vec_norm(v);
    if (nv == 0.0) break;
    for (auto& e : v) e /= nv;
    const CVector rv = x.apply_truncated(n, v, false);
    b.lower = std::max(b.lower, vec_norm(rv));
    v = x.apply_truncated(n, rv, true);
  }
  return b;
}

ScaledIsometryReport scaled_isometry_check(bool scaled) {
  const double g2 = 2.0;  // gamma^2, exactly
  TensorElement sum;
  for (int j = 0; j < 2; ++j) {
    const auto t = coordinate_shift(j);
    sum += tensor_mul(tensor_adjoint(t), t);
  }
  ScaledIsometryReport rep;
  rep.defect = (scaled ? cplx{1.0 / g2} : cplx{1.0}) * sum - TensorElement::identity();
  rep.residual = norm_bracket(rep.defect).upper;
  const auto tz = make_toeplitz(LaurentPoly::power(1));
  rep.per_factor = max_diff(mul(adjoint(tz), tz), ToeplitzElement::identity());
  return rep;
}

std::string to_string(GammaVerdict v) {
  return v == GammaVerdict::toeplitz ? "TOEPLITZ" : "NOT_TOEPLITZ";
}

GammaResidual gamma_equation_residual(const TensorElement& x, std::size_t n) {
  // T_z* A T_z = phi_map(A) per factor, and gamma^2 = 2 splits as one copy
  // of X per coordinate, so pure Toeplitz factors cancel exactly.
  std::vector<TensorElement::Term> terms;
  for (const auto& [a, b] : x.terms()) {
    terms.emplace_back(phi_map(a) - a, b);
    terms.emplace_back(a, phi_map(b) - b);
  }
  GammaResidual res;
  res.residual = TensorElement(std::move(terms));
  res.bracket = norm_bracket(res.residual, n);
  res.verdict = res.bracket.upper <= 1e-10 ? GammaVerdict::toeplitz : GammaVerdict::not_toeplitz;

  // Independent path through tensor_mul with the scaled coordinates.
  const double g = gamma(2);
  TensorElement psi;
  for (int j = 0; j < 2; ++j) {
    const auto t = cplx{1.0 / g} * coordinate_shift(j);
    psi += tensor_mul(tensor_mul(tensor_adjoint(t), x), t);
  }
  const TensorElement scaled = cplx{2.0} * (psi - x);
  res.scaling_mismatch = truncation_diff(scaled, res.residual, std::min<std::size_t>(n, 16));
  return res;
}

}  // namespace sphiso
