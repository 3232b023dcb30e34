#include <doctest.h>

#include <cmath>

#include "sphiso/errors.hpp"
#include "sphiso/generators.hpp"
#include "sphiso/polydisc.hpp"

using namespace sphiso;

namespace {

ToeplitzElement T(const char* s) { return make_toeplitz(parse_laurent(s)); }
const ToeplitzElement I = ToeplitzElement::identity();
TensorElement el(const ToeplitzElement& a, const ToeplitzElement& b) {
  return TensorElement::elementary(a, b);
}

TensorElement random_tensor(Rng& rng, bool pure, int max_terms = 3) {
  TensorElement x;
  const int k = rng.uniform_int(1, max_terms);
  for (int i = 0; i < k; ++i) {
    if (pure)
      x += el(make_toeplitz(random_symbol(rng, 4)), make_toeplitz(random_symbol(rng, 4)));
    else
      x += el(random_element(rng, 3, 3), random_element(rng, 3, 3));
  }
  return x;
}

}  // namespace

TEST_CASE("gamma") {
  CHECK(gamma(1) == 1.0);
  CHECK(gamma(2) == std::sqrt(2.0));
  CHECK(gamma(4) == 2.0);
  CHECK_THROWS_AS(gamma(0), PreconditionError);
}

TEST_CASE("canonical form") {
  CHECK(el(ToeplitzElement(), I).is_zero());
  const auto x = el(T("z"), I) + el(T("z"), I);
  REQUIRE(x.terms().size() == 1);
  CHECK(truncation_diff(x, el(T("2*z"), I), 8) == 0.0);
  CHECK((el(T("z"), I) - el(T("z"), I)).is_zero());
  // Proportional right factors merge.
  CHECK((el(T("z"), T("2")) - el(T("2*z"), I)).is_zero());
}

TEST_CASE("tensor products") {
  const auto a = tensor_mul(el(T("z"), I), el(I, T("z")));
  CHECK(truncation_diff(a, el(T("z"), T("z"))) == 0.0);

  const auto s = el(T("z"), I);
  CHECK(truncation_diff(tensor_mul(tensor_adjoint(s), s), TensorElement::identity()) == 0.0);

  const auto c = tensor_mul(el(T("z"), T("zbar")), el(T("zbar"), T("z")));
  REQUIRE(c.terms().size() == 1);
  // T_z T_zbar = I - E00 sits in the first factor.
  CHECK(c.terms()[0].first == I - ToeplitzElement::unit(0, 0));
  CHECK(c.terms()[0].second == I);
}

TEST_CASE("tensor_mul matches kron of truncation products") {
  Rng rng(211);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_tensor(rng, false, 2), y = random_tensor(rng, false, 2);
    // Top-left 8 x 8 per factor of the big truncation product.
    const std::size_t big = 24, m = 8;
    CMatrix direct(m * m, m * m);
    for (const auto& [a, b] : x.terms())
      for (const auto& [c, d] : y.terms()) {
        const CMatrix l = (a.truncation(big) * c.truncation(big)).block(0, 0, m, m);
        const CMatrix r = (b.truncation(big) * d.truncation(big)).block(0, 0, m, m);
        direct += kron(l, r);
      }
    CHECK(max_abs_diff(direct, tensor_mul(x, y).truncation(m)) <= 1e-12);
  }
}

TEST_CASE("associativity and adjoint laws") {
  Rng rng(223);
  for (int trial = 0; trial < 8; ++trial) {
    const auto x = random_tensor(rng, false, 2), y = random_tensor(rng, false, 2),
               z = random_tensor(rng, false, 2);
    CHECK(truncation_diff(tensor_mul(tensor_mul(x, y), z), tensor_mul(x, tensor_mul(y, z))) <=
          1e-12);
    CHECK(truncation_diff(tensor_adjoint(tensor_mul(x, y)),
                          tensor_mul(tensor_adjoint(y), tensor_adjoint(x))) <= 1e-12);
  }
}

TEST_CASE("term guard") {
  std::vector<TensorElement::Term> many;
  for (int i = 0; i < 65; ++i) {
    const auto t = make_toeplitz(LaurentPoly::power(i));
    many.emplace_back(t, t);
  }
  const TensorElement x(many);
  std::vector<TensorElement::Term> other;
  for (int i = 0; i < 65; ++i) {
    const auto t = make_toeplitz(LaurentPoly::power(-i));
    other.emplace_back(t, t);
  }
  const TensorElement y(other);
  REQUIRE(x.terms().size() == 65);
  CHECK_THROWS_AS(tensor_mul(x, y), ResourceError);
}

TEST_CASE("scaled isometry") {
  const auto r = scaled_isometry_check(true);
  CHECK(r.defect.is_zero());
  CHECK(r.residual == 0.0);
  CHECK(r.per_factor == 0.0);
  const auto u = scaled_isometry_check(false);
  CHECK(u.residual == doctest::Approx(1.0));
  CHECK(norm_bracket(u.defect).lower == doctest::Approx(1.0));
}

TEST_CASE("gamma equation examples") {
  const auto a = gamma_equation_residual(el(T("z + 2*zbar^2"), T("1 - z^3")));
  CHECK(a.residual.is_zero());
  CHECK(a.bracket.upper == 0.0);
  CHECK(a.verdict == GammaVerdict::toeplitz);

  const auto b = gamma_equation_residual(el(ToeplitzElement::unit(0, 0), I));
  CHECK(b.bracket.lower <= 1.0 + 1e-12);
  CHECK(b.bracket.upper >= 1.0 - 1e-12);
  CHECK(b.bracket.lower >= 0.99);
  CHECK(b.verdict == GammaVerdict::not_toeplitz);
  CHECK(b.scaling_mismatch <= 1e-12);

  const auto c = gamma_equation_residual(TensorElement::identity());
  CHECK(c.residual.is_zero());
  CHECK(c.verdict == GammaVerdict::toeplitz);
}

TEST_CASE("pure Toeplitz sums satisfy the gamma equation exactly") {
  Rng rng(227);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_tensor(rng, true);
    const auto r = gamma_equation_residual(x);
    CHECK(r.residual.is_zero());
    CHECK(r.bracket.upper == 0.0);
    CHECK(r.scaling_mismatch <= 1e-12);
  }
}

TEST_CASE("corrected tensors are rejected and the scalings agree") {
  Rng rng(229);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = el(random_element(rng, 3, 3), I) +
                   el(I, make_toeplitz(random_symbol(rng, 3)) + ToeplitzElement::unit(1, 0));
    const auto r = gamma_equation_residual(x);
    CHECK(r.verdict == GammaVerdict::not_toeplitz);
    CHECK(r.bracket.lower <= r.bracket.upper + 1e-12);
    CHECK(r.bracket.lower > 0.0);
    CHECK(r.scaling_mismatch <= 1e-12);
  }
}
