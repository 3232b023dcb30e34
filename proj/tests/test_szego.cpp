#include <doctest.h>

#include <cmath>

#include "sphiso/errors.hpp"
#include "sphiso/random.hpp"
#include "sphiso/szego.hpp"

using namespace sphiso;

namespace {

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

// Uniform points on the sphere: normalized complex Gaussians.
McEstimate monte_carlo_moment(const Exponent& alpha, int samples, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = alpha.size();
  double sum = 0.0, sum2 = 0.0;
  std::vector<cplx> z(n);
  for (int s = 0; s < samples; ++s) {
    double r2 = 0.0;
    for (auto& v : z) {
      v = rng.complex_normal();
      r2 += std::norm(v);
    }
    double f = 1.0;
    for (std::size_t j = 0; j < n; ++j) f *= std::pow(std::norm(z[j]) / r2, alpha[j]);
    sum += f;
    sum2 += f * f;
  }
  const double mean = sum / samples;
  const double var = sum2 / samples - mean * mean;
  return {mean, std::sqrt(var / samples)};
}

double moment(int n, const Exponent& a) { return sphere_moment(n, a).convert_to<double>(); }

}  // namespace

TEST_CASE("sphere_moment exact values") {
  CHECK(sphere_moment(1, {0}) == 1);
  CHECK(sphere_moment(4, {0, 0, 0, 0}) == 1);
  CHECK(sphere_moment(2, {1, 0}) == Rational(1, 2));
  CHECK(sphere_moment(3, {2, 1, 0}) == Rational(1, 30));
  CHECK(sphere_moment(1, {7}) == 1);
  CHECK_THROWS_AS(sphere_moment(2, {-1, 0}), PreconditionError);
  CHECK_THROWS_AS(sphere_moment(2, {31, 30}), PreconditionError);
  CHECK_NOTHROW(sphere_moment(2, {30, 30}));
}

TEST_CASE("sphere_moment against Monte Carlo") {
  const auto a = monte_carlo_moment({1, 0}, 100000, 11);
  CHECK(std::abs(a.mean - 0.5) <= 3 * a.stderr_);
  const auto b = monte_carlo_moment({2, 1, 0}, 100000, 12);
  CHECK(std::abs(b.mean - 1.0 / 30) <= 3 * b.stderr_);

  Rng rng(13);
  int agree = 0;
  for (int t = 0; t < 10; ++t) {
    const int n = rng.uniform_int(2, 3);
    Exponent alpha(static_cast<std::size_t>(n));
    for (auto& v : alpha) v = rng.uniform_int(0, 3);
    const auto est = monte_carlo_moment(alpha, 100000, 100 + static_cast<std::uint64_t>(t));
    if (std::abs(est.mean - moment(n, alpha)) <= 3 * est.stderr_) ++agree;
  }
  // 3 sigma: all ten should agree for this seed.
  CHECK(agree == 10);
}

TEST_CASE("moment identities") {
  // sum_j m(alpha + e_j) = m(alpha): |z|^2 = 1 on the sphere.
  for (int n = 1; n <= 4; ++n)
    for (int k = 0; k <= 5; ++k)
      for (const auto& a : shell(n, k)) {
        Rational s = 0;
        for (int j = 0; j < n; ++j) {
          Exponent b = a;
          ++b[static_cast<std::size_t>(j)];
          s += sphere_moment(n, b);
        }
        CHECK(s == sphere_moment(n, a));
      }
}

TEST_CASE("monomial basis") {
  const MonomialBasis b(3, 4);
  CHECK(b.size() == 35);  // C(7, 3)
  CHECK(shell(2, 6).size() == 7);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.find(b[i]) == i);
  CHECK(b.find({5, 0, 0}) == b.size());
}

TEST_CASE("szego_tuple weights") {
  const auto t1 = szego_tuple(1, 8);
  for (int k = 0; k < 8; ++k) CHECK(t1.shifts[0].entry({k + 1}, {k}) == cplx{1.0});
  CHECK(t1.shifts[0].entry({9}, {8}) == cplx{});

  const auto t2 = szego_tuple(2, 10);
  CHECK(std::abs(t2.shifts[0].entry({1, 0}, {0, 0}) - std::sqrt(0.5)) <= 1e-16);
  // w_j(alpha)^2 = (alpha_j + 1) / (n + |alpha|).
  for (const auto& a : t2.shifts[1].basis->indices()) {
    if (total_degree(a) >= 10) continue;
    Exponent b = a;
    ++b[1];
    const double w = std::real(t2.shifts[1].entry(b, a));
    CHECK(std::abs(w * w - (a[1] + 1.0) / (2.0 + total_degree(a))) <= 1e-15);
  }
}

TEST_CASE("spherical isometry identity and defect") {
  for (int n : {2, 3}) {
    const auto t = szego_tuple(n, 10);
    const auto rep = defect_report(t);
    CHECK(rep.interior_defect <= 1e-14);
    CHECK(rep.top_shell_defect == 0.0);
    CHECK(rep.off_diagonal == 0.0);
    CHECK(commutator_defect(t) <= 1e-15);
  }
  const auto r1 = defect_report(szego_tuple(1, 8));
  CHECK(r1.top_shell_size == 1);
  CHECK(r1.value() == 0.0);
  const auto r2 = defect_report(szego_tuple(2, 6));
  CHECK(r2.top_shell_size == 7);
  CHECK(r2.value() <= 1e-14);
}

TEST_CASE("toeplitz_graded examples") {
  const int n = 2, d = 10;
  const auto one = toeplitz_graded(BiPoly::constant(1.0, n), n, d);
  CHECK(max_abs_diff(one.matrix, CMatrix::identity(one.basis->size())) <= 1e-15);

  const auto t = szego_tuple(n, d);
  const auto z1 = toeplitz_graded(parse_bipoly("z1", n), n, d);
  CHECK(max_abs_diff(z1.matrix, t.shifts[0].matrix) <= 1e-15);
  const auto z2 = toeplitz_graded(parse_bipoly("z2", n), n, d);
  CHECK(max_abs_diff(z2.matrix, t.shifts[1].matrix) <= 1e-15);
  CHECK(z1.safe_degree == d - 1);

  const auto zz = toeplitz_graded(parse_bipoly("z1*zbar1", n), n, d);
  CHECK(std::abs(zz.entry({0, 0}, {0, 0}) - 0.5) <= 1e-16);
  // Adjoint symbol gives the adjoint shift.
  const auto zb = toeplitz_graded(parse_bipoly("zbar1", n), n, d);
  CHECK(max_abs_diff(zb.matrix, t.shifts[0].matrix.adjoint()) <= 1e-15);

  CHECK_THROWS_AS(toeplitz_graded(parse_bipoly("z1^6", n), n, d - 1), PreconditionError);
  CHECK_THROWS_AS(toeplitz_graded(parse_bipoly("z1", 3), n, d), PreconditionError);
}

TEST_CASE("fixed_point_residual") {
  const int n = 2, d = 10;
  const auto t = szego_tuple(n, d);
  const auto id = fixed_point_residual(graded_identity(n, d), t);
  CHECK(id.interior <= 1e-15);
  CHECK(id.boundary >= 0.99);

  const auto x = toeplitz_graded(parse_bipoly("z1*zbar2 + zbar1*z2", n), n, d);
  CHECK(fixed_point_residual(x, t).interior <= 1e-10);

  auto planted = x;
  planted.set({0, 0}, {0, 0}, planted.entry({0, 0}, {0, 0}) + 1.0);
  CHECK(fixed_point_residual(planted, t).interior >= 0.4);

  GradedOperator e00(n, d, 0, d);
  e00.set({0, 0}, {0, 0}, 1.0);
  CHECK(fixed_point_residual(e00, t).interior >= 0.4);
  CHECK_THROWS_AS(fixed_point_residual(e00, szego_tuple(n, 8)), PreconditionError);
}

TEST_CASE("random polynomial symbols are fixed points") {
  Rng rng(17);
  for (int n : {2, 3}) {
    const int d = 10;
    const auto t = szego_tuple(n, d);
    for (int trial = 0; trial < 10; ++trial) {
      BiPoly phi(n);
      const int terms = rng.uniform_int(1, 4);
      for (int k = 0; k < terms; ++k) {
        Exponent a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
        for (auto& v : a) v = rng.uniform_int(0, 1);
        for (auto& v : b) v = rng.uniform_int(0, 1);
        phi.add_term(a, b, rng.complex_normal());
      }
      if (phi.is_zero() || 2 * phi.band() > d) continue;
      const auto x = toeplitz_graded(phi, n, d);
      CHECK(fixed_point_residual(x, t).interior <= 1e-10);
      // Self-adjoint symbols give hermitian matrices.
      const auto h = toeplitz_graded(phi + phi.conj(), n, d);
      CHECK(hermitian_defect(h.matrix) <= 1e-14);
      // Band-limited in total degree.
      for (const auto& [key, v] : x.entries())
        CHECK(std::abs(total_degree(key.first) - total_degree(key.second)) <= phi.band());
    }
  }
}

TEST_CASE("normal extension consistency") {
  const std::vector<BiPoly> symbols{parse_bipoly("z1", 2), parse_bipoly("z1*zbar2 + 2*z2", 2),
                                    parse_bipoly("zbar1*z1 - z2^2", 2)};
  const auto rep = normal_extension_check(2, 4, symbols);
  CHECK(rep.dimension > 0);
  CHECK(rep.adjoint_defect == 0.0);
  CHECK(rep.sphere_defect == 0.0);
  CHECK(rep.shift_compression <= 1e-15);
  CHECK(rep.symbol_compression <= 1e-15);
}
