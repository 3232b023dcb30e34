#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sphiso/errors.hpp"
#include "sphiso/linalg.hpp"
#include "sphiso/random.hpp"

using namespace sphiso;

namespace {

CMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  CMatrix m(r, c);
  for (auto& v : m.entries()) v = rng.complex_normal();
  return m;
}

CMatrix random_hermitian(Rng& rng, std::size_t n) {
  const CMatrix m = random_matrix(rng, n, n);
  return 0.5 * (m + m.adjoint());
}

// det(A) by Gaussian elimination with partial pivoting.
cplx det(CMatrix a) {
  const std::size_t n = a.rows();
  cplx d = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (a(p, k) == cplx{}) return 0.0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      d = -d;
    }
    d *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return d;
}

// Real roots of x -> det(xI - A) for hermitian A: scan for sign changes,
// then bisect. Independent of every eigen routine under test.
std::vector<double> charpoly_roots(const CMatrix& a, double radius, double step) {
  const auto p = [&](double x) {
    CMatrix m = CMatrix::identity(a.rows()) * cplx{x} - a;
    return det(m).real();
  };
  std::vector<double> roots;
  double x0 = -radius, f0 = p(x0);
  for (double x1 = x0 + step; x1 <= radius; x1 += step) {
    const double f1 = p(x1);
    if (f0 == 0.0) {
      roots.push_back(x0);
    } else if ((f0 < 0) != (f1 < 0)) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi), fm = p(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

}  // namespace

TEST_CASE("herm_eigs on trivial inputs") {
  const auto id = herm_eigs(CMatrix::identity(3), 1e-12);
  CHECK(id == std::vector<double>{1.0, 1.0, 1.0});

  const CMatrix d{{2.0, 0.0}, {0.0, -1.0}};
  const auto e = herm_eigs(d, 1e-12);
  REQUIRE(e.size() == 2);
  CHECK(e[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(e[1] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("herm_eigs matches characteristic polynomial roots") {
  Rng rng(20240611);
  const CMatrix a = random_hermitian(rng, 8);
  const auto oracle = charpoly_roots(a, 8.0, 1e-3);
  REQUIRE(oracle.size() == 8);
  const auto eig = herm_eigs(a, 1e-12);
  for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(eig[k] - oracle[k]) <= 1e-9);
}

TEST_CASE("herm_eigensystem residuals and trace") {
  Rng rng(7);
  for (std::size_t n : {1u, 2u, 5u, 17u, 40u}) {
    const CMatrix a = random_hermitian(rng, n);
    const auto sys = herm_eigensystem(a, 1e-12);
    const double anorm = op_norm(a);
    double trace = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += a(i, i).real();
    for (std::size_t k = 0; k < n; ++k) {
      sum += sys.values[k];
      if (k) CHECK(sys.values[k - 1] <= sys.values[k]);
      CVector v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = sys.vectors(i, k);
      CVector av = a * std::span<const cplx>(v);
      for (std::size_t i = 0; i < n; ++i) av[i] -= sys.values[k] * v[i];
      CHECK(vec_norm(av) <= 1e-12 * std::max(anorm, 1.0));
    }
    CHECK(std::abs(sum - trace) <= 1e-12 * static_cast<double>(n) * std::max(anorm, 1.0));
  }
}

TEST_CASE("herm_eigs rejects bad input") {
  CHECK_THROWS_AS(herm_eigs(CMatrix(2, 3), 1e-12), PreconditionError);
  const CMatrix nonherm{{1.0, 2.0}, {0.0, 1.0}};
  CHECK_THROWS_AS(herm_eigs(nonherm, 1e-12), PreconditionError);
}

TEST_CASE("banded eigenvalue path agrees with Jacobi") {
  Rng rng(99);
  for (std::size_t band : {0u, 1u, 2u, 5u, 30u}) {
    const std::size_t n = 31;
    CMatrix a = random_hermitian(rng, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if ((i > j ? i - j : j - i) > band) a(i, j) = 0.0;
    const auto jac = herm_eigs(a, 1e-12);
    const auto fast = herm_eigvals_banded(a, 1e-12);
    REQUIRE(fast.size() == n);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(jac[k] - fast[k]) <= 1e-11);
    CHECK(std::abs(herm_max_eig(a, 1e-12) - jac.back()) <= 1e-11);
  }
}

TEST_CASE("tridiagonal Toeplitz eigenvalues follow the cosine formula") {
  const std::size_t n = 200;
  CMatrix t(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) t(i, i + 1) = t(i + 1, i) = 1.0;
  const auto ev = herm_eigvals_banded(t, 1e-12);
  for (std::size_t k = 1; k <= n; ++k) {
    const double exact = 2.0 * std::cos(std::numbers::pi * static_cast<double>(k) / (n + 1));
    CHECK(std::abs(ev[n - k] - exact) <= 1e-12);
  }
}

TEST_CASE("op_norm") {
  CHECK(op_norm(CMatrix(3, 3)) == 0.0);

  // Unitary: normalized DFT matrix.
  const std::size_t n = 4;
  CMatrix f(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      f(j, k) = std::polar(0.5, 2.0 * std::numbers::pi * static_cast<double>(j * k) / n);
  CHECK(std::abs(op_norm(f) - 1.0) <= 1e-12);

  Rng rng(3);
  const CMatrix a = random_matrix(rng, 6, 6);
  const double via_eigs = std::sqrt(herm_eigs(a.adjoint() * a, 1e-10).back());
  CHECK(std::abs(op_norm(a) - via_eigs) <= 1e-10);
  CHECK(std::abs(op_norm(a.adjoint()) - op_norm(a)) <= 1e-12);

  // Rectangular in both orientations.
  const CMatrix r = random_matrix(rng, 7, 3);
  CHECK(std::abs(op_norm(r) - op_norm(r.adjoint())) <= 1e-12);
}

TEST_CASE("op_norm is sub-multiplicative") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = random_matrix(rng, 6, 6), b = random_matrix(rng, 6, 6);
    CHECK(op_norm(a * b) <= op_norm(a) * op_norm(b) + 1e-10);
  }
}

TEST_CASE("solve_lsq") {
  const CVector b{1.0, cplx{2.0, -1.0}, 3.5};
  const auto id = solve_lsq(CMatrix::identity(3), b);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(id.x[i] - b[i]) <= 1e-15);

  // Consistent overdetermined system.
  const CMatrix a{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  const CVector rhs{2.0, 3.0, 5.0};
  const auto s = solve_lsq(a, rhs);
  CHECK(std::abs(s.x[0] - 2.0) <= 1e-12);
  CHECK(std::abs(s.x[1] - 3.0) <= 1e-12);
  CHECK(s.residual <= 1e-12);

  // Planted solution.
  Rng rng(5);
  const CMatrix m = random_matrix(rng, 8, 4);
  CVector plant(4);
  for (auto& v : plant) v = rng.complex_normal();
  const CVector y = m * std::span<const cplx>(plant);
  const auto rec = solve_lsq(m, y);
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(rec.x[i] - plant[i]) <= 1e-10);
}

TEST_CASE("solve_lsq reports rank deficiency") {
  const CMatrix a{{1.0, 2.0}, {2.0, 4.0}, {3.0, 6.0}};
  try {
    solve_lsq(a, CVector{1.0, 2.0, 3.0});
    FAIL("expected RankDeficientError");
  } catch (const RankDeficientError& e) {
    CHECK(e.rank() == 1);
  }
}
