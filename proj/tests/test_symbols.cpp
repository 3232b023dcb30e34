#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sphiso/errors.hpp"
#include "sphiso/random.hpp"
#include "sphiso/symbols.hpp"

using namespace sphiso;

namespace {

LaurentPoly random_poly(Rng& rng, int max_abs_exp, int terms, bool integer_coeffs) {
  LaurentPoly p(1);
  for (int t = 0; t < terms; ++t) {
    const int k = rng.uniform_int(-max_abs_exp, max_abs_exp);
    const cplx c = integer_coeffs
                       ? cplx{static_cast<double>(rng.uniform_int(-5, 5)),
                              static_cast<double>(rng.uniform_int(-5, 5))}
                       : rng.complex_normal();
    p.add_term({k}, c);
  }
  return p;
}

// Carathéodory in the plane: lambda is in conv(P) iff it lies in a
// triangle (possibly degenerate) spanned by three points of P.
bool in_hull_by_triangles(const std::vector<cplx>& p, cplx q) {
  const auto cross = [](cplx o, cplx a, cplx b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
  };
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      for (std::size_t k = j + 1; k < p.size(); ++k) {
        const double d1 = cross(p[i], p[j], q), d2 = cross(p[j], p[k], q),
                     d3 = cross(p[k], p[i], q);
        const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
        const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
        if (!(neg && pos)) return true;
      }
  return false;
}

}  // namespace

TEST_CASE("eval_grid") {
  const auto r = eval_grid(parse_laurent("z"), 4);
  REQUIRE(r.samples.size() == 4);
  const cplx expected[] = {1.0, cplx{0, 1}, -1.0, cplx{0, -1}};
  for (int k = 0; k < 4; ++k) CHECK(std::abs(r.samples[k] - expected[k]) <= 1e-15);

  const auto c = eval_grid(LaurentPoly::constant(cplx{2, -1}), 16);
  for (const auto& v : c.samples) CHECK(v == cplx{2, -1});

  const auto cosine = eval_grid(parse_laurent("z + zbar"), 360);
  double lo = 10, hi = -10;
  for (const auto& v : cosine.samples) {
    CHECK(std::abs(v.imag()) <= 1e-14);
    CHECK(std::abs(v.real()) <= 2.0 + 1e-14);
    lo = std::min(lo, v.real());
    hi = std::max(hi, v.real());
  }
  CHECK(std::abs(hi - 2.0) <= 1e-3);
  CHECK(std::abs(lo + 2.0) <= 1e-3);

  CHECK_THROWS_AS(eval_grid(parse_laurent("z^3"), 11), PreconditionError);

  // Two variables: grid^2 samples, z1 varies slowest.
  const auto two = eval_grid(parse_laurent("z1*zbar2"), 8);
  CHECK(two.samples.size() == 64);
  CHECK(std::abs(two.samples[1] - std::polar(1.0, -2 * std::numbers::pi / 8)) <= 1e-15);
}

TEST_CASE("winding numbers") {
  CHECK(winding(parse_laurent("z"), 0.0, 512).winding == 1);
  CHECK(winding(parse_laurent("z"), 2.0, 512).winding == 0);
  CHECK(winding(parse_laurent("z^2"), 0.0, 512).winding == 2);
  CHECK(winding(parse_laurent("zbar^3"), 0.0, 512).winding == -3);
  const auto w = winding(parse_laurent("z"), 0.0, 512);
  CHECK(std::abs(w.total_arg - 2 * std::numbers::pi) <= 1e-6);

  const auto near = winding(parse_laurent("z"), 1.01, 512);
  CHECK(near.on_curve);
  const auto constant = winding(LaurentPoly::constant(3.0), 3.0, 64);
  CHECK(constant.on_curve);
}

TEST_CASE("winding is additive over products") {
  Rng rng(17);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const LaurentPoly a = random_poly(rng, 3, 3, false), b = random_poly(rng, 3, 3, false);
    const auto wa = winding(a, 0.0, 8192), wb = winding(b, 0.0, 8192);
    const auto wab = winding(a * b, 0.0, 8192);
    if (wa.on_curve || wb.on_curve || wab.on_curve) continue;
    CHECK(wab.winding == wa.winding + wb.winding);
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("convex hull") {
  const std::vector<cplx> square{1.0, cplx{0, 1}, -1.0, cplx{0, -1}};
  const ConvexHull h(square);
  CHECK(h.vertices().size() == 4);
  CHECK(h.contains(0.0, 0.0));
  CHECK(!h.contains(cplx{0.8, 0.8}, 1e-8));

  const ConvexHull single(std::vector<cplx>{cplx{2, 3}});
  CHECK(single.vertices().size() == 1);
  CHECK(single.contains(cplx{2, 3}, 0.0));
  CHECK(!single.contains(cplx{2, 3.1}, 1e-8));

  const ConvexHull seg(std::vector<cplx>{-2.0, 0.0, 1.0, 2.0});
  CHECK(seg.vertices().size() == 2);
  CHECK(seg.contains(0.5, 1e-12));
  CHECK(!seg.contains(cplx{0.5, 1e-6}, 1e-8));
}

TEST_CASE("hull vertices are counter-clockwise") {
  Rng rng(23);
  std::vector<cplx> pts(60);
  for (auto& p : pts) p = rng.complex_normal();
  const auto& v = ConvexHull(pts).vertices();
  REQUIRE(v.size() >= 3);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cplx a = v[i], b = v[(i + 1) % v.size()], c = v[(i + 2) % v.size()];
    CHECK(((b - a) * std::conj(c - b)).imag() < 0);  // left turn
  }
}

TEST_CASE("hull membership agrees with the triangle oracle") {
  Rng rng(31);
  std::vector<cplx> pts(100);
  for (auto& p : pts) p = rng.complex_normal();
  const ConvexHull hull(pts);
  int queries = 0;
  while (queries < 50) {
    const cplx q = rng.complex_uniform(3.0);
    // Stay clear of the boundary so the oracle's exact test is decisive.
    const double d = hull.distance(q);
    bool near_boundary = false;
    if (d == 0.0) {
      for (std::size_t i = 0; i < hull.vertices().size(); ++i) {
        const cplx a = hull.vertices()[i], b = hull.vertices()[(i + 1) % hull.vertices().size()];
        const double dist = std::abs(((q - a) * std::conj(b - a)).imag()) / std::abs(b - a);
        near_boundary |= dist < 1e-9;
      }
    } else {
      near_boundary = d < 1e-9;
    }
    if (near_boundary) continue;
    CHECK(hull.contains(q, 0.0) == in_hull_by_triangles(pts, q));
    ++queries;
  }
}

TEST_CASE("sup_norm brackets") {
  const auto z = sup_norm(parse_laurent("z"), 512);
  CHECK(std::abs(z.lower - 1.0) <= 1e-15);
  CHECK(z.upper == 1.0);

  const auto c = sup_norm(parse_laurent("z + zbar"), 720);
  CHECK(std::abs(c.lower - 2.0) <= 1e-4);
  CHECK(c.upper == 2.0);

  const auto q = sup_norm(parse_laurent("1 + z + z^2"), 720);
  CHECK(std::abs(q.lower - 3.0) <= 1e-3);
  CHECK(q.upper == 3.0);
  // Refining the grid never lowers the estimate and never crosses upper.
  const auto fine = sup_norm(parse_laurent("1 + z + z^2"), 5760);
  CHECK(fine.lower >= q.lower - 1e-15);
  CHECK(fine.lower <= fine.upper + 1e-15);
}

TEST_CASE("parser basics") {
  const auto p = parse_laurent("2.5*z^3 - zbar + (1-0.5i)*z^2");
  CHECK(p.coeff(3) == cplx{2.5});
  CHECK(p.coeff(-1) == cplx{-1.0});
  CHECK(p.coeff(2) == cplx{1.0, -0.5});

  // Cancellation on the torus: z * zbar = 1.
  const auto one = parse_laurent("z*zbar");
  CHECK(one == LaurentPoly::constant(1.0));
  const auto bi = parse_bipoly("z*zbar");
  CHECK(bi.terms().size() == 1);
  CHECK(bi.terms().begin()->first.first == Exponent{1});

  const auto multi = parse_laurent("2.5*z1^3*zbar2^1");
  CHECK(multi.nvars() == 2);
  CHECK(multi.coeff({3, -1}) == cplx{2.5});

  CHECK(parse_laurent("3i*z").coeff(1) == cplx{0, 3});
  CHECK(parse_laurent("1e-05*z").coeff(1) == cplx{1e-5});
  CHECK(parse_laurent("z2", 3).nvars() == 3);

  CHECK_THROWS_AS(parse_laurent("z + z2"), ParseError);
  CHECK_THROWS_AS(parse_laurent("2*w"), ParseError);
  CHECK_THROWS_AS(parse_laurent("z3", 2), ParseError);
  CHECK_THROWS_AS(parse_laurent("(z + 1"), ParseError);
}

TEST_CASE("print then parse round-trips exactly") {
  Rng rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const LaurentPoly p = random_poly(rng, 6, rng.uniform_int(0, 6), false);
    CHECK(parse_laurent(p.to_string(), 1) == p);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(1, 3);
    LaurentPoly p(n);
    BiPoly b(n);
    for (int t = 0; t < 4; ++t) {
      Exponent e(n), a(n), bb(n);
      for (int j = 0; j < n; ++j) {
        e[j] = rng.uniform_int(-3, 3);
        a[j] = rng.uniform_int(0, 3);
        bb[j] = rng.uniform_int(0, 3);
      }
      p.add_term(e, rng.complex_normal());
      b.add_term(a, bb, rng.complex_normal());
    }
    CHECK(parse_laurent(p.to_string(), n) == p);
    CHECK(parse_bipoly(b.to_string(), n) == b);
  }
}

TEST_CASE("Laurent multiplication is commutative and associative") {
  Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_poly(rng, 4, 4, true), b = random_poly(rng, 4, 4, true),
               c = random_poly(rng, 4, 4, true);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
  }
}

TEST_CASE("torus conjugation matches pointwise conjugation") {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_poly(rng, 5, 5, false);
    const auto direct = eval_grid(p, 64), conj = eval_grid(p.conj(), 64);
    for (std::size_t k = 0; k < direct.samples.size(); ++k)
      CHECK(std::abs(conj.samples[k] - std::conj(direct.samples[k])) <= 1e-12);
  }
}

TEST_CASE("spherical multifunctions") {
  CHECK(SphericalMultifunction::circle().sphericity_defect(64) <= 1e-12);
  CHECK(SphericalMultifunction::sphere_coordinates(2).sphericity_defect(16) <= 1e-12);
  CHECK(SphericalMultifunction::sphere_coordinates(3).sphericity_defect(8) <= 1e-12);
  CHECK(SphericalMultifunction::torus_coordinates(2).sphericity_defect(16) <= 1e-12);
  CHECK(SphericalMultifunction::torus_coordinates(3).sphericity_defect(8) <= 1e-12);

  // Unscaled torus coordinates are not spherical.
  const SphericalMultifunction raw(
      {LaurentPoly::coordinate(0, 2), LaurentPoly::coordinate(1, 2)},
      Domain{DomainKind::torus, 2, 1.0});
  CHECK(std::abs(raw.sphericity_defect(8) - 1.0) <= 1e-12);

  CHECK_THROWS_AS(SphericalMultifunction({parse_laurent("zbar1", 2)},
                                         Domain{DomainKind::sphere, 2, 1.0}),
                  PreconditionError);
}
