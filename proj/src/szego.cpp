#include "sphiso/szego.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sphiso/errors.hpp"

namespace sphiso {

namespace {

using boost::multiprecision::cpp_int;

constexpr int kMaxMomentDegree = 60;

cpp_int factorial(int k) {
  cpp_int r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Exponent plus_unit(Exponent a, int j) {
  ++a[static_cast<std::size_t>(j)];
  return a;
}

Exponent add(Exponent a, const Exponent& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

// Moments are looked up many times per build.
class MomentCache {
 public:
  explicit MomentCache(int n) : n_(n) {}
  const Rational& operator()(const Exponent& a) {
    auto it = cache_.find(a);
    if (it == cache_.end()) it = cache_.emplace(a, sphere_moment(n_, a)).first;
    return it->second;
  }

 private:
  int n_;
  std::map<Exponent, Rational> cache_;
};

void shell_rec(int n, int k, Exponent& cur, std::size_t pos, std::vector<Exponent>& out) {
  if (pos + 1 == static_cast<std::size_t>(n)) {
    cur[pos] = k;
    out.push_back(cur);
    return;
  }
  for (int v = k; v >= 0; --v) {
    cur[pos] = v;
    shell_rec(n, k - v, cur, pos + 1, out);
  }
}

// (row, weight) of the single nonzero in each column of a weighted shift.
struct ShiftColumn {
  std::size_t row;
  cplx weight;
};

std::vector<ShiftColumn> shift_columns(const GradedOperator& t) {
  const std::size_t m = t.basis->size();
  std::vector<ShiftColumn> cols(m, ShiftColumn{m, 0.0});
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c)
      if (t.matrix(r, c) != cplx{}) cols[c] = {r, t.matrix(r, c)};
  return cols;
}

}  // namespace

int total_degree(const Exponent& a) { return std::accumulate(a.begin(), a.end(), 0); }

Rational sphere_moment(int n, const Exponent& alpha) {
  if (n < 1) throw PreconditionError("sphere_moment: n must be >= 1");
  if (alpha.size() != static_cast<std::size_t>(n))
    throw PreconditionError("sphere_moment: multi-index length must equal n");
  if (std::any_of(alpha.begin(), alpha.end(), [](int a) { return a < 0; }))
    throw PreconditionError("sphere_moment: negative exponent");
  const int k = total_degree(alpha);
  if (k > kMaxMomentDegree)
    throw PreconditionError("sphere_moment: |alpha| > 60");
  cpp_int num = factorial(n - 1);
  for (int a : alpha) num *= factorial(a);
  return Rational(num, factorial(n - 1 + k));
}

Rational sphere_integral(int n, const Exponent& gamma, const Exponent& delta) {
  if (gamma != delta) return Rational(0);
  return sphere_moment(n, gamma);
}

std::vector<Exponent> shell(int n, int k) {
  std::vector<Exponent> out;
  Exponent cur(static_cast<std::size_t>(n), 0);
  shell_rec(n, k, cur, 0, out);
  return out;
}

MonomialBasis::MonomialBasis(int n, int d) : n_(n), d_(d) {
  if (n < 1 || d < 0) throw PreconditionError("MonomialBasis: need n >= 1, d >= 0");
  for (int k = 0; k <= d; ++k)
    for (auto& a : shell(n, k)) {
      lookup_.emplace(a, indices_.size());
      indices_.push_back(std::move(a));
    }
}

std::size_t MonomialBasis::find(const Exponent& alpha) const {
  auto it = lookup_.find(alpha);
  return it == lookup_.end() ? size() : it->second;
}

std::size_t MonomialBasis::index(const Exponent& alpha) const {
  const std::size_t i = find(alpha);
  if (i == size()) throw PreconditionError("multi-index outside the graded basis");
  return i;
}

GradedOperator::GradedOperator(int n, int d, int band_, int safe)
    : basis(std::make_shared<MonomialBasis>(n, d)), band(band_), safe_degree(safe) {
  matrix = CMatrix(basis->size(), basis->size());
}

cplx GradedOperator::entry(const Exponent& beta, const Exponent& alpha) const {
  const std::size_t r = basis->find(beta), c = basis->find(alpha);
  if (r == basis->size() || c == basis->size()) return 0.0;
  return matrix(r, c);
}

void GradedOperator::set(const Exponent& beta, const Exponent& alpha, cplx v) {
  matrix(basis->index(beta), basis->index(alpha)) = v;
}

std::map<std::pair<Exponent, Exponent>, cplx> GradedOperator::entries() const {
  std::map<std::pair<Exponent, Exponent>, cplx> out;
  for (std::size_t r = 0; r < matrix.rows(); ++r)
    for (std::size_t c = 0; c < matrix.cols(); ++c)
      if (matrix(r, c) != cplx{}) out.emplace(std::pair{(*basis)[r], (*basis)[c]}, matrix(r, c));
  return out;
}

GradedOperator graded_identity(int n, int d) {
  GradedOperator g(n, d, 0, d);
  g.matrix = CMatrix::identity(g.basis->size());
  return g;
}

SzegoTuple szego_tuple(int n, int d) {
  if (n < 1 || d < 2) throw PreconditionError("szego_tuple: need n >= 1, d >= 2");
  SzegoTuple t{n, d, {}};
  MomentCache moment(n);
  const auto basis = std::make_shared<MonomialBasis>(n, d);
  for (int j = 0; j < n; ++j) {
    GradedOperator s;
    s.basis = basis;
    s.band = 1;
    s.safe_degree = d - 1;
    s.matrix = CMatrix(basis->size(), basis->size());
    for (std::size_t c = 0; c < basis->size(); ++c) {
      const Exponent& a = (*basis)[c];
      if (total_degree(a) >= d) continue;  // image would leave the truncation
      const Exponent b = plus_unit(a, j);
      s.matrix(basis->index(b), c) = std::sqrt(to_double(moment(b) / moment(a)));
    }
    t.shifts.push_back(std::move(s));
  }
  return t;
}

GradedOperator toeplitz_graded(const BiPoly& phi, int n, int d) {
  if (phi.nvars() != n) throw PreconditionError("toeplitz_graded: symbol arity differs from n");
  const int band = phi.band();
  if (2 * band > d) throw PreconditionError("toeplitz_graded: symbol band exceeds d/2");
  GradedOperator g(n, d, band, d - band);
  MomentCache moment(n);
  const MonomialBasis& basis = *g.basis;
  for (const auto& [key, c] : phi.terms()) {
    const auto& [a, b] = key;
    for (std::size_t col = 0; col < basis.size(); ++col) {
      const Exponent gamma = add(basis[col], a);
      Exponent beta = gamma;
      bool ok = true;
      for (std::size_t i = 0; i < beta.size(); ++i) {
        beta[i] -= b[i];
        ok = ok && beta[i] >= 0;
      }
      if (!ok) continue;
      const std::size_t row = basis.find(beta);
      if (row == basis.size()) continue;
      const Rational& mg = moment(gamma);
      const Rational q = mg * mg / (moment(basis[col]) * moment(beta));
      g.matrix(row, col) += c * std::sqrt(to_double(q));
    }
  }
  return g;
}

FixedPointResidual fixed_point_residual(const GradedOperator& x, const SzegoTuple& tuple) {
  if (x.d() != tuple.d || x.n() != tuple.n)
    throw PreconditionError("fixed_point_residual: operator and tuple sizes differ");
  const MonomialBasis& basis = *x.basis;
  const std::size_t m = basis.size();
  std::vector<std::vector<ShiftColumn>> cols;
  for (const auto& s : tuple.shifts) cols.push_back(shift_columns(s));

  FixedPointResidual res;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) {
      cplx acc = -x.matrix(r, c);
      for (const auto& col : cols) {
        const auto& cr = col[r];
        const auto& cc = col[c];
        if (cr.row == m || cc.row == m) continue;
        acc += std::conj(cr.weight) * x.matrix(cr.row, cc.row) * cc.weight;
      }
      const bool interior = total_degree(basis[r]) <= x.safe_degree - 1 &&
                            total_degree(basis[c]) <= x.safe_degree - 1;
      double& slot = interior ? res.interior : res.boundary;
      slot = std::max(slot, std::abs(acc));
    }
  return res;
}

DefectReport defect_report(const SzegoTuple& tuple) {
  const MonomialBasis& basis = *tuple.shifts.front().basis;
  CMatrix sum(basis.size(), basis.size());
  for (const auto& s : tuple.shifts) sum += s.matrix.adjoint() * s.matrix;
  sum -= CMatrix::identity(basis.size());
  DefectReport rep;
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const bool top_r = total_degree(basis[r]) == tuple.d;
    if (top_r) ++rep.top_shell_size;
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const bool top_c = total_degree(basis[c]) == tuple.d;
      const double v = std::abs(sum(r, c));
      if (top_r && top_c) {
        if (r == c)
          rep.top_shell_defect = std::max(rep.top_shell_defect, std::abs(sum(r, c) + 1.0));
        else
          rep.off_diagonal = std::max(rep.off_diagonal, v);
      } else {
        rep.interior_defect = std::max(rep.interior_defect, v);
      }
    }
  }
  return rep;
}

double commutator_defect(const SzegoTuple& tuple) {
  const MonomialBasis& basis = *tuple.shifts.front().basis;
  double worst = 0.0;
  for (std::size_t i = 0; i < tuple.shifts.size(); ++i)
    for (std::size_t j = i + 1; j < tuple.shifts.size(); ++j) {
      const CMatrix c = tuple.shifts[i].matrix * tuple.shifts[j].matrix -
                        tuple.shifts[j].matrix * tuple.shifts[i].matrix;
      for (std::size_t r = 0; r < c.rows(); ++r)
        for (std::size_t k = 0; k < c.cols(); ++k)
          if (total_degree(basis[k]) <= tuple.d - 2) worst = std::max(worst, std::abs(c(r, k)));
    }
  return worst;
}

NormalExtensionReport normal_extension_check(int n, int degree,
                                             const std::vector<BiPoly>& symbols) {
  if (degree < 2) throw PreconditionError("normal_extension_check: degree must be >= 2");
  NormalExtensionReport rep;
  rep.degree = degree;

  // Two-sided monomials z^g zbar^h with |g| + |h| <= degree.
  std::vector<std::pair<Exponent, Exponent>> space;
  for (int k = 0; k <= degree; ++k)
    for (int kg = 0; kg <= k; ++kg)
      for (const auto& g : shell(n, kg))
        for (const auto& h : shell(n, k - kg)) space.emplace_back(g, h);
  rep.dimension = space.size();

  MomentCache moment(n);
  // <z^g zbar^h, z^g' zbar^h'> = int z^(g+h') zbar^(h+g').
  auto inner = [&](const Exponent& g, const Exponent& h, const Exponent& g2, const Exponent& h2) {
    const Exponent p = add(g, h2), q = add(h, g2);
    return p == q ? moment(p) : Rational(0);
  };
  auto deg = [](const std::pair<Exponent, Exponent>& v) {
    return total_degree(v.first) + total_degree(v.second);
  };

  for (const auto& u : space)
    for (const auto& v : space) {
      if (deg(u) > degree - 1 || deg(v) > degree - 1) continue;
      Rational sphere = -inner(u.first, u.second, v.first, v.second);
      for (int j = 0; j < n; ++j) {
        // M_zj u against v, and u against M_zbarj v.
        const Rational lhs = inner(plus_unit(u.first, j), u.second, v.first, v.second);
        const Rational rhs = inner(u.first, u.second, v.first, plus_unit(v.second, j));
        rep.adjoint_defect = std::max(rep.adjoint_defect, std::abs(to_double(lhs - rhs)));
        sphere += inner(plus_unit(u.first, j), u.second, plus_unit(v.first, j), v.second);
      }
      rep.sphere_defect = std::max(rep.sphere_defect, std::abs(to_double(sphere)));
    }

  // Compressions to the analytic monomials.
  const Exponent zero(static_cast<std::size_t>(n), 0);
  const MonomialBasis analytic(n, degree);
  auto norm = [&](const Exponent& a) { return std::sqrt(to_double(moment(a))); };
  const SzegoTuple tuple = szego_tuple(n, degree);
  for (int j = 0; j < n; ++j)
    for (const auto& a : analytic.indices()) {
      if (total_degree(a) > degree - 1) continue;
      for (const auto& b : analytic.indices()) {
        const double v = to_double(inner(plus_unit(a, j), zero, b, zero)) / (norm(a) * norm(b));
        const double diff = std::abs(v - tuple.shifts[static_cast<std::size_t>(j)].entry(b, a));
        rep.shift_compression = std::max(rep.shift_compression, diff);
      }
    }

  for (const auto& phi : symbols) {
    const GradedOperator t = toeplitz_graded(phi, n, degree);
    const int reach = phi.max_total_degree();
    for (const auto& a : analytic.indices()) {
      if (total_degree(a) + reach > degree) continue;  // M_phi z^a must stay in the space
      for (const auto& b : analytic.indices()) {
        cplx v = 0.0;
        for (const auto& [key, c] : phi.terms())
          v += c * to_double(inner(add(a, key.first), key.second, b, zero));
        v /= norm(a) * norm(b);
        rep.symbol_compression = std::max(rep.symbol_compression, std::abs(v - t.entry(b, a)));
      }
    }
  }
  return rep;
}

}  // namespace sphiso
