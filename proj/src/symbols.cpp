#include "sphiso/symbols.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

#include "sphiso/errors.hpp"

namespace sphiso {

namespace {

cplx ipow(cplx z, int k) {
  if (k < 0) return 1.0 / ipow(z, -k);
  cplx result = 1.0, base = z;
  while (k) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

int total(const Exponent& e) {
  int s = 0;
  for (int v : e) s += v;
  return s;
}

int l1(const Exponent& e) {
  int s = 0;
  for (int v : e) s += std::abs(v);
  return s;
}

// e^{2 pi i m / n} for m = 0..n-1.
std::vector<cplx> roots_of_unity(int n) {
  std::vector<cplx> w(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double t = 2.0 * std::numbers::pi * m / n;
    w[static_cast<std::size_t>(m)] = {std::cos(t), std::sin(t)};
  }
  return w;
}

std::string format_coeff(cplx c) {
  if (c.imag() == 0.0) return format_double(c.real());
  std::string s = "(" + format_double(c.real());
  s += c.imag() < 0 ? "-" : "+";
  s += format_double(std::abs(c.imag())) + "i)";
  return s;
}

std::string join_terms(const std::vector<std::string>& terms) {
  if (terms.empty()) return "0";
  std::string out = terms.front();
  for (std::size_t k = 1; k < terms.size(); ++k) {
    const auto& t = terms[k];
    if (!t.empty() && t.front() == '-')
      out += " - " + t.substr(1);
    else
      out += " + " + t;
  }
  return out;
}

std::string with_coeff(cplx c, const std::string& monomial) {
  if (monomial.empty()) return format_coeff(c);
  if (c == cplx{1.0}) return monomial;
  if (c == cplx{-1.0}) return "-" + monomial;
  return format_coeff(c) + "*" + monomial;
}

std::string var_power(bool bar, int nvars, int j, int power) {
  std::string s = bar ? "zbar" : "z";
  if (nvars > 1) s += std::to_string(j + 1);
  if (power != 1) s += "^" + std::to_string(power);
  return s;
}

// ---- parser -------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, int nvars) : text_(text), nvars_(nvars) {}

  BiPoly parse() {
    BiPoly p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("symbol parse error at offset " + std::to_string(pos_) + ": " + what +
                     " in \"" + std::string(text_) + "\"");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool is_ident_char(std::size_t at) const {
    return at < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[at])) || text_[at] == '_');
  }

  BiPoly expr() {
    BiPoly acc(nvars_);
    bool first = true;
    for (;;) {
      skip_ws();
      double sign = 1.0;
      if (peek('+') || peek('-')) {
        sign = text_[pos_] == '-' ? -1.0 : 1.0;
        ++pos_;
      } else if (!first) {
        break;
      }
      BiPoly t = term();
      t *= sign;
      acc += t;
      first = false;
      skip_ws();
      if (pos_ >= text_.size() || (text_[pos_] != '+' && text_[pos_] != '-')) break;
    }
    return acc;
  }

  BiPoly term() {
    BiPoly t = factor();
    while (peek('*')) {
      ++pos_;
      t = t * factor();
    }
    return t;
  }

  BiPoly factor() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a factor");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      BiPoly inner = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == 'i' && !is_ident_char(pos_ + 1)) {
      ++pos_;
      return BiPoly::constant(cplx{0.0, 1.0}, nvars_);
    }
    if (c == 'z') return variable();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  BiPoly number() {
    double v = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{}) fail("bad number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    if (pos_ < text_.size() && text_[pos_] == 'i' && !is_ident_char(pos_ + 1)) {
      ++pos_;
      return BiPoly::constant(cplx{0.0, v}, nvars_);
    }
    return BiPoly::constant(cplx{v, 0.0}, nvars_);
  }

  int integer() {
    int v = 0;
    const char* first = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), v);
    if (ec != std::errc{}) fail("expected an integer");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return v;
  }

  BiPoly variable() {
    ++pos_;  // 'z'
    bool bar = false;
    if (text_.substr(pos_, 3) == "bar") {
      bar = true;
      pos_ += 3;
    }
    int index = 1;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      index = integer();
      if (index < 1) fail("variable index must be >= 1");
    } else if (nvars_ != 1) {
      fail("bare z used with " + std::to_string(nvars_) + " variables");
    }
    if (index > nvars_) fail("variable index " + std::to_string(index) + " exceeds arity");
    int power = 1;
    if (peek('^')) {
      ++pos_;
      skip_ws();
      power = integer();
      if (power < 0) fail("negative exponent (use zbar)");
    }
    Exponent zero(static_cast<std::size_t>(nvars_), 0), e = zero;
    e[static_cast<std::size_t>(index - 1)] = power;
    return bar ? BiPoly::term(zero, e) : BiPoly::term(e, zero);
  }

  std::string_view text_;
  int nvars_;
  std::size_t pos_ = 0;
};

int infer_arity(std::string_view text) {
  int max_index = 0;
  bool bare = false;
  for (std::size_t k = 0; k < text.size(); ++k) {
    if (text[k] != 'z') continue;
    if (k > 0 && (std::isalnum(static_cast<unsigned char>(text[k - 1])))) continue;
    std::size_t p = k + 1;
    if (text.substr(p, 3) == "bar") p += 3;
    if (p < text.size() && std::isdigit(static_cast<unsigned char>(text[p]))) {
      int v = 0;
      std::from_chars(text.data() + p, text.data() + text.size(), v);
      max_index = std::max(max_index, v);
    } else {
      bare = true;
    }
  }
  if (bare && max_index > 1)
    throw ParseError("symbol mixes bare z with indexed variables: \"" + std::string(text) + "\"");
  return std::max(max_index, 1);
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

// ---- LaurentPoly ----------------------------------------------------------

LaurentPoly::LaurentPoly(int nvars) : nvars_(nvars) {
  if (nvars < 1) throw PreconditionError("LaurentPoly: nvars must be >= 1");
}

LaurentPoly LaurentPoly::constant(cplx c, int nvars) {
  LaurentPoly p(nvars);
  p.add_term(Exponent(static_cast<std::size_t>(nvars), 0), c);
  return p;
}

LaurentPoly LaurentPoly::monomial(Exponent e, cplx c) {
  LaurentPoly p(static_cast<int>(e.size()));
  p.add_term(e, c);
  return p;
}

LaurentPoly LaurentPoly::power(int k, cplx c) { return monomial({k}, c); }

LaurentPoly LaurentPoly::coordinate(int j, int nvars) {
  Exponent e(static_cast<std::size_t>(nvars), 0);
  e.at(static_cast<std::size_t>(j)) = 1;
  return monomial(std::move(e));
}

void LaurentPoly::check_arity(const Exponent& e) const {
  if (static_cast<int>(e.size()) != nvars_)
    throw PreconditionError("LaurentPoly: exponent arity " + std::to_string(e.size()) +
                            " != " + std::to_string(nvars_));
}

cplx LaurentPoly::coeff(const Exponent& e) const {
  auto it = coeffs_.find(e);
  return it == coeffs_.end() ? cplx{} : it->second;
}

cplx LaurentPoly::coeff(int k) const { return coeff(Exponent{k}); }

void LaurentPoly::add_term(const Exponent& e, cplx c) {
  check_arity(e);
  if (c == cplx{}) return;
  auto [it, inserted] = coeffs_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{}) coeffs_.erase(it);
  }
}

int LaurentPoly::max_degree() const {
  int m = 0;
  for (const auto& [e, c] : coeffs_)
    for (int v : e) m = std::max(m, v);
  return m;
}

int LaurentPoly::max_codegree() const {
  int m = 0;
  for (const auto& [e, c] : coeffs_)
    for (int v : e) m = std::max(m, -v);
  return m;
}

double LaurentPoly::l1_norm() const {
  double s = 0.0;
  for (const auto& [e, c] : coeffs_) s += std::abs(c);
  return s;
}

double LaurentPoly::derivative_bound() const {
  double s = 0.0;
  for (const auto& [e, c] : coeffs_) s += std::abs(c) * l1(e);
  return s;
}

double LaurentPoly::second_derivative_bound() const {
  double s = 0.0;
  for (const auto& [e, c] : coeffs_) s += std::abs(c) * l1(e) * l1(e);
  return s;
}

LaurentPoly LaurentPoly::conj() const {
  LaurentPoly out(nvars_);
  for (const auto& [e, c] : coeffs_) {
    Exponent neg = e;
    for (int& v : neg) v = -v;
    out.coeffs_.emplace(std::move(neg), std::conj(c));
  }
  return out;
}

cplx LaurentPoly::eval(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != nvars_)
    throw PreconditionError("LaurentPoly::eval: point arity mismatch");
  cplx s{};
  for (const auto& [e, c] : coeffs_) {
    cplx t = c;
    for (std::size_t j = 0; j < e.size(); ++j)
      if (e[j]) t *= ipow(z[j], e[j]);
    s += t;
  }
  return s;
}

cplx LaurentPoly::eval(cplx z) const { return eval(std::span<const cplx>(&z, 1)); }

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.nvars_ != nvars_) throw PreconditionError("LaurentPoly +: arity mismatch");
  for (const auto& [e, c] : o.coeffs_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  if (o.nvars_ != nvars_) throw PreconditionError("LaurentPoly -: arity mismatch");
  for (const auto& [e, c] : o.coeffs_) add_term(e, -c);
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(cplx s) {
  if (s == cplx{}) {
    coeffs_.clear();
    return *this;
  }
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    it->second *= s;
    it = it->second == cplx{} ? coeffs_.erase(it) : std::next(it);
  }
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.nvars_ != b.nvars_) throw PreconditionError("LaurentPoly *: arity mismatch");
  LaurentPoly out(a.nvars_);
  for (const auto& [ea, ca] : a.coeffs_)
    for (const auto& [eb, cb] : b.coeffs_) {
      Exponent e = ea;
      for (std::size_t j = 0; j < e.size(); ++j) e[j] += eb[j];
      out.add_term(e, ca * cb);
    }
  return out;
}

double max_coeff_diff(const LaurentPoly& a, const LaurentPoly& b) {
  double m = 0.0;
  for (const auto& [e, c] : a.terms()) m = std::max(m, std::abs(c - b.coeff(e)));
  for (const auto& [e, c] : b.terms())
    if (!a.terms().count(e)) m = std::max(m, std::abs(c));
  return m;
}

std::string LaurentPoly::to_string() const {
  std::vector<std::string> terms;
  // Print in ascending exponent order, which is the map order.
  for (const auto& [e, c] : coeffs_) {
    std::string mono;
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += var_power(e[j] < 0, nvars_, static_cast<int>(j), std::abs(e[j]));
    }
    terms.push_back(with_coeff(c, mono));
  }
  return join_terms(terms);
}

// ---- BiPoly ----------------------------------------------------------------

BiPoly::BiPoly(int nvars) : nvars_(nvars) {
  if (nvars < 1) throw PreconditionError("BiPoly: nvars must be >= 1");
}

BiPoly BiPoly::constant(cplx c, int nvars) {
  BiPoly p(nvars);
  const Exponent zero(static_cast<std::size_t>(nvars), 0);
  p.add_term(zero, zero, c);
  return p;
}

BiPoly BiPoly::term(Exponent alpha, Exponent beta, cplx c) {
  if (alpha.size() != beta.size()) throw PreconditionError("BiPoly::term: arity mismatch");
  BiPoly p(static_cast<int>(alpha.size()));
  p.add_term(alpha, beta, c);
  return p;
}

void BiPoly::add_term(const Exponent& alpha, const Exponent& beta, cplx c) {
  if (static_cast<int>(alpha.size()) != nvars_ || static_cast<int>(beta.size()) != nvars_)
    throw PreconditionError("BiPoly: exponent arity mismatch");
  for (std::size_t j = 0; j < alpha.size(); ++j)
    if (alpha[j] < 0 || beta[j] < 0) throw PreconditionError("BiPoly: negative exponent");
  if (c == cplx{}) return;
  auto [it, inserted] = coeffs_.try_emplace(Key{alpha, beta}, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{}) coeffs_.erase(it);
  }
}

int BiPoly::band() const {
  int b = 0;
  for (const auto& [k, c] : coeffs_) b = std::max(b, std::abs(total(k.first) - total(k.second)));
  return b;
}

int BiPoly::max_total_degree() const {
  int d = 0;
  for (const auto& [k, c] : coeffs_) d = std::max(d, total(k.first) + total(k.second));
  return d;
}

bool BiPoly::is_analytic() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const auto& kv) { return total(kv.first.second) == 0; });
}

BiPoly BiPoly::conj() const {
  BiPoly out(nvars_);
  for (const auto& [k, c] : coeffs_) out.coeffs_.emplace(Key{k.second, k.first}, std::conj(c));
  return out;
}

cplx BiPoly::eval(std::span<const cplx> z) const {
  if (static_cast<int>(z.size()) != nvars_)
    throw PreconditionError("BiPoly::eval: point arity mismatch");
  cplx s{};
  for (const auto& [k, c] : coeffs_) {
    cplx t = c;
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (k.first[j]) t *= ipow(z[j], k.first[j]);
      if (k.second[j]) t *= ipow(std::conj(z[j]), k.second[j]);
    }
    s += t;
  }
  return s;
}

LaurentPoly BiPoly::to_torus() const {
  LaurentPoly out(nvars_);
  for (const auto& [k, c] : coeffs_) {
    Exponent e = k.first;
    for (std::size_t j = 0; j < e.size(); ++j) e[j] -= k.second[j];
    out.add_term(e, c);
  }
  return out;
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
  if (o.nvars_ != nvars_) throw PreconditionError("BiPoly +: arity mismatch");
  for (const auto& [k, c] : o.coeffs_) add_term(k.first, k.second, c);
  return *this;
}

BiPoly& BiPoly::operator*=(cplx s) {
  if (s == cplx{}) {
    coeffs_.clear();
    return *this;
  }
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    it->second *= s;
    it = it->second == cplx{} ? coeffs_.erase(it) : std::next(it);
  }
  return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  if (a.nvars_ != b.nvars_) throw PreconditionError("BiPoly *: arity mismatch");
  BiPoly out(a.nvars_);
  for (const auto& [ka, ca] : a.coeffs_)
    for (const auto& [kb, cb] : b.coeffs_) {
      Exponent al = ka.first, be = ka.second;
      for (std::size_t j = 0; j < al.size(); ++j) {
        al[j] += kb.first[j];
        be[j] += kb.second[j];
      }
      out.add_term(al, be, ca * cb);
    }
  return out;
}

std::string BiPoly::to_string() const {
  std::vector<std::string> terms;
  for (const auto& [k, c] : coeffs_) {
    std::string mono;
    for (std::size_t j = 0; j < k.first.size(); ++j) {
      for (bool bar : {false, true}) {
        const int p = bar ? k.second[j] : k.first[j];
        if (p == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += var_power(bar, nvars_, static_cast<int>(j), p);
      }
    }
    terms.push_back(with_coeff(c, mono));
  }
  return join_terms(terms);
}

BiPoly parse_bipoly(std::string_view text, int nvars) {
  const int arity = nvars > 0 ? nvars : infer_arity(text);
  return Parser(text, arity).parse();
}

LaurentPoly parse_laurent(std::string_view text, int nvars) {
  return parse_bipoly(text, nvars).to_torus();
}

// ---- grids, winding, hulls -----------------------------------------------------

EssRange eval_grid(const LaurentPoly& phi, int grid_size) {
  const int need = 4 * std::max(1, phi.max_abs_exponent());
  if (grid_size < need)
    throw PreconditionError("eval_grid: grid_size " + std::to_string(grid_size) +
                            " below required " + std::to_string(need));
  const int nv = phi.nvars();
  std::size_t count = 1;
  for (int j = 0; j < nv; ++j) count *= static_cast<std::size_t>(grid_size);
  const auto w = roots_of_unity(grid_size);

  EssRange r{nv, grid_size, std::vector<cplx>(count)};
  std::vector<int> idx(static_cast<std::size_t>(nv), 0);
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::size_t rem = flat;
    for (int j = nv - 1; j >= 0; --j) {
      idx[static_cast<std::size_t>(j)] = static_cast<int>(rem % static_cast<std::size_t>(grid_size));
      rem /= static_cast<std::size_t>(grid_size);
    }
    cplx s{};
    for (const auto& [e, c] : phi.terms()) {
      // z_j^e at grid point m is w[(e*m) mod N]: exact index arithmetic.
      cplx t = c;
      for (int j = 0; j < nv; ++j) {
        const long long m = static_cast<long long>(e[static_cast<std::size_t>(j)]) *
                            idx[static_cast<std::size_t>(j)];
        long long r = m % grid_size;
        if (r < 0) r += grid_size;
        t *= w[static_cast<std::size_t>(r)];
      }
      s += t;
    }
    r.samples[flat] = s;
  }
  return r;
}

double curve_tolerance(const LaurentPoly& phi, int grid_size) {
  return 10.0 * (2.0 * std::numbers::pi / grid_size) * phi.derivative_bound();
}

WindingResult winding(const EssRange& range, cplx lambda, double tolerance) {
  if (range.nvars != 1) throw PreconditionError("winding: one-variable symbol required");
  const auto& s = range.samples;
  WindingResult out;
  out.tolerance = tolerance;
  out.min_distance = INFINITY;
  for (const auto& v : s) out.min_distance = std::min(out.min_distance, std::abs(v - lambda));
  if (out.min_distance <= tolerance) {
    out.on_curve = true;
    return out;
  }
  double acc = 0.0;
  const std::size_t n = s.size();
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = s[k] - lambda, b = s[(k + 1) % n] - lambda;
    acc += std::arg(b * std::conj(a));
  }
  out.total_arg = acc;
  out.winding = static_cast<int>(std::lround(acc / (2.0 * std::numbers::pi)));
  return out;
}

WindingResult winding(const LaurentPoly& phi, cplx lambda, int grid_size) {
  if (phi.nvars() != 1) throw PreconditionError("winding: one-variable symbol required");
  return winding(eval_grid(phi, grid_size), lambda, curve_tolerance(phi, grid_size));
}

namespace {

double cross(cplx o, cplx a, cplx b) {
  return (a.real() - o.real()) * (b.imag() - o.imag()) -
         (a.imag() - o.imag()) * (b.real() - o.real());
}

double segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p - a) * std::conj(ab)).real() / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

}  // namespace

ConvexHull::ConvexHull(std::span<const cplx> points) {
  if (points.empty()) throw PreconditionError("ConvexHull: at least one point required");
  std::vector<cplx> p(points.begin(), points.end());
  const auto less = [](cplx a, cplx b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  };
  std::sort(p.begin(), p.end(), less);
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) {
    vertices_ = p;
    return;
  }
  // Andrew's monotone chain; collinear points are dropped.
  std::vector<cplx> h(2 * p.size());
  std::size_t k = 0;
  for (const auto& q : p) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], q) <= 0) --k;
    h[k++] = q;
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  vertices_ = std::move(h);
}

double ConvexHull::distance(cplx lambda) const {
  const auto& v = vertices_;
  if (v.size() == 1) return std::abs(lambda - v[0]);
  if (v.size() == 2) return segment_distance(lambda, v[0], v[1]);
  bool inside = true;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (cross(v[i], v[(i + 1) % v.size()], lambda) < 0) {
      inside = false;
      break;
    }
  if (inside) return 0.0;
  double d = INFINITY;
  for (std::size_t i = 0; i < v.size(); ++i)
    d = std::min(d, segment_distance(lambda, v[i], v[(i + 1) % v.size()]));
  return d;
}

bool ConvexHull::contains(cplx lambda, double tol) const { return distance(lambda) <= tol; }

NormBracket sup_norm(const LaurentPoly& phi, int grid_size) {
  NormBracket b;
  b.upper = phi.l1_norm();
  const int nv = phi.nvars();
  const int g = std::max(grid_size, 4 * std::max(1, phi.max_abs_exponent()));
  if (nv > 1 && std::pow(static_cast<double>(g), nv) > 1e8)
    throw ResourceError("sup_norm: grid too large for " + std::to_string(nv) + " variables");
  for (const auto& v : eval_grid(phi, g).samples) b.lower = std::max(b.lower, std::abs(v));
  return b;
}

// ---- spherical multifunctions --------------------------------------------------

SphericalMultifunction::SphericalMultifunction(std::vector<LaurentPoly> components,
                                               Domain domain)
    : components_(std::move(components)), domain_(domain) {
  if (components_.empty()) throw PreconditionError("SphericalMultifunction: no components");
  const int expected = domain_.kind == DomainKind::circle ? 1 : domain_.n;
  for (const auto& c : components_) {
    if (c.nvars() != expected)
      throw PreconditionError("SphericalMultifunction: component arity mismatch");
    if (domain_.kind == DomainKind::sphere && !c.is_analytic())
      throw PreconditionError(
          "SphericalMultifunction: sphere components must be analytic polynomials");
  }
}

SphericalMultifunction SphericalMultifunction::circle() {
  return {{LaurentPoly::power(1)}, Domain{DomainKind::circle, 1, 1.0}};
}

SphericalMultifunction SphericalMultifunction::sphere_coordinates(int n) {
  std::vector<LaurentPoly> c;
  for (int j = 0; j < n; ++j) c.push_back(LaurentPoly::coordinate(j, n));
  return {std::move(c), Domain{DomainKind::sphere, n, 1.0}};
}

SphericalMultifunction SphericalMultifunction::torus_coordinates(int n) {
  const double gamma = std::sqrt(static_cast<double>(n));
  std::vector<LaurentPoly> c;
  for (int j = 0; j < n; ++j) c.push_back(LaurentPoly::coordinate(j, n) * cplx{1.0 / gamma});
  return {std::move(c), Domain{DomainKind::torus, n, gamma}};
}

double SphericalMultifunction::sphericity_defect(int grid_size) const {
  const int n = domain_.kind == DomainKind::circle ? 1 : domain_.n;
  const auto w = roots_of_unity(grid_size);
  double worst = 0.0;
  std::vector<cplx> point(static_cast<std::size_t>(n));
  const auto check = [&] {
    double s = 0.0;
    for (const auto& c : components_) s += std::norm(c.eval(point));
    worst = std::max(worst, std::abs(s - 1.0));
  };

  // Phases on the grid for every coordinate; on the sphere the moduli run
  // over hyperspherical angles in [0, pi/2].
  const int moduli_axes = domain_.kind == DomainKind::sphere ? n - 1 : 0;
  const int axes = n + moduli_axes;
  std::size_t count = 1;
  for (int a = 0; a < axes; ++a) count *= static_cast<std::size_t>(grid_size);
  if (count > 20'000'000) throw ResourceError("sphericity_defect: grid too large");
  std::vector<int> idx(static_cast<std::size_t>(axes));
  for (std::size_t flat = 0; flat < count; ++flat) {
    std::size_t rem = flat;
    for (int a = axes - 1; a >= 0; --a) {
      idx[static_cast<std::size_t>(a)] = static_cast<int>(rem % static_cast<std::size_t>(grid_size));
      rem /= static_cast<std::size_t>(grid_size);
    }
    std::vector<double> moduli(static_cast<std::size_t>(n), 1.0);
    if (moduli_axes > 0) {
      double carry = 1.0;
      for (int j = 0; j < n - 1; ++j) {
        const double t = 0.5 * std::numbers::pi * idx[static_cast<std::size_t>(n + j)] /
                         (grid_size - 1);
        moduli[static_cast<std::size_t>(j)] = carry * std::cos(t);
        carry *= std::sin(t);
      }
      moduli[static_cast<std::size_t>(n - 1)] = carry;
    }
    for (int j = 0; j < n; ++j)
      point[static_cast<std::size_t>(j)] =
          moduli[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    check();
  }
  return worst;
}

}  // namespace sphiso
