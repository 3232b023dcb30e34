#include "sphiso/checks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "sphiso/catalog.hpp"
#include "sphiso/circle.hpp"
#include "sphiso/errors.hpp"
#include "sphiso/generators.hpp"
#include "sphiso/hardy.hpp"
#include "sphiso/polydisc.hpp"
#include "sphiso/szego.hpp"

namespace sphiso {

namespace {

constexpr std::size_t kMaxFailureLines = 5;
constexpr int kSupGrid = 4096;

std::size_t sz(int v) { return static_cast<std::size_t>(v); }

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

double min_of(const std::vector<double>& v) {
  double m = INFINITY;
  for (double x : v) m = std::min(m, x);
  return m;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt(double x) { return format_double(x); }

// ---- circle -------------------------------------------------------------

struct ClosureTrial {
  double mult = 0, star = 0, semi_match = 0, oracle = 0;
  bool semi_symbol_zero = true, box_ok = true;
};

json closure_metrics(const Scenario& s, int threads, CheckRecord& rec) {
  std::vector<ClosureTrial> out(sz(s.trials));
  parallel_for(out.size(), threads, [&](std::size_t i) {
    Rng rng = Rng::stream(s.seed, "closure_homomorphism", i);
    const auto x = random_element(rng, s.max_degree, s.max_correction);
    const auto y = random_element(rng, s.max_degree, s.max_correction);
    ClosureTrial& t = out[i];
    t.mult = max_coeff_diff(symbol_map(mul(x, y)), symbol_map(x) * symbol_map(y));
    t.star = max_coeff_diff(symbol_map(adjoint(x)), symbol_map(x).conj());

    const LaurentPoly& phi = x.symbol();
    const LaurentPoly& psi = y.symbol();
    const auto sc = semicommutator(phi, psi);
    t.semi_symbol_zero = sc.symbol().is_zero();
    const auto hi = static_cast<std::size_t>(std::max(0, phi.max_degree()));
    const auto lo = static_cast<std::size_t>(std::max(0, psi.max_codegree()));
    const CMatrix& f = sc.correction();
    for (std::size_t r = 0; r < f.rows(); ++r)
      for (std::size_t c = 0; c < f.cols(); ++c)
        if (f(r, c) != cplx{} && (r >= hi || c >= lo)) t.box_ok = false;
    t.semi_match =
        max_diff(sc, mul(make_toeplitz(phi), make_toeplitz(psi)) - make_toeplitz(phi * psi));

    // Independent product: top-left block of a product of large truncations.
    const std::size_t m = 16;
    const std::size_t n = m + 2 * sz(x.band() + y.band()) + x.active_size() + y.active_size() + 4;
    const CMatrix direct = x.truncation(n) * y.truncation(n);
    t.oracle = max_abs_diff(direct.block(0, 0, m, m), mul(x, y).truncation(m));
  });

  const double tol = s.tol("exact");
  std::vector<double> mult, star, match, oracle;
  std::size_t box_bad = 0, sym_bad = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& t = out[i];
    mult.push_back(t.mult);
    star.push_back(t.star);
    match.push_back(t.semi_match);
    oracle.push_back(t.oracle);
    const std::string at = "trial " + std::to_string(i) + ": ";
    rec.require(t.mult <= tol, at + "symbol map not multiplicative, " + fmt(t.mult));
    rec.require(t.star <= tol, at + "symbol map not *-preserving, " + fmt(t.star));
    rec.require(t.semi_match <= tol, at + "semicommutator mismatch " + fmt(t.semi_match));
    rec.require(t.oracle <= tol, at + "product differs from truncation product, " + fmt(t.oracle));
    if (!t.semi_symbol_zero) ++sym_bad;
    if (!t.box_ok) ++box_bad;
    rec.require(t.semi_symbol_zero, at + "semicommutator has a nonzero symbol");
    rec.require(t.box_ok, at + "semicommutator correction outside the degree box");
  }
  return {{"pairs", out.size()},
          {"max_multiplicativity_residual", max_of(mult)},
          {"max_star_residual", max_of(star)},
          {"max_semicommutator_mismatch", max_of(match)},
          {"max_truncation_oracle_gap", max_of(oracle)},
          {"semicommutator_nonzero_symbols", sym_bad},
          {"semicommutator_box_violations", box_bad}};
}

void check_closure(const Scenario& s, RunContext& ctx, CheckRecord& rec) {
  rec.metrics = closure_metrics(s, ctx.threads, rec);
}

void check_averaging(const Scenario& s, RunContext& ctx, CheckRecord& rec) {
  struct Trial {
    double pairwise = 0, choi_effros = 0, idempotent = 0;
  };
  std::vector<Trial> out(sz(s.trials));
  parallel_for(out.size(), ctx.threads, [&](std::size_t i) {
    Rng rng = Rng::stream(s.seed, "thm2_1_identities", i);
    const auto x = random_element(rng, s.max_degree, s.max_correction);
    const auto y = random_element(rng, s.max_degree, s.max_correction);
    const auto r = verify_averaging_identities(x, y);
    const auto px = project_phi(x);
    out[i] = {r.max_pairwise_diff, r.choi_effros_diff, max_diff(project_phi(px), px)};
  });
  const double tol = s.tol("exact");
  std::vector<double> pw, ce, id;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::string at = "trial " + std::to_string(i) + ": ";
    pw.push_back(out[i].pairwise);
    ce.push_back(out[i].choi_effros);
    id.push_back(out[i].idempotent);
    rec.require(out[i].pairwise <= tol, at + "averaging identities differ by " + fmt(out[i].pairwise));
    rec.require(out[i].choi_effros <= tol, at + "Choi-Effros product off by " + fmt(out[i].choi_effros));
    rec.require(out[i].idempotent <= tol, at + "projection not idempotent, " + fmt(out[i].idempotent));
  }
  const auto one = ToeplitzElement::identity();
  const double unital = max_diff(project_phi(one), one);
  rec.require(unital <= tol, "projection not unital, " + fmt(unital));
  rec.metrics = {{"pairs", out.size()},
                 {"max_pairwise_diff", max_of(pw)},
                 {"max_choi_effros_diff", max_of(ce)},
                 {"max_idempotence_defect", max_of(id)},
                 {"unital_defect", unital}};
}

void check_brown_halmos(const Scenario& s, RunContext& ctx, CheckRecord& rec) {
  struct Trial {
    int kind = 0;
    bool truth = false, verdict = false, disagreement = false;
    double residual = 0;
  };
  std::vector<Trial> out(2 * sz(s.trials));
  parallel_for(out.size(), ctx.threads, [&](std::size_t i) {
    Rng rng = Rng::stream(s.seed, "brown_halmos", i);
    Trial& t = out[i];
    t.kind = static_cast<int>(i % 4);
    ToeplitzElement x;
    switch (t.kind) {
      case 0: x = make_toeplitz(random_symbol(rng, s.max_degree)); break;
      case 1:
        x = make_toeplitz(random_symbol(rng, s.max_degree)) +
            ToeplitzElement::finite(random_correction(rng, s.max_correction));
        break;
      default: x = random_element(rng, s.max_degree, s.max_correction); break;
    }
    t.truth = !x.has_correction();
    const auto test = toeplitz_test(x);
    t.residual = test.fixed_point_residual;
    try {
      t.verdict = is_toeplitz(x);
    } catch (const std::logic_error&) {
      t.disagreement = true;
      t.verdict = test.fixed_point;
    }
  });
  std::size_t false_pos = 0, false_neg = 0, disagree = 0, planted_pure = 0, planted_fr = 0;
  double min_nontoeplitz = INFINITY, max_toeplitz = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& t = out[i];
    if (t.kind == 0) ++planted_pure;
    if (t.kind == 1) ++planted_fr;
    if (t.verdict && !t.truth) ++false_pos;
    if (!t.verdict && t.truth) ++false_neg;
    if (t.disagreement) ++disagree;
    if (t.truth) max_toeplitz = std::max(max_toeplitz, t.residual);
    else min_nontoeplitz = std::min(min_nontoeplitz, t.residual);
    rec.require(t.verdict == t.truth && !t.disagreement,
                "element " + std::to_string(i) + ": false verdict");
  }
  rec.metrics = {{"elements", out.size()},
                 {"planted_pure_toeplitz", planted_pure},
                 {"planted_finite_rank", planted_fr},
                 {"false_positives", false_pos},
                 {"false_negatives", false_neg},
                 {"criterion_disagreements", disagree},
                 {"max_fixed_point_residual_toeplitz", max_toeplitz},
                 {"min_fixed_point_residual_non_toeplitz", std::isfinite(min_nontoeplitz) ? json(min_nontoeplitz) : json()}};
}

void check_commutant(const Scenario& s, RunContext& ctx, CheckRecord& rec) {
  struct Trial {
    bool analytic_input = false;
    std::string symbol;
    CommutantReport report;
  };
  std::vector<Trial> out(sz(s.trials));
  parallel_for(out.size(), ctx.threads, [&](std::size_t i) {
    Rng rng = Rng::stream(s.seed, "commutant_lifting", i);
    Trial& t = out[i];
    ToeplitzElement x;
    t.analytic_input = i % 2 == 0;
    if (t.analytic_input)
      x = make_toeplitz(random_analytic_symbol(rng, s.max_degree));
    else if ((i / 2) % 2 == 0)
      x = make_toeplitz(random_nonanalytic_symbol(rng, s.max_degree));
    else
      x = make_toeplitz(random_symbol(rng, s.max_degree)) +
          ToeplitzElement::finite(random_correction(rng, s.max_correction));
    t.symbol = x.symbol().to_string();
    t.report = commutant_character(x, s.circle.lift_truncation, kSupGrid);
  });

  const double tol = s.tol("exact"), gap_tol = s.tol("lift_gap");
  const double h = 2.0 * std::numbers::pi / kSupGrid;
  std::size_t analytic = 0, rejected = 0, misclassified = 0, disagree = 0;
  double worst_gap = 0.0, worst_compression = 0.0, worst_commutator = 0.0;
  json lifts = json::array();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& t = out[i];
    const auto& r = t.report;
    const std::string at = "element " + std::to_string(i) + ": ";
    if (!r.criteria_agree) ++disagree;
    rec.require(r.criteria_agree, at + "commutant criteria disagree");
    const bool is_analytic = r.classification == CommutantClass::analytic_toeplitz;
    if (is_analytic != t.analytic_input) ++misclassified;
    rec.require(is_analytic == t.analytic_input, at + "classified " + to_string(r.classification));
    if (!t.analytic_input) {
      if (!is_analytic) ++rejected;
      continue;
    }
    if (!is_analytic || !r.lift) continue;
    ++analytic;
    const auto& l = *r.lift;
    const LaurentPoly& psi = l.multiplier;
    // The grid sup can sit below the true sup by at most M h^2 / 8.
    const double slack = psi.second_derivative_bound() * h * h / 8.0;
    const double sup = l.sup_bracket.lower, upper = l.sup_bracket.upper;
    const double gap = sup - l.truncation_lower;
    worst_gap = std::max(worst_gap, gap);
    worst_compression = std::max(worst_compression, l.compression_residual);
    worst_commutator = std::max(worst_commutator, l.extension_commutator);
    rec.require(l.truncation_lower <= sup + slack + tol,
                at + "truncation bound " + fmt(l.truncation_lower) + " above grid sup " + fmt(sup));
    rec.require(sup <= upper + tol, at + "grid sup above the l1 bound");
    rec.require(gap <= gap_tol, at + "bracket gap " + fmt(gap));
    rec.require(l.compression_residual <= tol, at + "lift does not compress to X");
    rec.require(l.extension_commutator <= tol, at + "lift does not commute with M_z");
    lifts.push_back({{"symbol", t.symbol},
                     {"truncation_lower", l.truncation_lower},
                     {"grid_sup", sup},
                     {"l1_upper", upper},
                     {"gap", gap}});
  }
  rec.metrics = {{"elements", out.size()},
                 {"analytic_classified", analytic},
                 {"rejected", rejected},
                 {"misclassified", misclassified},
                 {"criteria_disagreements", disagree},
                 {"lift_truncation", s.circle.lift_truncation},
                 {"max_bracket_gap", worst_gap},
                 {"max_compression_residual", worst_compression},
                 {"max_extension_commutator", worst_commutator},
                 {"lifts", lifts}};
}

void check_cross_section(const Scenario& s, RunContext&, CheckRecord& rec) {
  const LaurentPoly phi = parse_laurent(s.circle.cross_section_symbol, 1);
  const auto r = cross_section_isometry(phi, s.circle.max_truncation, s.tol("cross_section_limit"));
  // Closed form for the tridiagonal symbol z + zbar.
  const bool closed_form = phi == parse_laurent("z + zbar", 1);
  json levels = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < r.truncations.size(); ++i) {
    const double n = static_cast<double>(r.truncations[i]);
    json level = {{"n", r.truncations[i]}, {"lower", r.lower_bounds[i]}};
    if (closed_form) {
      const double exact = 2.0 * std::cos(std::numbers::pi / (n + 1));
      const double err = std::abs(r.lower_bounds[i] - exact);
      worst = std::max(worst, err);
      level["closed_form"] = exact;
      level["error"] = err;
      rec.require(err <= s.tol("cross_section"),
                  "N = " + std::to_string(r.truncations[i]) + ": off the closed form by " + fmt(err));
    }
    levels.push_back(level);
  }
  rec.require(r.monotone, "truncation norms not monotone");
  rec.require(r.gap <= s.tol("cross_section_limit"), "limit gap " + fmt(r.gap));
  rec.require(r.verdict == Verdict::pass, "cross-section verdict " + to_string(r.verdict));

  const LaurentPoly z = LaurentPoly::power(1), zbar = LaurentPoly::power(-1);
  const SymbolMatrix block{2, {z, LaurentPoly(1), LaurentPoly(1), zbar}};
  const auto b = cross_section_isometry(block, s.circle.block_truncation, s.tol("block"));
  const double lhs = b.lower_bounds.empty() ? 0.0 : b.lower_bounds.back();
  rec.require(std::abs(lhs - 1.0) <= s.tol("block"), "block truncation norm " + fmt(lhs));
  rec.require(std::abs(b.grid_sup - 1.0) <= s.tol("block"), "block symbol sup " + fmt(b.grid_sup));

  rec.metrics = {{"symbol", phi.to_string()},
                 {"levels", levels},
                 {"max_closed_form_error", closed_form ? json(worst) : json()},
                 {"grid_sup", r.grid_sup},
                 {"l1_upper", r.l1_upper},
                 {"limit_gap", r.gap},
                 {"monotone", r.monotone},
                 {"verdict", to_string(r.verdict)},
                 {"block", {{"truncation", s.circle.block_truncation},
                            {"truncation_norm", lhs},
                            {"symbol_sup", b.grid_sup},
                            {"verdict", to_string(b.verdict)}}}};
}

void check_determinism(const Scenario& s, RunContext&, CheckRecord& rec) {
  // Fixed, so the record itself does not depend on --threads.
  constexpr int many = 8;
  CheckRecord a, b;
  const std::string one = closure_metrics(s, 1, a).dump();
  const std::string par = closure_metrics(s, many, b).dump();
  rec.require(one == par, "results differ between 1 and " + std::to_string(many) + " threads");
  rec.metrics = {{"threads_compared", {1, many}},
                 {"digest_single", hex64(fnv1a(one))},
                 {"digest_parallel", hex64(fnv1a(par))},
                 {"identical", one == par}};
}

// ---- sphere -------------------------------------------------------------

void check_sphere_moment(const Scenario& s, RunContext& ctx, CheckRecord& rec) {
  struct Trial {
    int n = 0;
    Exponent alpha;
    double exact = 0, mean = 0, stderr_ = 0;
  };
  std::vector<Trial> out(sz(s.szego.moment_trials));
  parallel_for(out.size(), ctx.threads, [&](std::size_t i) {
    Rng rng = Rng::stream(s.seed, "sphere_moment", i);
    Trial& t = out[i];
    t.n = s.szego.n[i % s.szego.n.size()];
    t.alpha.resize(sz(t.n));
    for (auto& v : t.alpha) v = rng.uniform_int(0, 3);
    t.exact = sphere_moment(t.n, t.alpha).convert_to<double>();
    // Uniform on the sphere: normalized complex Gaussians.
    Rng mc = Rng::stream(s.seed, "sphere_moment/samples", i);
    std::vector<cplx> z(sz(t.n));
    double sum = 0, sum2 = 0;
    for (int k = 0; k < s.szego.mc_samples; ++k) {
      double r2 = 0;
      for (auto& v : z) {
        v = mc.complex_normal();
        r2 += std::norm(v);
      }
      double f = 1;
      for (std::size_t j = 0; j < z.size(); ++j) f *= std::pow(std::norm(z[j]) / r2, t.alpha[j]);
      sum += f;
      sum2 += f * f;
    }
    const double m = s.szego.mc_samples;
    t.mean = sum / m;
    t.stderr_ = std::sqrt(std::max(0.0, sum2 / m - t.mean * t.mean) / m);
  });
  const double k = s.tol("monte_carlo_sigma");
  json rows = json::array();
  double worst = 0;
  for (const auto& t : out) {
    const double z = t.stderr_ > 0 ? std::abs(t.mean - t.exact) / t.stderr_
                                   : (t.mean == t.exact ? 0.0 : INFINITY);
    worst = std::max(worst, z);
    rec.require(z <= k, "alpha " + json(t.alpha).dump() + ": " + fmt(z) + " sigma from exact");
    rows.push_back({{"n", t.n}, {"alpha", t.alpha}, {"exact", t.exact}, {"mean", t.mean},
                    {"stderr", t.stderr_}, {"sigmas", std::isfinite(z) ? json(z) : json()}});
  }
  rec.metrics = {{"samples", s.szego.mc_samples}, {"max_sigmas", worst}, {"trials", rows}};
}

void check_szego_isometry(const Scenario& s, RunContext&, CheckRecord& rec) {
  const double tol = s.tol("szego");
  json rows = json::array();
  for (int n : s.szego.n) {
    const auto t = szego_tuple(n, s.szego.d);
    const auto d = defect_report(t);
    const double comm = commutator_defect(t);
    const std::string at = "n = " + std::to_string(n) + ": ";
    rec.require(d.interior_defect <= tol, at + "interior defect " + fmt(d.interior_defect));
    rec.require(d.top_shell_defect <= tol, at + "top shell not -1, " + fmt(d.top_shell_defect));
    rec.require(d.off_diagonal <= tol, at + "top shell off-diagonal " + fmt(d.off_diagonal));
    rec.require(comm <= tol, at + "shifts do not commute, " + fmt(comm));
    rows.push_back({{"n", n},
                    {"d", s.szego.d},
                    {"interior_defect", d.interior_defect},
                    {"top_shell_defect", d.top_shell_defect},
                    {"top_shell_off_diagonal", d.off_diagonal},
                    {"top_shell_size", d.top_shell_size},
                    {"commutator_defect", comm}});
  }
  rec.metrics = {{"models", rows}};
}

void check_szego_fixed_point(const Scenario& s, RunContext& ctx, CheckRecord& rec) {
  struct Trial {
    int n = 0;
    std::string symbol;
    FixedPointResidual plain, planted;
  };
  const int d = s.szego.d;
  std::vector<SzegoTuple> tuples;
  for (int n : s.szego.n) tuples.push_back(szego_tuple(n, d));
  const std::size_t per = sz(s.szego.symbol_trials);
  std::vector<Trial> out(per * tuples.size());
  parallel_for(out.size(), ctx.threads, [&](std::size_t i) {
    const std::size_t which = i / per;
    const int n = s.szego.n[which];
    Rng rng = Rng::stream(s.seed, "szego_fixed_point", i);
    BiPoly phi(n);
    const int terms = rng.uniform_int(1, 4);
    for (int k = 0; k < terms; ++k) {
      Exponent a(sz(n)), b(sz(n));
      for (auto& v : a) v = rng.uniform_int(0, 1);
      for (auto& v : b) v = rng.uniform_int(0, 1);
      phi.add_term(a, b, rng.complex_normal());
    }
    if (phi.is_zero()) phi = BiPoly::constant(1.0, n);
    auto x = toeplitz_graded(phi, n, d);
    Trial& t = out[i];
    t.n = n;
    t.symbol = phi.to_string();
    t.plain = fixed_point_residual(x, tuples[which]);
    // Rank-one plant E_{beta alpha} with both indices in the interior.
    std::vector<Exponent> inner;
    for (const auto& a : x.basis->indices())
      if (total_degree(a) <= x.safe_degree - 1) inner.push_back(a);
    const auto& beta = inner[sz(rng.uniform_int(0, static_cast<int>(inner.size()) - 1))];
    const auto& alpha = inner[sz(rng.uniform_int(0, static_cast<int>(inner.size()) - 1))];
    x.set(beta, alpha, x.entry(beta, alpha) + std::polar(1.0, rng.uniform(0.0, 2 * std::numbers::pi)));
    t.planted = fixed_point_residual(x, tuples[which]);
  });
  const double tol = s.tol("fixed_point"), planted = s.tol("planted");
  std::vector<double> plain, plants;
  json rows = json::array();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& t = out[i];
    plain.push_back(t.plain.interior);
    plants.push_back(t.planted.interior);
    const std::string at = "n = " + std::to_string(t.n) + ", symbol " + t.symbol + ": ";
    rec.require(t.plain.interior <= tol, at + "interior residual " + fmt(t.plain.interior));
    rec.require(t.planted.interior >= planted, at + "planted residual only " + fmt(t.planted.interior));
    rows.push_back({{"n", t.n},
                    {"symbol", t.symbol},
                    {"interior", t.plain.interior},
                    {"boundary", t.plain.boundary},
                    {"planted_interior", t.planted.interior}});
  }
  rec.metrics = {{"d", d},
                 {"max_interior_residual", max_of(plain)},
                 {"min_planted_residual", min_of(plants)},
                 {"symbols", rows}};
}

void check_normal_extension(const Scenario& s, RunContext&, CheckRecord& rec) {
  const std::vector<BiPoly> symbols{parse_bipoly("z1", 2), parse_bipoly("z1*zbar2 + 2*z2", 2),
                                    parse_bipoly("zbar1*z1 - z2^2", 2)};
  const auto r = normal_extension_check(2, 4, symbols);
  const double tol = s.tol("szego");
  rec.require(r.adjoint_defect == 0.0, "adjoint identity off by " + fmt(r.adjoint_defect));
  rec.require(r.sphere_defect == 0.0, "sphere identity off by " + fmt(r.sphere_defect));
  rec.require(r.shift_compression <= tol, "shift compression " + fmt(r.shift_compression));
  rec.require(r.symbol_compression <= tol, "symbol compression " + fmt(r.symbol_compression));
  json syms = json::array();
  for (const auto& p : symbols) syms.push_back(p.to_string());
  rec.metrics = {{"n", 2},
                 {"degree", r.degree},
                 {"dimension", r.dimension},
                 {"symbols", syms},
                 {"adjoint_defect", r.adjoint_defect},
                 {"sphere_defect", r.sphere_defect},
                 {"shift_compression", r.shift_compression},
                 {"symbol_compression", r.symbol_compression}};
}

// ---- bidisc -------------------------------------------------------------

void check_gamma(const Scenario& s, RunContext& ctx, CheckRecord& rec) {
  struct Trial {
    bool zero = false;
    double upper = 0, mismatch = 0;
    GammaVerdict corrected = GammaVerdict::toeplitz;
    double corrected_lower = 0;
  };
  const int deg = std::min(4, s.max_degree);
  const std::size_t n = s.polydisc.truncation;
  std::vector<Trial> out(sz(s.polydisc.trials));
  parallel_for(out.size(), ctx.threads, [&](std::size_t i) {
    Rng rng = Rng::stream(s.seed, "gamma_equation", i);
    TensorElement x;
    const int k = rng.uniform_int(1, 3);
    for (int j = 0; j < k; ++j)
      x += TensorElement::elementary(make_toeplitz(random_symbol(rng, deg)),
                                     make_toeplitz(random_symbol(rng, deg)));
    const auto r = gamma_equation_residual(x, n);
    // Same sum with one factor corrected: must be rejected.
    const auto bad = x + TensorElement::elementary(ToeplitzElement::unit(1, 0),
                                                   make_toeplitz(random_symbol(rng, deg)) +
                                                       ToeplitzElement::identity());
    const auto rb = gamma_equation_residual(bad, n);
    out[i] = {r.residual.is_zero(), r.bracket.upper, r.scaling_mismatch, rb.verdict, rb.bracket.lower};
  });
  const double tol = s.tol("gamma");
  std::size_t nonzero = 0, accepted_bad = 0;
  std::vector<double> uppers, mism;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& t = out[i];
    const std::string at = "sum " + std::to_string(i) + ": ";
    if (!t.zero) ++nonzero;
    if (t.corrected != GammaVerdict::not_toeplitz) ++accepted_bad;
    uppers.push_back(t.upper);
    mism.push_back(t.mismatch);
    rec.require(t.zero && t.upper == 0.0, at + "residual not exactly 0, upper " + fmt(t.upper));
    rec.require(t.mismatch <= tol, at + "scaled form mismatch " + fmt(t.mismatch));
    rec.require(t.corrected == GammaVerdict::not_toeplitz, at + "corrected sum accepted");
  }
  const auto I = ToeplitzElement::identity();
  const auto e = gamma_equation_residual(TensorElement::elementary(ToeplitzElement::unit(0, 0), I), n);
  const double et = s.tol("exact");
  rec.require(e.bracket.lower <= 1.0 + et && e.bracket.upper >= 1.0 - et,
              "E00 (x) I bracket [" + fmt(e.bracket.lower) + ", " + fmt(e.bracket.upper) +
                  "] misses 1");
  rec.require(e.verdict == GammaVerdict::not_toeplitz, "E00 (x) I accepted");
  rec.metrics = {{"sums", out.size()},
                 {"truncation", n},
                 {"nonzero_residuals", nonzero},
                 {"max_residual_upper", max_of(uppers)},
                 {"max_scaling_mismatch", max_of(mism)},
                 {"corrected_accepted", accepted_bad},
                 {"e00_bracket", {e.bracket.lower, e.bracket.upper}},
                 {"e00_verdict", to_string(e.verdict)}};
}

void check_scaled_isometry(const Scenario& s, RunContext&, CheckRecord& rec) {
  const auto r = scaled_isometry_check(true);
  const auto u = scaled_isometry_check(false);
  const auto ub = norm_bracket(u.defect, s.polydisc.truncation);
  const double et = s.tol("exact");
  rec.require(r.defect.is_zero() && r.residual == 0.0, "scaled defect " + fmt(r.residual));
  rec.require(r.per_factor == 0.0, "T_z not isometric, " + fmt(r.per_factor));
  rec.require(ub.lower <= 1.0 + et && ub.upper >= 1.0 - et && ub.lower > 0.5,
              "unscaled defect bracket [" + fmt(ub.lower) + ", " + fmt(ub.upper) + "] misses 1");
  rec.metrics = {{"scaled_residual", r.residual},
                 {"per_factor", r.per_factor},
                 {"unscaled_bracket", {ub.lower, ub.upper}}};
}

// ---- weighted Hardy -----------------------------------------------------

void check_weighted_hardy(const Scenario& s, RunContext& ctx, CheckRecord& rec) {
  const CircleMeasure m(s.measures.density);
  const auto& degrees = s.measures.degrees;
  const double iso_tol = s.tol("isometry");

  std::vector<double> iso(degrees.size());
  parallel_for(degrees.size(), ctx.threads,
               [&](std::size_t i) { iso[i] = interior_isometry_defect(m, degrees[i]); });
  json iso_rows = json::array();
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    rec.require(iso[i] <= iso_tol, "d = " + std::to_string(degrees[i]) + ": isometry defect " + fmt(iso[i]));
    iso_rows.push_back({{"d", degrees[i]}, {"defect", iso[i]}});
  }

  const std::vector<std::string> bh_symbols{"z + zbar", "z^2 + 0.5*zbar", "1 - z*0.5 + zbar^3"};
  json bh_rows = json::array();
  for (const auto& text : bh_symbols) {
    const LaurentPoly phi = parse_laurent(text, 1);
    const auto r = brown_halmos_residual(phi, m, s.measures.window, degrees);
    bool nonincreasing = true;
    for (std::size_t k = 1; k < r.size(); ++k) nonincreasing = nonincreasing && r[k] <= r[k - 1];
    rec.require(nonincreasing, "symbol " + text + ": residual increases across degrees");
    bh_rows.push_back({{"symbol", phi.to_string()}, {"residuals", r}, {"nonincreasing", nonincreasing}});
  }

  // A planted non-Toeplitz operator must show up in the same window.
  const int d0 = *std::min_element(degrees.begin(), degrees.end());
  const auto b0 = onb(m, d0);
  CMatrix e00(sz(d0 + 1), sz(d0 + 1));
  e00(0, 0) = 1.0;
  const double planted = brown_halmos_residual(e00, truncated_toeplitz(LaurentPoly::power(1), m, b0),
                                               s.measures.window);
  rec.require(planted >= s.tol("planted"), "planted E00 residual only " + fmt(planted));

  // Lebesgue measure: the circle truncations, entry for entry.
  const auto leb = CircleMeasure::lebesgue();
  std::size_t mismatches = 0;
  const int lt = std::min(s.trials, 20);
  for (int t = 0; t < lt; ++t) {
    Rng rng = Rng::stream(s.seed, "weighted_hardy/lebesgue", sz(t));
    const LaurentPoly phi = random_symbol(rng, std::min(s.max_degree, d0 / 2));
    if (!(truncated_toeplitz(phi, leb, d0) == make_toeplitz(phi).truncation(sz(d0 + 1)))) ++mismatches;
  }
  rec.require(mismatches == 0, std::to_string(mismatches) + " Lebesgue truncations differ from the circle");

  rec.metrics = {{"density", to_json(m)["density"]},
                 {"density_grid_minimum", m.grid_minimum()},
                 {"window", s.measures.window},
                 {"isometry", iso_rows},
                 {"brown_halmos", bh_rows},
                 {"planted_residual", planted},
                 {"lebesgue_trials", lt},
                 {"lebesgue_mismatches", mismatches}};
}

// ---- spectra ------------------------------------------------------------

std::vector<LaurentPoly> spectra_symbols(const Scenario& s) {
  std::vector<LaurentPoly> out;
  for (int i = 0; i < s.spectra.symbols; ++i) {
    Rng rng = Rng::stream(s.seed, "spectra/symbol", sz(i));
    out.push_back(random_symbol(rng, s.spectra.max_degree));
  }
  for (const auto& text : s.spectra.extra_symbols) out.push_back(parse_laurent(text, 1));
  return out;
}

const std::vector<SpectrumReport>& spectra_reports(const Scenario& s, RunContext& ctx) {
  if (ctx.spectra) return *ctx.spectra;
  const auto symbols = spectra_symbols(s);
  auto reports = std::make_shared<std::vector<SpectrumReport>>(symbols.size());
  parallel_for(symbols.size(), ctx.threads, [&](std::size_t i) {
    Rng rng = Rng::stream(s.seed, "spectra/probes", i);
    (*reports)[i] = spectrum_report(symbols[i], s.spectra.grid, s.spectra.lambda_side, rng,
                                    s.spectra.probes);
  });
  for (std::size_t i = 0; i < reports->size(); ++i)
    ctx.artifacts["spectrum_" + std::to_string(i) + ".csv"] = spectrum_csv((*reports)[i]);
  ctx.spectra = reports;
  return *ctx.spectra;
}

void check_hartman_wintner(const Scenario& s, RunContext& ctx, CheckRecord& rec) {
  const auto& reps = spectra_reports(s, ctx);
  json rows = json::array();
  std::size_t total = 0, probes = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto& r = reps[i];
    total += r.hartman_wintner_counterexamples.size();
    probes += r.probes;
    rec.require(r.hartman_wintner, "symbol " + r.symbol + ": " +
                                       std::to_string(r.hartman_wintner_counterexamples.size()) +
                                       " counterexamples");
    rows.push_back({{"index", i},
                    {"symbol", r.symbol},
                    {"samples", r.samples.size()},
                    {"probes", r.probes},
                    {"probe_attempts", r.probe_attempts},
                    {"counterexamples", r.hartman_wintner_counterexamples.size()}});
  }
  rec.metrics = {{"symbols", reps.size()},
                 {"grid", s.spectra.grid},
                 {"certified_probes", probes},
                 {"counterexamples", total},
                 {"per_symbol", rows}};
}

void check_convex_bound(const Scenario& s, RunContext& ctx, CheckRecord& rec) {
  const auto& reps = spectra_reports(s, ctx);
  json rows = json::array();
  std::size_t total = 0;
  double worst = 0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const auto& r = reps[i];
    std::size_t on = 0, wind = 0, outside = 0;
    for (const auto& l : r.lambdas) {
      if (l.status == Membership::on_curve) ++on;
      else if (l.status == Membership::winding_nonzero) ++wind;
      else ++outside;
    }
    for (const auto& c : r.convex_counterexamples) worst = std::max(worst, c.detail);
    total += r.convex_counterexamples.size();
    rec.require(r.convex_bound, "symbol " + r.symbol + ": " +
                                    std::to_string(r.convex_counterexamples.size()) +
                                    " points outside the hull");
    rows.push_back({{"index", i},
                    {"symbol", r.symbol},
                    {"curve_tolerance", r.curve_tolerance},
                    {"hull_vertices", r.hull.size()},
                    {"on_curve", on},
                    {"winding_nonzero", wind},
                    {"outside", outside},
                    {"counterexamples", r.convex_counterexamples.size()}});
  }
  rec.metrics = {{"symbols", reps.size()},
                 {"lambda_grid", {s.spectra.lambda_side, s.spectra.lambda_side}},
                 {"counterexamples", total},
                 {"max_hull_distance", worst},
                 {"per_symbol", rows}};
}

void check_numerical_range(const Scenario& s, RunContext& ctx, CheckRecord& rec) {
  const auto symbols = spectra_symbols(s);
  constexpr int kThetas = 16;
  std::vector<double> thetas;
  for (int k = 0; k < kThetas; ++k) thetas.push_back(2 * std::numbers::pi * k / kThetas);
  std::vector<SupportReport> out(symbols.size());
  std::vector<std::size_t> truncs(symbols.size());
  parallel_for(symbols.size(), ctx.threads, [&](std::size_t i) {
    const auto x = make_toeplitz(symbols[i]);
    truncs[i] = std::max<std::size_t>(128, 4 * sz(x.band()));
    out[i] = numerical_range_support(x, thetas, truncs[i], kSupGrid);
  });
  json rows = json::array();
  double worst_margin = INFINITY;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& r = out[i];
    double margin = INFINITY;
    for (std::size_t k = 0; k < r.values.size(); ++k) margin = std::min(margin, r.bounds[k] - r.values[k]);
    worst_margin = std::min(worst_margin, margin);
    rec.require(r.within_bounds, "symbol " + symbols[i].to_string() + ": support above the bound by " +
                                     fmt(-margin));
    rows.push_back({{"symbol", symbols[i].to_string()},
                    {"truncation", truncs[i]},
                    {"h", r.values},
                    {"bound", r.bounds},
                    {"min_margin", margin}});
  }
  rec.metrics = {{"thetas", kThetas},
                 {"min_margin", std::isfinite(worst_margin) ? json(worst_margin) : json()},
                 {"per_symbol", rows}};
}

// ---- registry -----------------------------------------------------------

using CheckFn = void (*)(const Scenario&, RunContext&, CheckRecord&);

const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> r{
      {"closure_homomorphism", check_closure},
      {"thm2_1_identities", check_averaging},
      {"brown_halmos", check_brown_halmos},
      {"commutant_lifting", check_commutant},
      {"cross_section", check_cross_section},
      {"determinism", check_determinism},
      {"sphere_moment", check_sphere_moment},
      {"szego_isometry", check_szego_isometry},
      {"szego_fixed_point", check_szego_fixed_point},
      {"normal_extension", check_normal_extension},
      {"gamma_equation", check_gamma},
      {"scaled_isometry", check_scaled_isometry},
      {"weighted_hardy", check_weighted_hardy},
      {"hartman_wintner", check_hartman_wintner},
      {"convex_bound", check_convex_bound},
      {"numerical_range", check_numerical_range},
  };
  return r;
}

// Inputs that determine a check's outcome, for the digest.
json check_inputs(const std::string& suite, const Scenario& s) {
  const json full = to_json(s);
  json in = {{"seed", s.seed},
             {"trials", s.trials},
             {"max_degree", s.max_degree},
             {"max_correction", s.max_correction},
             {"tolerances", full["tolerances"]}};
  if (suite == "circle") in["circle"] = full["circle"];
  if (suite == "szego") in["szego"] = full["szego"];
  if (suite == "polydisc") in["polydisc"] = full["polydisc"];
  if (suite == "measures") in["measures"] = full["measures"];
  if (suite == "spectra") in["spectra"] = full["spectra"];
  return in;
}

}  // namespace

void CheckRecord::require(bool ok, const std::string& what) {
  if (ok) return;
  pass = false;
  if (failures.size() < kMaxFailureLines) failures.push_back(what);
  else if (failures.size() == kMaxFailureLines) failures.push_back("...");
}

json to_json(const CheckRecord& r) {
  return {{"id", r.id},
          {"suite", r.suite},
          {"tag", r.tag},
          {"title", r.title},
          {"inputs_digest", r.inputs_digest},
          {"metrics", r.metrics},
          {"verdict", r.pass ? "PASS" : "FAIL"},
          {"failures", r.failures}};
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    const json j = json::parse(generated::kCatalog);
    std::vector<CatalogEntry> out;
    for (const auto& [id, fn] : registry()) {
      if (!j.contains(id)) throw std::logic_error("catalog has no entry for check " + id);
      const json& e = j.at(id);
      out.push_back({id, e.at("suite"), e.at("tag"), e.at("title"), e.at("model"), e.at("criterion")});
    }
    if (j.size() != out.size()) throw std::logic_error("catalog lists checks that do not exist");
    return out;
  }();
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  for (const auto& e : catalog())
    if (e.id == id) return e;
  std::string ids;
  for (const auto& e : catalog()) ids += (ids.empty() ? "" : ", ") + e.id;
  throw UsageError("check", "unknown check '" + id + "'; available: " + ids);
}

std::string explain(const std::string& id) {
  const auto& e = catalog_entry(id);
  std::ostringstream os;
  os << e.id << " [" << e.suite << "]\n"
     << "  statement: " << e.tag << "\n"
     << "  " << e.title << "\n"
     << "  model: " << e.model << "\n"
     << "  pass criterion: " << e.criterion << "\n";
  return os.str();
}

std::vector<std::string> checks_for_suite(const std::string& suite) {
  std::vector<std::string> out;
  for (const auto& e : catalog())
    if (suite == "all" || e.suite == suite) out.push_back(e.id);
  return out;
}

CheckRecord run_check(const std::string& id, const Scenario& s, RunContext& ctx) {
  const auto& e = catalog_entry(id);
  CheckRecord rec;
  rec.id = e.id;
  rec.suite = e.suite;
  rec.tag = e.tag;
  rec.title = e.title;
  rec.inputs_digest = hex64(fnv1a(id + "|" + check_inputs(e.suite, s).dump()));
  for (const auto& [rid, fn] : registry())
    if (rid == id) {
      try {
        fn(s, ctx, rec);
      } catch (const Error& err) {
        rec.require(false, std::string("error: ") + err.what());
      }
    }
  return rec;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace sphiso
