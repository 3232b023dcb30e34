#include "sphiso/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "sphiso/errors.hpp"

namespace sphiso {

namespace {

constexpr double kHullTol = 1e-8;
// Fine grids tried, in order, to certify a probe's winding number.
constexpr int kProbeGrids[] = {4096, 16384, 65536, 131072};

}  // namespace

std::string to_string(Membership m) {
  switch (m) {
    case Membership::on_curve: return "ON_CURVE";
    case Membership::winding_nonzero: return "WINDING_NONZERO";
    case Membership::outside: return "OUTSIDE";
  }
  return "?";
}

CurveSamples::CurveSamples(const LaurentPoly& phi, int grid_size, double tolerance)
    : grid_size_(grid_size), l1_(phi.l1_norm()), lipschitz_(phi.derivative_bound()) {
  if (phi.nvars() != 1) throw PreconditionError("spectra: one-variable symbol required");
  samples_ = eval_grid(phi, grid_size).samples;
  tolerance_ = tolerance < 0 ? curve_tolerance(phi, grid_size) : tolerance;
  re_lo_ = im_lo_ = INFINITY;
  re_hi_ = im_hi_ = -INFINITY;
  for (cplx v : samples_) {
    re_lo_ = std::min(re_lo_, v.real());
    re_hi_ = std::max(re_hi_, v.real());
    im_lo_ = std::min(im_lo_, v.imag());
    im_hi_ = std::max(im_hi_, v.imag());
  }
}

double CurveSamples::min_distance(cplx lambda) const {
  double best = INFINITY;
  for (cplx v : samples_) best = std::min(best, std::norm(v - lambda));
  return std::sqrt(best);
}

int CurveSamples::winding(cplx lambda) const {
  // Signed upward / downward crossings of the ray to the right of lambda.
  int w = 0;
  const std::size_t n = samples_.size();
  const double y = lambda.imag();
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = samples_[k], b = samples_[(k + 1) % n];
    const double side = (b.real() - a.real()) * (y - a.imag()) -
                        (lambda.real() - a.real()) * (b.imag() - a.imag());
    if (a.imag() <= y) {
      if (b.imag() > y && side > 0) ++w;
    } else if (b.imag() <= y && side < 0) {
      --w;
    }
  }
  return w;
}

Membership CurveSamples::classify(cplx lambda) const {
  // A few ulps of room: samples of c z^k sit exactly on |lambda| = l1.
  if (std::abs(lambda) > l1_ * (1.0 + 1e-14)) return Membership::outside;
  // Farther than the band from the sample box: the polygon winds zero times.
  if (lambda.real() < re_lo_ - tolerance_ || lambda.real() > re_hi_ + tolerance_ ||
      lambda.imag() < im_lo_ - tolerance_ || lambda.imag() > im_hi_ + tolerance_)
    return Membership::outside;
  if (min_distance(lambda) <= tolerance_) return Membership::on_curve;
  return winding(lambda) != 0 ? Membership::winding_nonzero : Membership::outside;
}

bool CurveSamples::certified(cplx lambda, int& winding_out) const {
  const double h = 2.0 * std::numbers::pi / grid_size_;
  if (min_distance(lambda) <= lipschitz_ * h) return false;
  winding_out = winding(lambda);
  return true;
}

Membership spectrum_membership(const LaurentPoly& phi, cplx lambda, int grid_size) {
  return CurveSamples(phi, grid_size).classify(lambda);
}

std::vector<cplx> lambda_grid(const CurveSamples& curve, int side) {
  if (side < 2) throw PreconditionError("lambda_grid: side must be >= 2");
  double re_lo = INFINITY, re_hi = -INFINITY, im_lo = INFINITY, im_hi = -INFINITY;
  for (cplx v : curve.samples()) {
    re_lo = std::min(re_lo, v.real());
    re_hi = std::max(re_hi, v.real());
    im_lo = std::min(im_lo, v.imag());
    im_hi = std::max(im_hi, v.imag());
  }
  // A flat box (real-valued symbol) borrows a fifth of the other side.
  const double big = std::max({re_hi - re_lo, im_hi - im_lo, 1e-3});
  const double w = std::max(re_hi - re_lo, 0.2 * big), h = std::max(im_hi - im_lo, 0.2 * big);
  const cplx c{(re_lo + re_hi) / 2, (im_lo + im_hi) / 2};
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(side * side));
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j)
      out.push_back(c + cplx{1.2 * w * (j / (side - 1.0) - 0.5), 1.2 * h * (i / (side - 1.0) - 0.5)});
  return out;
}

void hartman_wintner_check(const LaurentPoly& phi, int grid_size, Rng& rng, SpectrumReport& out,
                           int probes) {
  const CurveSamples curve(phi, grid_size);
  for (cplx v : curve.samples()) {
    const Membership m = curve.classify(v);
    if (m == Membership::outside) out.hartman_wintner_counterexamples.push_back({v, m, 0.0});
  }

  std::vector<std::unique_ptr<CurveSamples>> fine(std::size(kProbeGrids));
  const std::size_t max_attempts = static_cast<std::size_t>(20 * probes);
  while (out.probes < static_cast<std::size_t>(probes) && out.probe_attempts < max_attempts) {
    ++out.probe_attempts;
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = rng.uniform(0.001, 0.01);
    const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const cplx lambda = phi.eval(std::polar(1.0, theta)) + std::polar(r, a);
    int w = 0;
    bool ok = false;
    for (std::size_t k = 0; k < fine.size() && !ok; ++k) {
      if (!fine[k]) fine[k] = std::make_unique<CurveSamples>(phi, kProbeGrids[k]);
      ok = fine[k]->certified(lambda, w);
    }
    if (!ok || w == 0) continue;
    ++out.probes;
    const Membership m = curve.classify(lambda);
    if (m == Membership::outside)
      out.hartman_wintner_counterexamples.push_back({lambda, m, curve.min_distance(lambda)});
  }
  out.hartman_wintner = out.hartman_wintner_counterexamples.empty();
}

void convex_bound_check(const LaurentPoly& phi, int grid_size, const std::vector<cplx>& lambdas,
                        SpectrumReport& out) {
  const CurveSamples curve(phi, grid_size);
  const ConvexHull hull(curve.samples());
  out.hull = hull.vertices();
  out.lambdas.clear();
  out.lambdas.reserve(lambdas.size());
  for (cplx l : lambdas) {
    const Membership m = curve.classify(l);
    out.lambdas.push_back({l, m});
    if (m == Membership::outside) continue;
    const double dist = hull.distance(l);
    const double tol = m == Membership::on_curve ? std::max(kHullTol, curve.tolerance()) : kHullTol;
    if (dist > tol) out.convex_counterexamples.push_back({l, m, dist});
  }
  out.convex_bound = out.convex_counterexamples.empty();
}

SpectrumReport spectrum_report(const LaurentPoly& phi, int grid_size, int lambda_side, Rng& rng,
                               int probes) {
  SpectrumReport r;
  r.symbol = phi.to_string();
  r.grid_size = grid_size;
  const CurveSamples curve(phi, grid_size);
  r.curve_tolerance = curve.tolerance();
  r.samples = curve.samples();
  hartman_wintner_check(phi, grid_size, rng, r, probes);
  convex_bound_check(phi, grid_size, lambda_grid(curve, lambda_side), r);
  return r;
}

SupportReport numerical_range_support(const ToeplitzElement& x, const std::vector<double>& thetas,
                                      std::size_t trunc, int grid_size) {
  const std::size_t need = 4 * (static_cast<std::size_t>(x.band()) + x.active_size());
  if (trunc < need)
    throw PreconditionError("numerical_range_support: truncation must be >= " +
                            std::to_string(need));
  const CMatrix xn = x.truncation(trunc);
  const LaurentPoly& phi = x.symbol();
  const int g = std::max(grid_size, 4 * std::max(1, phi.max_abs_exponent()));
  const auto samples = eval_grid(phi.is_zero() ? LaurentPoly::constant(0.0) : phi, g).samples;
  const double h = 2.0 * std::numbers::pi / g;
  // Grid max of a function with |f''| <= M misses the true max by <= M h^2 / 8.
  const double slack = phi.second_derivative_bound() * h * h / 8.0 + x.correction().frobenius();

  SupportReport rep;
  rep.thetas = thetas;
  for (double t : thetas) {
    const cplx e = std::polar(1.0, t);
    CMatrix a = xn * e;
    a = (a + a.adjoint()) * cplx{0.5};
    const double v = herm_max_eig(a, 1e-12);
    double sup = -INFINITY;
    for (cplx s : samples) sup = std::max(sup, (e * s).real());
    const double bound = sup + slack + 1e-8;
    rep.values.push_back(v);
    rep.bounds.push_back(bound);
    rep.within_bounds = rep.within_bounds && v <= bound;
  }
  return rep;
}

}  // namespace sphiso
