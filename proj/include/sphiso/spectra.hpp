#pragma once

// Spectra of banded Toeplitz operators decided by winding numbers of the
// symbol curve, plus numerical-range support values of truncations. No
// nonnormal eigensolver is involved.

#include <string>
#include <vector>

#include "sphiso/circle.hpp"
#include "sphiso/random.hpp"
#include "sphiso/symbols.hpp"

namespace sphiso {

enum class Membership { on_curve, winding_nonzero, outside };
std::string to_string(Membership m);

// Samples of phi on an N-point grid plus what is needed to classify many
// lambdas quickly: crossing-number winding, bounding-box rejection.
class CurveSamples {
 public:
  // tolerance < 0 selects curve_tolerance(phi, grid_size).
  CurveSamples(const LaurentPoly& phi, int grid_size, double tolerance = -1.0);

  const std::vector<cplx>& samples() const noexcept { return samples_; }
  int grid_size() const noexcept { return grid_size_; }
  double tolerance() const noexcept { return tolerance_; }
  double l1() const noexcept { return l1_; }

  double min_distance(cplx lambda) const;
  int winding(cplx lambda) const;  // polygon winding, valid off the curve
  Membership classify(cplx lambda) const;
  // Certified winding: nullopt-like flag when lambda is within the curve
  // band of width L*h (L the derivative bound, h the spacing).
  bool certified(cplx lambda, int& winding_out) const;

 private:
  std::vector<cplx> samples_;
  int grid_size_;
  double tolerance_, l1_, lipschitz_;
  double re_lo_, re_hi_, im_lo_, im_hi_;
};

Membership spectrum_membership(const LaurentPoly& phi, cplx lambda, int grid_size = 1024);

// 200 x 200 (side x side) grid over the sample bounding box inflated by 20%.
std::vector<cplx> lambda_grid(const CurveSamples& curve, int side = 200);

struct LambdaStatus {
  cplx lambda;
  Membership status;
};

struct Counterexample {
  cplx lambda;
  Membership status;
  double detail = 0.0;  // hull distance, or probe distance to the curve
};

struct SpectrumReport {
  std::string symbol;
  int grid_size = 0;
  double curve_tolerance = 0.0;
  std::vector<cplx> samples;
  std::vector<LambdaStatus> lambdas;
  std::vector<cplx> hull;
  std::size_t probes = 0;           // near-curve winding-nonzero probes tested
  std::size_t probe_attempts = 0;
  bool hartman_wintner = true;
  bool convex_bound = true;
  std::vector<Counterexample> hartman_wintner_counterexamples;
  std::vector<Counterexample> convex_counterexamples;
};

// Every essential-range sample is a spectral point; near-curve points with
// certified nonzero winding must not be classified OUTSIDE.
void hartman_wintner_check(const LaurentPoly& phi, int grid_size, Rng& rng, SpectrumReport& out,
                           int probes = 100);
// Every non-OUTSIDE lambda lies in the hull of the samples: within 1e-8
// for winding points, within the curve tolerance for on-curve points.
void convex_bound_check(const LaurentPoly& phi, int grid_size, const std::vector<cplx>& lambdas,
                        SpectrumReport& out);

SpectrumReport spectrum_report(const LaurentPoly& phi, int grid_size, int lambda_side, Rng& rng,
                               int probes = 100);

struct SupportReport {
  std::vector<double> thetas;
  std::vector<double> values;  // h(theta) on the truncation
  std::vector<double> bounds;  // symbol bound + |F| + 1e-8
  bool within_bounds = true;
};

// h(theta) = max eigenvalue of Re(e^{i theta} X_N).
SupportReport numerical_range_support(const ToeplitzElement& x, const std::vector<double>& thetas,
                                      std::size_t trunc, int grid_size = 4096);

}  // namespace sphiso
