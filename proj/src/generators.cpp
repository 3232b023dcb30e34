#include "sphiso/generators.hpp"

namespace sphiso {

LaurentPoly random_symbol(Rng& rng, int max_degree) {
  LaurentPoly p(1);
  const int terms = rng.uniform_int(1, 2 * max_degree + 1);
  for (int t = 0; t < terms; ++t)
    p.add_term({rng.uniform_int(-max_degree, max_degree)}, rng.complex_normal());
  return p;
}

LaurentPoly random_analytic_symbol(Rng& rng, int max_degree) {
  LaurentPoly p(1);
  const int top = rng.uniform_int(1, max_degree);
  p.add_term({top}, rng.complex_normal());
  const int extra = rng.uniform_int(0, top);
  for (int t = 0; t < extra; ++t) p.add_term({rng.uniform_int(0, top - 1)}, rng.complex_normal());
  return p;
}

LaurentPoly random_nonanalytic_symbol(Rng& rng, int max_degree) {
  LaurentPoly p = random_symbol(rng, max_degree);
  p.add_term({-rng.uniform_int(1, max_degree)}, rng.complex_normal() + cplx{3.0, 0.0});
  // A cancellation above could remove every negative exponent; retry.
  while (p.is_analytic()) p.add_term({-1}, 1.0);
  return p;
}

CMatrix random_correction(Rng& rng, std::size_t max_size) {
  const auto r = static_cast<std::size_t>(rng.uniform_int(1, static_cast<int>(max_size)));
  const auto c = static_cast<std::size_t>(rng.uniform_int(1, static_cast<int>(max_size)));
  CMatrix f(r, c);
  for (auto& v : f.entries()) v = rng.complex_normal();
  // Make sure the last row and column survive trimming.
  f(r - 1, c - 1) += cplx{1.0, 0.0};
  return f;
}

ToeplitzElement random_element(Rng& rng, int max_degree, std::size_t max_correction) {
  LaurentPoly phi = random_symbol(rng, max_degree);
  if (rng.uniform() < 0.5) return make_toeplitz(phi);
  return {std::move(phi), random_correction(rng, max_correction)};
}

}  // namespace sphiso
