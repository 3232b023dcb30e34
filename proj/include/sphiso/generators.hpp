#pragma once

// Random inputs shared by the scenario checks and the test suites.

#include "sphiso/circle.hpp"
#include "sphiso/random.hpp"

namespace sphiso {

// Symbol with exponents in [-max_degree, max_degree] and 1..(2d+1) terms.
LaurentPoly random_symbol(Rng& rng, int max_degree);
// Symbol with exponents in [0, max_degree] and a nonzero top coefficient.
LaurentPoly random_analytic_symbol(Rng& rng, int max_degree);
// Symbol with at least one strictly negative exponent.
LaurentPoly random_nonanalytic_symbol(Rng& rng, int max_degree);
// Dense r x c matrix with 1 <= r, c <= max_size.
CMatrix random_correction(Rng& rng, std::size_t max_size);
// T_phi + F with probability 1/2 of a nonzero F.
ToeplitzElement random_element(Rng& rng, int max_degree, std::size_t max_correction);

}  // namespace sphiso
