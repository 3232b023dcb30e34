#pragma once

// JSON forms of the model types. Doubles are written in shortest
// round-trip form, so from_json(to_json(x)) == x bit for bit.
//
//   complex            [re, im]
//   LaurentPoly        {"<e1,e2,...>": [re, im], ...}
//   ToeplitzElement    {"symbol": ..., "correction": {"rows", "cols", "entries"}}
//   TensorElement      [[A, B], ...]
//   CircleMeasure      {"density": {"0": 1.0, "1": [0.4, 0.0]}}

#include <json.hpp>
#include <string>

#include "sphiso/circle.hpp"
#include "sphiso/hardy.hpp"
#include "sphiso/polydisc.hpp"
#include "sphiso/spectra.hpp"
#include "sphiso/szego.hpp"

namespace sphiso {

using json = nlohmann::json;

json to_json(cplx c);
cplx complex_from_json(const json& j);

json to_json(const LaurentPoly& p);
LaurentPoly laurent_from_json(const json& j, int nvars = 1);

json to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

json to_json(const ToeplitzElement& x);
ToeplitzElement toeplitz_from_json(const json& j);

json to_json(const TensorElement& x);
TensorElement tensor_from_json(const json& j);

json to_json(const GradedOperator& g);
GradedOperator graded_from_json(const json& j);

json to_json(const CircleMeasure& m);
CircleMeasure measure_from_json(const json& j, double min_density = 1e-9);

// Summary JSON (counts, hull, counterexamples, samples); the per-lambda
// statuses go to the CSV.
json to_json(const SpectrumReport& r);
std::string spectrum_csv(const SpectrumReport& r);

}  // namespace sphiso
