#include "sphiso/serialize.hpp"

#include <sstream>

#include "sphiso/errors.hpp"

namespace sphiso {

namespace {

std::string exponent_key(const Exponent& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(e[i]);
  }
  return s;
}

Exponent parse_key(const std::string& key) {
  Exponent e;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    const std::size_t comma = std::min(key.find(',', pos), key.size());
    const std::string part = key.substr(pos, comma - pos);
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (part.empty() || used != part.size()) throw ParseError("bad exponent key '" + key + "'");
    e.push_back(v);
    pos = comma + 1;
  }
  return e;
}

Exponent int_list(const json& j) {
  if (!j.is_array()) throw ParseError("expected an integer list");
  Exponent e;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ParseError("expected an integer list");
    e.push_back(v.get<int>());
  }
  return e;
}

json int_list(const Exponent& e) { return json(e); }

}  // namespace

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError("expected a number or [re, im], got " + j.dump());
}

json to_json(const LaurentPoly& p) {
  json j = json::object();
  for (const auto& [e, c] : p.terms()) j[exponent_key(e)] = to_json(c);
  return j;
}

LaurentPoly laurent_from_json(const json& j, int nvars) {
  if (!j.is_object()) throw ParseError("symbol must be an object of exponent keys");
  LaurentPoly p(nvars);
  for (const auto& [k, v] : j.items()) {
    const Exponent e = parse_key(k);
    if (e.size() != static_cast<std::size_t>(nvars))
      throw ParseError("exponent key '" + k + "' has the wrong arity");
    p.add_term(e, complex_from_json(v));
  }
  return p;
}

json to_json(const CMatrix& m) {
  json entries = json::array();
  for (cplx v : m.entries()) entries.push_back(to_json(v));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

CMatrix matrix_from_json(const json& j) {
  try {
    const auto r = j.at("rows").get<std::size_t>(), c = j.at("cols").get<std::size_t>();
    const auto& e = j.at("entries");
    if (!e.is_array() || e.size() != r * c) throw ParseError("matrix entry count mismatch");
    std::vector<cplx> v;
    v.reserve(e.size());
    for (const auto& x : e) v.push_back(complex_from_json(x));
    return CMatrix(r, c, std::move(v));
  } catch (const json::exception& ex) {
    throw ParseError(std::string("matrix: ") + ex.what());
  }
}

json to_json(const ToeplitzElement& x) {
  return {{"symbol", to_json(x.symbol())}, {"correction", to_json(x.correction())}};
}

ToeplitzElement toeplitz_from_json(const json& j) {
  if (!j.is_object() || !j.contains("symbol"))
    throw ParseError("ToeplitzElement needs a \"symbol\" field");
  LaurentPoly s = laurent_from_json(j["symbol"]);
  CMatrix f = j.contains("correction") ? matrix_from_json(j["correction"]) : CMatrix();
  return {std::move(s), std::move(f)};
}

json to_json(const TensorElement& x) {
  json j = json::array();
  for (const auto& [a, b] : x.terms()) j.push_back(json::array({to_json(a), to_json(b)}));
  return j;
}

TensorElement tensor_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("TensorElement must be a list of factor pairs");
  std::vector<TensorElement::Term> terms;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 2) throw ParseError("tensor term must be [A, B]");
    terms.emplace_back(toeplitz_from_json(t[0]), toeplitz_from_json(t[1]));
  }
  return TensorElement(std::move(terms));
}

json to_json(const GradedOperator& g) {
  json entries = json::array();
  for (const auto& [key, v] : g.entries())
    entries.push_back({{"beta", int_list(key.first)},
                       {"alpha", int_list(key.second)},
                       {"value", to_json(v)},
                       {"valid", g.valid(key.first, key.second)}});
  return {{"n", g.n()},
          {"d", g.d()},
          {"band", g.band},
          {"safe_degree", g.safe_degree},
          {"entries", entries}};
}

GradedOperator graded_from_json(const json& j) {
  try {
    GradedOperator g(j.at("n").get<int>(), j.at("d").get<int>(), j.at("band").get<int>(),
                     j.at("safe_degree").get<int>());
    for (const auto& e : j.at("entries"))
      g.set(int_list(e.at("beta")), int_list(e.at("alpha")), complex_from_json(e.at("value")));
    return g;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("GradedOperator: ") + ex.what());
  } catch (const PreconditionError& ex) {
    throw ParseError(std::string("GradedOperator: ") + ex.what());
  }
}

json to_json(const CircleMeasure& m) {
  json d = json::object();
  for (const auto& [k, c] : m.coefficients())
    d[std::to_string(k)] = c.imag() == 0.0 ? json(c.real()) : to_json(c);
  return {{"density", d}};
}

CircleMeasure measure_from_json(const json& j, double min_density) {
  if (!j.is_object() || !j.contains("density") || !j["density"].is_object())
    throw ParseError("measure needs a \"density\" object");
  std::map<int, cplx> c;
  for (const auto& [k, v] : j["density"].items()) {
    const Exponent e = parse_key(k);
    if (e.size() != 1) throw ParseError("density key '" + k + "' must be one integer");
    c[e[0]] = complex_from_json(v);
  }
  return CircleMeasure(std::move(c), min_density);
}

json to_json(const SpectrumReport& r) {
  json samples = json::array(), hull = json::array();
  for (cplx v : r.samples) samples.push_back(to_json(v));
  for (cplx v : r.hull) hull.push_back(to_json(v));
  auto counter = [](const std::vector<Counterexample>& cs) {
    json a = json::array();
    for (const auto& c : cs)
      a.push_back({{"lambda", to_json(c.lambda)}, {"status", to_string(c.status)},
                   {"detail", c.detail}});
    return a;
  };
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& l : r.lambdas) ++counts[static_cast<int>(l.status)];
  return {{"symbol", r.symbol},
          {"grid_size", r.grid_size},
          {"curve_tolerance", r.curve_tolerance},
          {"essential_range_samples", samples},
          {"hull_vertices", hull},
          {"lambda_counts",
           {{"ON_CURVE", counts[0]}, {"WINDING_NONZERO", counts[1]}, {"OUTSIDE", counts[2]}}},
          {"probes", r.probes},
          {"probe_attempts", r.probe_attempts},
          {"verdicts", {{"hartman_wintner", r.hartman_wintner}, {"convex_bound", r.convex_bound}}},
          {"counterexamples",
           {{"hartman_wintner", counter(r.hartman_wintner_counterexamples)},
            {"convex_bound", counter(r.convex_counterexamples)}}}};
}

std::string spectrum_csv(const SpectrumReport& r) {
  std::ostringstream os;
  os << "lambda_re,lambda_im,status\n";
  for (const auto& l : r.lambdas)
    os << format_double(l.lambda.real()) << ',' << format_double(l.lambda.imag()) << ','
       << to_string(l.status) << '\n';
  return os.str();
}

}  // namespace sphiso
