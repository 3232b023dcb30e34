#include "sphiso/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>

#include "sphiso/errors.hpp"

namespace sphiso {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw UsageError(field, what);
}

void only_keys(const json& j, const std::string& path, std::set<std::string> allowed) {
  if (!j.is_object()) bad(path.empty() ? "scenario" : path, "must be an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) bad(path.empty() ? k : path + "." + k, "unknown field");
}

template <class T>
T get(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    bad(path, "wrong type: " + j.dump());
  }
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "must be an integer");
  return j.get<int>();
}

std::size_t get_size(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) bad(path, "must be a nonnegative integer");
  return j.get<std::size_t>();
}

std::vector<int> get_ints(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) bad(path, "must be a nonempty integer list");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(get_int(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

void positive(int v, const std::string& path) {
  if (v < 1) bad(path, "must be >= 1");
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"circle", "szego",  "polydisc",
                                              "measures", "spectra", "all"};
  return names;
}

std::map<std::string, double> Scenario::default_tolerances() {
  return {{"exact", 1e-12},           {"cross_section", 1e-10}, {"cross_section_limit", 1e-3},
          {"block", 1e-8},            {"lift_gap", 1e-3},       {"szego", 1e-12},
          {"fixed_point", 1e-10},     {"planted", 0.4},         {"isometry", 1e-10},
          {"hull", 1e-8},             {"gamma", 1e-10},         {"monte_carlo_sigma", 3.0}};
}

Scenario scenario_from_json(const json& j) {
  only_keys(j, "", {"name", "seed", "suite", "threads", "trials", "max_degree", "max_correction",
                    "circle", "szego", "polydisc", "measures", "spectra", "tolerances"});
  Scenario s;
  if (!j.contains("name") || !j["name"].is_string()) bad("name", "required string");
  s.name = j["name"].get<std::string>();
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("seed", "must be a nonnegative 64-bit integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("suite")) s.suite = get<std::string>(j["suite"], "suite");
  if (j.contains("threads")) s.threads = get_int(j["threads"], "threads");
  if (j.contains("trials")) s.trials = get_int(j["trials"], "trials");
  if (j.contains("max_degree")) s.max_degree = get_int(j["max_degree"], "max_degree");
  if (j.contains("max_correction")) s.max_correction = get_size(j["max_correction"], "max_correction");

  if (j.contains("circle")) {
    const json& c = j["circle"];
    only_keys(c, "circle",
              {"cross_section_symbol", "max_truncation", "lift_truncation", "block_truncation"});
    if (c.contains("cross_section_symbol"))
      s.circle.cross_section_symbol = get<std::string>(c["cross_section_symbol"], "circle.cross_section_symbol");
    if (c.contains("max_truncation"))
      s.circle.max_truncation = get_size(c["max_truncation"], "circle.max_truncation");
    if (c.contains("lift_truncation"))
      s.circle.lift_truncation = get_size(c["lift_truncation"], "circle.lift_truncation");
    if (c.contains("block_truncation"))
      s.circle.block_truncation = get_size(c["block_truncation"], "circle.block_truncation");
  }
  if (j.contains("szego")) {
    const json& z = j["szego"];
    only_keys(z, "szego", {"n", "d", "mc_samples", "moment_trials", "symbol_trials"});
    if (z.contains("n")) s.szego.n = get_ints(z["n"], "szego.n");
    if (z.contains("d")) s.szego.d = get_int(z["d"], "szego.d");
    if (z.contains("mc_samples")) s.szego.mc_samples = get_int(z["mc_samples"], "szego.mc_samples");
    if (z.contains("moment_trials"))
      s.szego.moment_trials = get_int(z["moment_trials"], "szego.moment_trials");
    if (z.contains("symbol_trials"))
      s.szego.symbol_trials = get_int(z["symbol_trials"], "szego.symbol_trials");
  }
  if (j.contains("polydisc")) {
    const json& p = j["polydisc"];
    only_keys(p, "polydisc", {"trials", "truncation"});
    if (p.contains("trials")) s.polydisc.trials = get_int(p["trials"], "polydisc.trials");
    if (p.contains("truncation")) s.polydisc.truncation = get_size(p["truncation"], "polydisc.truncation");
  }
  if (j.contains("measures")) {
    const json& m = j["measures"];
    only_keys(m, "measures", {"density", "window", "degrees"});
    if (m.contains("density")) {
      try {
        s.measures.density = measure_from_json(json{{"density", m["density"]}}, 0.0).coefficients();
      } catch (const Error& e) {
        bad("measures.density", e.what());
      }
    }
    if (m.contains("window")) s.measures.window = get_int(m["window"], "measures.window");
    if (m.contains("degrees")) s.measures.degrees = get_ints(m["degrees"], "measures.degrees");
  }
  if (j.contains("spectra")) {
    const json& p = j["spectra"];
    only_keys(p, "spectra", {"symbols", "max_degree", "grid", "lambda_side", "probes", "extra_symbols"});
    if (p.contains("symbols")) s.spectra.symbols = get_int(p["symbols"], "spectra.symbols");
    if (p.contains("max_degree")) s.spectra.max_degree = get_int(p["max_degree"], "spectra.max_degree");
    if (p.contains("grid")) s.spectra.grid = get_int(p["grid"], "spectra.grid");
    if (p.contains("lambda_side")) s.spectra.lambda_side = get_int(p["lambda_side"], "spectra.lambda_side");
    if (p.contains("probes")) s.spectra.probes = get_int(p["probes"], "spectra.probes");
    if (p.contains("extra_symbols"))
      s.spectra.extra_symbols = get<std::vector<std::string>>(p["extra_symbols"], "spectra.extra_symbols");
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) bad("tolerances", "must be an object");
    for (const auto& [k, v] : t.items()) {
      if (!s.tolerances.count(k)) bad("tolerances." + k, "unknown tolerance");
      if (!v.is_number()) bad("tolerances." + k, "must be a number");
      s.tolerances[k] = v.get<double>();
    }
  }
  validate(s);
  return s;
}

void validate(const Scenario& s) {
  static const std::regex name_re("[A-Za-z0-9_.-]+");
  if (!std::regex_match(s.name, name_re)) bad("name", "use letters, digits, '_', '.', '-'");
  if (std::find(suite_names().begin(), suite_names().end(), s.suite) == suite_names().end())
    bad("suite", "must be one of circle, szego, polydisc, measures, spectra, all");
  positive(s.threads, "threads");
  positive(s.trials, "trials");
  positive(s.max_degree, "max_degree");
  if (s.max_correction < 1) bad("max_correction", "must be >= 1");
  for (const auto& [k, v] : s.tolerances)
    if (!(v > 0.0) || !std::isfinite(v)) bad("tolerances." + k, "tolerances must be > 0");

  try {
    parse_laurent(s.circle.cross_section_symbol, 1);
  } catch (const Error& e) {
    bad("circle.cross_section_symbol", e.what());
  }
  if (s.circle.max_truncation < 1) bad("circle.max_truncation", "must be >= 1");
  if (s.circle.lift_truncation < 1) bad("circle.lift_truncation", "must be >= 1");
  if (s.circle.block_truncation < 1) bad("circle.block_truncation", "must be >= 1");

  for (std::size_t i = 0; i < s.szego.n.size(); ++i)
    if (s.szego.n[i] < 1 || s.szego.n[i] > 6) bad("szego.n[" + std::to_string(i) + "]", "must be in 1..6");
  if (s.szego.d < 2 || s.szego.d > 30) bad("szego.d", "must be in 2..30");
  positive(s.szego.mc_samples, "szego.mc_samples");
  positive(s.szego.moment_trials, "szego.moment_trials");
  positive(s.szego.symbol_trials, "szego.symbol_trials");

  positive(s.polydisc.trials, "polydisc.trials");
  if (s.polydisc.truncation < 2) bad("polydisc.truncation", "must be >= 2");

  positive(s.measures.window, "measures.window");
  for (int d : s.measures.degrees)
    if (d <= s.measures.window + 1) bad("measures.degrees", "every degree must exceed window + 1");
  try {
    CircleMeasure m(s.measures.density);
  } catch (const Error& e) {
    bad("measures.density", e.what());
  }

  positive(s.spectra.symbols, "spectra.symbols");
  positive(s.spectra.max_degree, "spectra.max_degree");
  if (s.spectra.grid < 4 * s.spectra.max_degree) bad("spectra.grid", "must be >= 4 * max_degree");
  if (s.spectra.lambda_side < 2) bad("spectra.lambda_side", "must be >= 2");
  if (s.spectra.probes < 0) bad("spectra.probes", "must be >= 0");
  for (std::size_t i = 0; i < s.spectra.extra_symbols.size(); ++i) {
    const std::string path = "spectra.extra_symbols[" + std::to_string(i) + "]";
    try {
      const auto p = parse_laurent(s.spectra.extra_symbols[i], 1);
      if (4 * std::max(1, p.max_abs_exponent()) > s.spectra.grid) bad(path, "degree too large for the grid");
    } catch (const ParseError& e) {
      bad(path, e.what());
    }
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("scenario", "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    bad("scenario", std::string("invalid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

json to_json(const Scenario& s) {
  json density = to_json(CircleMeasure(s.measures.density))["density"];
  return {{"name", s.name},
          {"seed", s.seed},
          {"suite", s.suite},
          {"trials", s.trials},
          {"max_degree", s.max_degree},
          {"max_correction", s.max_correction},
          {"circle",
           {{"cross_section_symbol", s.circle.cross_section_symbol},
            {"max_truncation", s.circle.max_truncation},
            {"lift_truncation", s.circle.lift_truncation},
            {"block_truncation", s.circle.block_truncation}}},
          {"szego",
           {{"n", s.szego.n},
            {"d", s.szego.d},
            {"mc_samples", s.szego.mc_samples},
            {"moment_trials", s.szego.moment_trials},
            {"symbol_trials", s.szego.symbol_trials}}},
          {"polydisc", {{"trials", s.polydisc.trials}, {"truncation", s.polydisc.truncation}}},
          {"measures",
           {{"density", density}, {"window", s.measures.window}, {"degrees", s.measures.degrees}}},
          {"spectra",
           {{"symbols", s.spectra.symbols},
            {"max_degree", s.spectra.max_degree},
            {"grid", s.spectra.grid},
            {"lambda_side", s.spectra.lambda_side},
            {"probes", s.spectra.probes},
            {"extra_symbols", s.spectra.extra_symbols}}},
          {"tolerances", s.tolerances}};
}

}  // namespace sphiso
