#pragma once

// Scenario files: one JSON object, every field but "name" optional. The
// defaults are the full-strength settings; smaller scenarios override
// trial counts and sizes. Unknown fields are rejected so typos surface.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sphiso/serialize.hpp"

namespace sphiso {

const std::vector<std::string>& suite_names();  // circle, szego, ..., all

struct CircleParams {
  std::string cross_section_symbol = "z + zbar";
  std::size_t max_truncation = 1024;
  std::size_t lift_truncation = 1024;
  std::size_t block_truncation = 128;
};

struct SzegoParams {
  std::vector<int> n{2, 3};
  int d = 10;
  int mc_samples = 100000;
  int moment_trials = 10;
  int symbol_trials = 10;
};

struct PolydiscParams {
  int trials = 20;
  std::size_t truncation = 32;
};

struct MeasureParams {
  std::map<int, cplx> density{{0, 1.0}, {1, 0.4}};
  int window = 8;
  std::vector<int> degrees{32, 64, 128};
};

struct SpectraParams {
  int symbols = 20;
  int max_degree = 5;
  int grid = 1024;
  int lambda_side = 200;
  int probes = 100;
  std::vector<std::string> extra_symbols{"z", "z^3 + 0.5*zbar", "z + zbar", "2 + z^2"};
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  std::string suite = "all";
  int threads = 1;
  int trials = 100;
  int max_degree = 6;
  std::size_t max_correction = 5;
  CircleParams circle;
  SzegoParams szego;
  PolydiscParams polydisc;
  MeasureParams measures;
  SpectraParams spectra;
  std::map<std::string, double> tolerances = default_tolerances();

  static std::map<std::string, double> default_tolerances();
  double tol(const std::string& key) const { return tolerances.at(key); }
};

// Throws UsageError naming the offending field path.
Scenario scenario_from_json(const json& j);
Scenario load_scenario(const std::string& path);
// Full form with every default filled in; echoed into reports.
json to_json(const Scenario& s);
void validate(const Scenario& s);

}  // namespace sphiso
