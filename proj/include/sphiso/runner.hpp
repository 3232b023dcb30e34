#pragma once

// Runs the checks of a scenario and writes
//   <out>/<name>-<UTC timestamp>/{manifest.json, report.json, *.csv}.
// report.json holds only seeded content, so reruns are byte-identical;
// timings go to manifest.json.

#include <filesystem>
#include <string>
#include <vector>

#include "sphiso/checks.hpp"

namespace sphiso {

const char* version();

struct RunResult {
  json report;
  json manifest;
  std::vector<CheckRecord> records;
  std::vector<std::string> failing;
  std::filesystem::path directory;  // empty when nothing was written
  int exit_code() const { return failing.empty() ? 0 : 1; }
};

// Checks only, nothing on disk.
RunResult run_scenario(const Scenario& s);
// Also writes the run directory under `out_root`.
RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_root);

// Stable text form used for report.json.
std::string report_text(const json& report);

}  // namespace sphiso
