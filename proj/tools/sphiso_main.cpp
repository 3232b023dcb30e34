#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>

#include "sphiso/errors.hpp"
#include "sphiso/runner.hpp"
#include "sphiso/symbols.hpp"

using namespace sphiso;

namespace {

int cmd_run(const std::string& path, const std::optional<std::uint64_t>& seed,
            const std::optional<std::string>& suite, const std::string& out,
            const std::optional<int>& threads) {
  json j;
  {
    std::ifstream in(path);
    if (!in) throw UsageError("scenario", "cannot open '" + path + "'");
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      throw UsageError("scenario", std::string("invalid JSON: ") + e.what());
    }
  }
  // Flags override scenario fields before validation.
  if (j.is_object()) {
    if (seed) j["seed"] = *seed;
    if (suite) j["suite"] = *suite;
    if (threads) j["threads"] = *threads;
  }
  const Scenario s = scenario_from_json(j);
  const RunResult r = run_scenario(s, out);
  for (const auto& rec : r.records) {
    std::cout << (rec.pass ? "PASS " : "FAIL ") << rec.id << " (" << rec.tag << ")\n";
    for (const auto& f : rec.failures) std::cout << "    " << f << "\n";
  }
  std::cout << "report: " << (r.directory / "report.json").string() << "\n";
  if (!r.failing.empty()) {
    std::cerr << "failing checks:";
    for (const auto& id : r.failing) std::cerr << " " << id;
    std::cerr << "\n";
  }
  return r.exit_code();
}

int cmd_symbol_eval(const std::string& expr, int grid) {
  if (grid < 1) throw UsageError("--grid", "must be >= 1");
  const LaurentPoly phi = parse_laurent(expr, 1);
  const auto r = eval_grid(phi, grid);
  std::printf("theta,re,im\n");
  for (std::size_t k = 0; k < r.samples.size(); ++k)
    std::printf("%.17g,%.17g,%.17g\n", 2.0 * std::numbers::pi * static_cast<double>(k) / grid,
                r.samples[k].real(), r.samples[k].imag());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toeplitz algebras of spherical isometries: scenario runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  auto* run = app.add_subcommand("run", "run the checks of a scenario file");
  std::string scenario_path, out = "runs";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> suite;
  std::optional<int> threads;
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--suite", suite, "circle | szego | polydisc | measures | spectra | all");
  run->add_option("--out", out, "directory for run folders")->capture_default_str();
  run->add_option("--threads", threads, "worker threads");

  auto* exp = app.add_subcommand("explain", "describe a check");
  std::string check_id;
  exp->add_option("check", check_id, "check id")->required();

  auto* ev = app.add_subcommand("symbol-eval", "sample a symbol on the circle as CSV");
  std::string expr;
  int grid = 16;
  ev->add_option("expr", expr, "Laurent polynomial in z, zbar")->required();
  ev->add_option("--grid", grid, "number of sample points")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(scenario_path, seed, suite, out, threads);
    if (*exp) {
      std::cout << explain(check_id);
      return 0;
    }
    if (*ev) return cmd_symbol_eval(expr, grid);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
