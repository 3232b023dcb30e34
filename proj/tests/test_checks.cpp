#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>

#include "sphiso/errors.hpp"
#include "sphiso/runner.hpp"

using namespace sphiso;

namespace {

std::string field_of(const json& j) {
  try {
    scenario_from_json(j);
  } catch (const UsageError& e) {
    return e.field();
  }
  return "";
}

Scenario smoke() { return load_scenario(SPHISO_SOURCE_DIR "/scenarios/smoke.json"); }

}  // namespace

TEST_CASE("scenario defaults are valid and echo completely") {
  const Scenario s = scenario_from_json({{"name", "defaults"}});
  CHECK(s.trials == 100);
  CHECK(s.suite == "all");
  CHECK(s.tol("planted") == 0.4);
  const json echo = to_json(s);
  // The echo parses back to the same scenario.
  CHECK(to_json(scenario_from_json(echo)) == echo);
  CHECK(!echo.contains("threads"));
}

TEST_CASE("scenario validation names the field") {
  CHECK(field_of({{"name", "x"}, {"tolerances", {{"exact", 0}}}}) == "tolerances.exact");
  CHECK(field_of({{"name", "x"}, {"tolerances", {{"gamma", -1e-3}}}}) == "tolerances.gamma");
  CHECK(field_of({{"name", "x"}, {"tolerances", {{"nope", 1}}}}) == "tolerances.nope");
  CHECK(field_of({{"name", "x"}, {"trials", 0}}) == "trials");
  CHECK(field_of({{"name", "x"}, {"polydisc", {{"trials", 0}}}}) == "polydisc.trials");
  CHECK(field_of({{"name", "x"}, {"suite", "torus"}}) == "suite");
  CHECK(field_of({{"name", "x"}, {"tirals", 3}}) == "tirals");
  CHECK(field_of({{"name", "x"}, {"seed", -1}}) == "seed");
  CHECK(field_of({{"seed", 1}}) == "name");
  CHECK(field_of({{"name", "a b"}}) == "name");
  CHECK(field_of({{"name", "x"}, {"circle", {{"cross_section_symbol", "z +"}}}}) ==
        "circle.cross_section_symbol");
  CHECK(field_of({{"name", "x"}, {"measures", {{"density", {{"0", 1}, {"1", 0.9}}}}}}) ==
        "measures.density");
  CHECK(field_of({{"name", "x"}, {"measures", {{"window", 40}}}}) == "measures.degrees");
  CHECK(field_of({{"name", "x"}, {"szego", {{"n", {2, 9}}}}}) == "szego.n[1]");
  CHECK(field_of(json::array()) == "scenario");
}

TEST_CASE("catalog and explain") {
  CHECK(catalog().size() == 16);
  for (const auto& e : catalog()) {
    CHECK(!e.tag.empty());
    CHECK(explain(e.id).find(e.tag) != std::string::npos);
  }
  // Statement-backed checks carry a real tag, not "plumbing".
  for (const char* id : {"thm2_1_identities", "hartman_wintner", "gamma_equation"}) {
    const std::string tag = catalog_entry(id).tag;
    CHECK(tag != "plumbing");
    CHECK(explain(id).find("statement: " + tag) != std::string::npos);
  }
  CHECK(catalog_entry("determinism").tag == "plumbing");
  try {
    explain("no_such_check");
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("closure_homomorphism") != std::string::npos);
    CHECK(std::string(e.what()).find("numerical_range") != std::string::npos);
  }
  CHECK(checks_for_suite("polydisc") == std::vector<std::string>{"gamma_equation", "scaled_isometry"});
  CHECK(checks_for_suite("all").size() == 16);
}

TEST_CASE("parallel_for fills slots and rethrows the lowest failure") {
  std::vector<int> v(100);
  parallel_for(v.size(), 7, [&](std::size_t i) { v[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 13 || i == 31) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "13");
  }
}

TEST_CASE("smoke scenario passes quickly and deterministically") {
  Scenario s = smoke();
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult a = run_scenario(s);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(a.exit_code() == 0);
  CHECK(secs < 2.0);
  for (const auto& r : a.records) {
    CHECK(r.pass);
    CHECK(r.inputs_digest.size() == 16);
  }
  s.threads = 5;
  const RunResult b = run_scenario(s);
  CHECK(report_text(a.report) == report_text(b.report));
  s.seed += 1;
  const RunResult c = run_scenario(s);
  CHECK(report_text(a.report) != report_text(c.report));
}

TEST_CASE("run directory layout") {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "sphiso_test_runs";
  fs::remove_all(root);
  Scenario s = scenario_from_json({{"name", "layout"},
                                   {"suite", "spectra"},
                                   {"spectra", {{"symbols", 2}, {"lambda_side", 20}, {"probes", 5},
                                                {"extra_symbols", {"z"}}}}});
  const RunResult r = run_scenario(s, root);
  CHECK(r.exit_code() == 0);
  REQUIRE(fs::exists(r.directory));
  CHECK(r.directory.filename().string().rfind("layout-", 0) == 0);
  for (const char* f : {"report.json", "manifest.json", "spectrum_0.csv", "spectrum_1.csv", "spectrum_2.csv"})
    CHECK(fs::exists(r.directory / f));
  std::ifstream in(r.directory / "report.json");
  const json rep = json::parse(in);
  CHECK(rep["summary"]["verdict"] == "PASS");
  CHECK(rep["scenario"]["name"] == "layout");
  for (const auto& c : rep["checks"]) CHECK(!c["tag"].get<std::string>().empty());
  std::ifstream csv(r.directory / "spectrum_2.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "lambda_re,lambda_im,status");
  // A second run in the same second gets its own folder.
  const RunResult r2 = run_scenario(s, root);
  CHECK(r2.directory != r.directory);
  fs::remove_all(root);
}

TEST_CASE("failing checks are reported by id") {
  Scenario s = smoke();
  s.tolerances["lift_gap"] = 1e-15;
  const RunResult r = run_scenario(s);
  CHECK(r.exit_code() == 1);
  CHECK(r.failing == std::vector<std::string>{"commutant_lifting"});
  CHECK(r.report["summary"]["verdict"] == "FAIL");
  bool found = false;
  for (const auto& rec : r.records)
    if (rec.id == "commutant_lifting") {
      found = true;
      CHECK(!rec.pass);
      CHECK(!rec.failures.empty());
    }
  CHECK(found);
}
