#include "sphiso/runner.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "sphiso/catalog.hpp"
#include "sphiso/errors.hpp"

namespace sphiso {

namespace {

using Clock = std::chrono::steady_clock;

std::string utc_stamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ResourceError("cannot write " + p.string());
  out << text;
  if (!out) throw ResourceError("write failed: " + p.string());
}

struct Execution {
  RunResult result;
  RunContext ctx;
};

Execution execute(const Scenario& s) {
  validate(s);
  Execution ex;
  ex.ctx.threads = s.threads;
  json checks = json::array(), timings = json::object();
  std::size_t passed = 0;
  const auto t0 = Clock::now();
  for (const auto& id : checks_for_suite(s.suite)) {
    const auto c0 = Clock::now();
    CheckRecord rec = run_check(id, s, ex.ctx);
    timings[id] = std::chrono::duration<double>(Clock::now() - c0).count();
    if (rec.pass) ++passed;
    else ex.result.failing.push_back(id);
    checks.push_back(to_json(rec));
    ex.result.records.push_back(std::move(rec));
  }
  const double wall = std::chrono::duration<double>(Clock::now() - t0).count();

  ex.result.report = {{"version", version()},
                      {"scenario", to_json(s)},
                      {"checks", checks},
                      {"summary",
                       {{"checks", checks.size()},
                        {"passed", passed},
                        {"failed", ex.result.failing.size()},
                        {"failing", ex.result.failing},
                        {"verdict", ex.result.failing.empty() ? "PASS" : "FAIL"}}}};
  json files = json::array({"report.json"});
  for (const auto& [name, text] : ex.ctx.artifacts) files.push_back(name);
  ex.result.manifest = {{"version", version()},
                        {"scenario", s.name},
                        {"seed", s.seed},
                        {"suite", s.suite},
                        {"threads", s.threads},
                        {"started_utc", utc_stamp()},
                        {"wall_seconds", wall},
                        {"check_seconds", timings},
                        {"files", files}};
  return ex;
}

}  // namespace

const char* version() { return generated::kVersion; }

std::string report_text(const json& report) { return report.dump(2) + "\n"; }

RunResult run_scenario(const Scenario& s) { return execute(s).result; }

RunResult run_scenario(const Scenario& s, const std::filesystem::path& out_root) {
  Execution ex = execute(s);
  RunResult& r = ex.result;
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_root, ec);
  if (ec) throw ResourceError("cannot create " + out_root.string() + ": " + ec.message());
  const std::string base = s.name + "-" + r.manifest["started_utc"].get<std::string>();
  fs::path dir = out_root / base;
  for (int k = 1; fs::exists(dir); ++k) dir = out_root / (base + "-" + std::to_string(k));
  fs::create_directory(dir, ec);
  if (ec) throw ResourceError("cannot create " + dir.string() + ": " + ec.message());

  write_file(dir / "report.json", report_text(r.report));
  for (const auto& [name, text] : ex.ctx.artifacts) write_file(dir / name, text);
  write_file(dir / "manifest.json", r.manifest.dump(2) + "\n");
  r.directory = dir;
  return r;
}

}  // namespace sphiso
