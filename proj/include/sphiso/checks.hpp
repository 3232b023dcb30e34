#pragma once

// Named checks. Each one runs a batch of seeded trials and returns a
// record with residuals, not just a verdict. Descriptions and tags come
// from the catalog in data/checks.json, embedded at build time.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "sphiso/scenario.hpp"
#include "sphiso/spectra.hpp"

namespace sphiso {

struct CheckRecord {
  std::string id;
  std::string suite;
  std::string tag;
  std::string title;
  std::string inputs_digest;  // fnv1a of the inputs, hex
  json metrics = json::object();
  bool pass = true;
  std::vector<std::string> failures;  // human-readable, first few only

  void require(bool ok, const std::string& what);
};

json to_json(const CheckRecord& r);

struct CatalogEntry {
  std::string id, suite, tag, title, model, criterion;
};

// Registry order; every id has a catalog entry.
const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_entry(const std::string& id);  // UsageError lists ids
std::string explain(const std::string& id);
std::vector<std::string> checks_for_suite(const std::string& suite);

// Shared state of one run.
struct RunContext {
  int threads = 1;
  // file name -> contents, written next to report.json
  std::map<std::string, std::string> artifacts;
  // spectra reports shared by the spectra checks
  std::shared_ptr<std::vector<SpectrumReport>> spectra;
};

CheckRecord run_check(const std::string& id, const Scenario& s, RunContext& ctx);

// Runs fn(0..count-1) on up to `threads` workers. Results go to indexed
// slots, so the outcome does not depend on scheduling. The exception of
// the lowest failing index is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace sphiso
