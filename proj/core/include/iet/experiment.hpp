#pragma once

// Experiment manifests, their dispatch to the library, and persistence of
// results as CSV/JSON.

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "iet/numeric.hpp"
#include "iet/permutation.hpp"
#include "iet/simplex.hpp"

namespace iet {

using Json = nlohmann::ordered_json;

struct SystemSpec {
  std::string permutation;
  ArithmeticMode mode = ArithmeticMode::rational;
  unsigned precision_bits = kDefaultPrecisionBits;
  std::vector<std::string> lambda;  // empty: seeded point of Delta
  std::string gamma0;               // empty: positive_path from lambda or from the seed
};

struct Manifest {
  std::string kind;
  SystemSpec system;
  std::uint64_t seed = 1;
  Json params = Json::object();
  std::map<std::string, std::string> outputs;  // "json", "csv" -> path
};

inline const std::vector<std::string>& manifest_kinds() {
  static const std::vector<std::string> kinds{"perm-info", "rauzy-class", "induct",   "orbit",     "lyapunov",
                                              "survival",  "weakmix-scan", "suspend", "deviations"};
  return kinds;
}

Json to_json(const Manifest& m);
/// Throws InputError on schema violations.
Manifest manifest_from_json(const Json& j);
Manifest load_manifest(const std::string& path);

struct RunResult {
  Json json;            // structured result, always present
  std::string csv;      // tabular result, empty for kinds without one
  Manifest resolved;    // manifest with gamma0 and defaults filled in
  std::vector<std::string> summary;  // lines for the terminal
};

/// Dispatches on m.kind. Module errors propagate with their exit codes.
RunResult run(const Manifest& m);

/// Writes the outputs named in the manifest; returns the written paths.
std::vector<std::string> write_outputs(const RunResult& r);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::string& path, const std::string& content);

/// Shortest round-trip formatting for doubles, "nan"/"inf" spelled out.
std::string format_double(double x);

/// Builds the Delta system described by the manifest.
SimplexSystem build_system(const SystemSpec& spec, std::uint64_t seed);

// Individual results, shared by the CLI subcommands.
Json perm_info_json(const Permutation& p);
Json rauzy_class_json(const Permutation& p);

/// Renormalization-free induction trace as CSV, stopping early with the
/// error message recorded when a tie occurs. Each row is passed to `echo`
/// as it is produced.
struct InductTrace {
  std::string csv;
  int steps_done = 0;
  std::string stop_reason;  // empty when all steps ran
  int stop_code = 0;        // exit code of the error that stopped the trace
};
InductTrace induct_trace(const SystemSpec& spec, int steps, std::ostream* echo = nullptr);

}  // namespace iet
