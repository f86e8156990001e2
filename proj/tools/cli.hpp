#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"

namespace rankagg::cli {

using Json = nlohmann::ordered_json;

/// What `aggregate` prints.
struct RunReport {
  std::size_t n = 0;
  std::size_t m = 0;
  bool weighted = false;
  std::string algorithm;
  std::string metric;
  Json params = Json::object();
  std::vector<int> output;
  double cost = 0.0;
  double estimatedCost = 0.0;
  std::size_t candidateCount = 0;
  std::string provenance;
  std::vector<std::size_t> provenanceIndices;
  std::optional<double> opt;
  std::optional<double> ratio;
  std::optional<Json> trace;
  std::uint64_t seed = 0;
  double wallSeconds = 0.0;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

Json toJson(const RunReport& r);
RunReport reportFromJson(const Json& j);

enum ExitCode { kOk = 0, kInputError = 1, kCapViolation = 2, kVerifyFailed = 3 };

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rankagg::cli
