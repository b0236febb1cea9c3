#pragma once

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace cohomlab {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string command;
  std::string scenario;
  std::string scenarioFile;
  std::uint64_t seed = 42;
  std::optional<long> samples;
  std::optional<double> tol;
  std::string outPath;
  std::string csvPath;
  std::string deltas;
  std::optional<int> grid;
  std::optional<double> c0;
  std::optional<int> C;
  std::optional<double> delta;
  bool timings = false;

  nlohmann::json to_json() const;
};

/// "start:end:logstepN" (N log-spaced points, inclusive) or a comma list.
std::vector<double> parse_deltas(const std::string& spec);

struct RunResult {
  int exitCode = 0;
  nlohmann::json report;
  /// CSV body including the header row; empty if the command writes none.
  std::string csv;
};

/// Runs one command without touching the filesystem.
RunResult run(const RunConfig& config);

/// Parses argv, runs, writes artifacts. Exit codes: 0 pass, 2 failed
/// assertion, 1 usage error.
int run_cli(int argc, char** argv);

}  // namespace cohomlab
