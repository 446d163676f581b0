#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace dropkit::cli {

enum ExitCode : int { kOk = 0, kPropertyFailure = 1, kBadParameters = 2, kUnsupported = 3 };

/// Parses "lo:hi:step" (inclusive at both ends within half a step), a comma
/// separated list, or a single value.
std::vector<double> parse_grid(const std::string& text);

/// Shortest round-trip decimal form of x, as used in CSV cells.
std::string format_number(double x);

std::string sha256_hex(const std::string& data);

/// Converts a budget given as a real (so "1e7" is accepted) to a count.
std::uint64_t budget_from_real(double value);

struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json seed;  // null for commands without randomness
  std::string version;
  double wall_time_s = 0.0;
  std::string output_sha256;
  int exit_code = 0;

  nlohmann::json to_json() const;
};

}  // namespace dropkit::cli
