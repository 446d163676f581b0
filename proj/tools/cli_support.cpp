#include "cli_support.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dropkit/errors.hpp"

namespace dropkit::cli {

namespace {

double parse_real(const std::string& token) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ParameterError("grid: cannot parse '" + token + "' as a number");
  }
  if (used != token.size() || !std::isfinite(value)) {
    throw ParameterError("grid: cannot parse '" + token + "' as a number");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, sep)) {
    parts.push_back(part);
  }
  if (!text.empty() && text.back() == sep) {
    parts.emplace_back();
  }
  return parts;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) {
    throw ParameterError("grid: empty specification");
  }
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
      throw ParameterError("grid: expected lo:hi:step, got '" + text + "'");
    }
    const double lo = parse_real(parts[0]);
    const double hi = parse_real(parts[1]);
    const double step = parse_real(parts[2]);
    if (!(step > 0.0) || hi < lo) {
      throw ParameterError("grid: need step > 0 and hi >= lo in '" + text + "'");
    }
    const double span = (hi - lo) / step;
    if (span > 1e7) {
      throw ParameterError("grid: more than 1e7 points in '" + text + "'");
    }
    const auto count = static_cast<long>(std::floor(span + 0.5));
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(count) + 1);
    for (long i = 0; i <= count; ++i) {
      values.push_back(lo + static_cast<double>(i) * step);
    }
    return values;
  }
  std::vector<double> values;
  for (const auto& token : split(text, ',')) {
    values.push_back(parse_real(token));
  }
  return values;
}

std::string format_number(double x) {
  if (std::isnan(x)) {
    return "nan";
  }
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, result.ptr);
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

std::uint64_t budget_from_real(double value) {
  if (!std::isfinite(value) || value < 1.0 || value > 1e15 || value != std::floor(value)) {
    throw ParameterError("budget must be a positive integer (scientific notation allowed)");
  }
  return static_cast<std::uint64_t>(value);
}

nlohmann::json RunManifest::to_json() const {
  return {{"command", command},         {"parameters", parameters},
          {"seed", seed},               {"version", version},
          {"wall_time_s", wall_time_s}, {"output_sha256", output_sha256},
          {"exit_code", exit_code}};
}

}  // namespace dropkit::cli
