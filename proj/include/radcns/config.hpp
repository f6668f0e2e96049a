#pragma once

// Run configuration: `key = value` lines with `#` comments.

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "radcns/besov.hpp"
#include "radcns/decay_lab.hpp"
#include "radcns/semigroup.hpp"
#include "radcns/solver.hpp"

namespace radcns {

using ConfigValue = std::variant<long long, double, bool, std::string, std::vector<double>>;

struct RunConfig {
  std::string command;
  std::map<std::string, ConfigValue> params;
  std::filesystem::path out_dir = ".";

  bool has(const std::string& key) const { return params.count(key) != 0; }
  long long integer(const std::string& key, long long fallback) const;
  double real(const std::string& key, double fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<double> list(const std::string& key, const std::vector<double>& fallback) const;
};

struct ConfigParse {
  RunConfig config;
  std::vector<std::string> errors;  // every problem found, each tagged "(line L)"

  bool ok() const { return errors.empty(); }
};

ConfigParse parse_config_collect(std::string_view text);

/// Throws ConfigError whose message lists every error, one per line.
RunConfig parse_config(std::string_view text);

/// Reads and parses a file. Throws ConfigError if it cannot be read.
RunConfig load_config(const std::filesystem::path& path);

/// Names accepted by parse_config.
std::vector<std::string> known_keys();

// Typed views. Defaults are the reference experiment; each throws ConfigError
// when the combined parameters are inconsistent.
SolverConfig solver_config(const RunConfig& config);
LabSettings lab_settings(const RunConfig& config);
BesovSpec besov_spec(const RunConfig& config);
Branch branch(const RunConfig& config);

}  // namespace radcns
