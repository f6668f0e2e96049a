#pragma once

// Bit-stable text output: 17 significant digits, '.' separator, '\n' endings.
// Every writer refuses non-finite numbers (NumericDomainError) before
// producing any output.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "radcns/decay_lab.hpp"
#include "radcns/solver.hpp"

namespace radcns {

std::string format_number(double x);

/// Header `t,l2_av,linf_av,besov0_21,besov0_inf1,nl_l2,nl_besov_inf1,weighted_sup`.
std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows);

/// Generic table: first column `t`, then one column per named series.
/// All series must share the time samples of the first.
std::string series_csv(const std::vector<std::string>& names,
                       const std::vector<DecaySeries>& series);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Throws ConfigError for an unknown column.
  std::size_t index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

/// Comma-separated, first line a header. Throws ConfigError with a line number
/// on malformed input.
CsvTable parse_csv(std::string_view text);
CsvTable read_csv(const std::filesystem::path& path);

nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const ExperimentReport& report);
nlohmann::json to_json(const KernelProbeReport& probe);

/// Throws NumericDomainError naming the first non-finite number.
void require_finite(const nlohmann::json& doc);

/// Indented JSON with a trailing newline, after require_finite.
std::string dump_json(const nlohmann::json& doc);

/// Writes bytes verbatim, creating parent directories.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace radcns
