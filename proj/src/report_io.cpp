#include "radcns/report_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "radcns/config.hpp"
#include "radcns/errors.hpp"

namespace radcns {
namespace {

using nlohmann::json;

void require_finite_value(double x, const std::string& what) {
  if (!std::isfinite(x)) throw NumericDomainError("non-finite value in " + what);
}

json window(double lo, double hi) { return json::array({lo, hi}); }

void check_tree(const json& node, const std::string& path) {
  if (node.is_number_float()) {
    if (!std::isfinite(node.get<double>())) throw NumericDomainError("non-finite value at " + path);
  } else if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) check_tree(it.value(), path + "." + it.key());
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i)
      check_tree(node[i], path + "[" + std::to_string(i) + "]");
  }
}

}  // namespace

std::string format_number(double x) {
  require_finite_value(x, "output");
  char buf[40];
  // The C locale is never changed by this program, so '.' is the separator.
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string diagnostics_csv(const std::vector<DiagnosticsRow>& rows) {
  for (const auto& r : rows)
    for (double x : {r.t, r.l2_av, r.linf_av, r.besov0_21, r.besov0_inf1, r.nl_l2,
                     r.nl_besov_inf1, r.weighted_sup})
      if (!std::isfinite(x))
        throw NumericDomainError("non-finite diagnostic at t = " + std::to_string(r.t));
  std::string out = "t,l2_av,linf_av,besov0_21,besov0_inf1,nl_l2,nl_besov_inf1,weighted_sup\n";
  for (const auto& r : rows) {
    out += format_number(r.t);
    for (double x : {r.l2_av, r.linf_av, r.besov0_21, r.besov0_inf1, r.nl_l2, r.nl_besov_inf1,
                     r.weighted_sup}) {
      out += ',';
      out += format_number(x);
    }
    out += '\n';
  }
  return out;
}

std::string series_csv(const std::vector<std::string>& names,
                       const std::vector<DecaySeries>& series) {
  if (names.size() != series.size()) throw UsageError("series_csv: one name per series");
  const std::size_t n = series.empty() ? 0 : series.front().size();
  for (const auto& s : series) {
    if (s.size() != n || s.t != series.front().t)
      throw UsageError("series_csv: series must share time samples");
    for (std::size_t i = 0; i < n; ++i) {
      require_finite_value(s.t[i], "series time");
      require_finite_value(s.value[i], "series value");
    }
  }
  std::string out = "t";
  for (const auto& name : names) out += "," + name;
  out += '\n';
  for (std::size_t i = 0; i < n; ++i) {
    out += format_number(series.front().t[i]);
    for (const auto& s : series) out += "," + format_number(s.value[i]);
    out += '\n';
  }
  return out;
}

std::size_t CsvTable::index(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  std::string known;
  for (const auto& h : header) known += (known.empty() ? "" : ", ") + h;
  throw ConfigError("unknown column '" + name + "' (available: " + known + ")");
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const std::size_t k = index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[k]);
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto split = [](std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      std::string cell(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
      while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      cells.push_back(std::move(cell));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return cells;
  };
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size())
      throw ConfigError("csv: expected " + std::to_string(table.header.size()) + " fields (line " +
                        std::to_string(line_no) + ")");
    std::vector<double> row;
    for (const auto& cell : cells) {
      double x = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty() || !std::isfinite(x))
        throw ConfigError("csv: cannot parse '" + cell + "' (line " + std::to_string(line_no) + ")");
      row.push_back(x);
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ConfigError("csv: empty input");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

json to_json(const FitResult& fit) {
  return {{"fitted_exponent", fit.slope}, {"intercept", fit.intercept}, {"r2", fit.r2},
          {"window", window(fit.t_lo, fit.t_hi)}, {"points", fit.points},
          {"zero_variance", fit.zero_variance}};
}

json to_json(const ExperimentReport& report) {
  json results = json::array();
  for (const auto& f : report.fits) {
    json item = to_json(f.fit);
    item["label"] = f.label;
    item["target_exponent"] = f.target;
    item["tolerance"] = f.tolerance;
    item["min_r2"] = f.min_r2;
    item["verdict"] = f.pass ? "PASS" : "FAIL";
    results.push_back(std::move(item));
  }
  json bounds = json::array();
  for (const auto& r : report.ratios) {
    bounds.push_back({{"label", r.label}, {"window", window(r.t_lo, r.t_hi)}, {"min", r.min},
                      {"max", r.max}, {"ratio", r.ratio}, {"threshold", r.threshold},
                      {"verdict", r.pass ? "PASS" : "FAIL"}});
  }
  return {{"experiment", report.experiment}, {"verdict", report.verdict()},
          {"results", std::move(results)}, {"bounds", std::move(bounds)},
          {"notes", report.notes}};
}

json to_json(const KernelProbeReport& probe) {
  json doc = to_json(probe.report);
  json samples = json::array();
  for (const auto& s : probe.samples) {
    samples.push_back({{"t", s.t}, {"sup", s.sup}, {"t2_sup", s.scaled},
                       {"nodes_per_axis", s.nodes_per_axis},
                       {"refinement_change", s.refinement_change}, {"j0", s.j0},
                       {"frame_sup", s.frame_sup}, {"besov_inf_inf", s.besov_inf_inf}});
  }
  doc["samples"] = std::move(samples);
  return doc;
}

void require_finite(const json& doc) { check_tree(doc, "$"); }

std::string dump_json(const json& doc) {
  require_finite(doc);
  return doc.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace radcns
