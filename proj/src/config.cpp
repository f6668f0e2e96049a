#include "radcns/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "radcns/errors.hpp"

namespace radcns {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Kind { integer, real, boolean, text, real_list };

// Returns an error message (without line tag) or nullopt.
using Check = std::function<std::optional<std::string>(const ConfigValue&)>;

struct KeySpec {
  const char* name;
  Kind kind;
  Check check;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

Check at_least_int(const char* key, long long lo) {
  return [=](const ConfigValue& v) -> std::optional<std::string> {
    if (std::get<long long>(v) < lo) return std::string(key) + " below minimum " + std::to_string(lo);
    return std::nullopt;
  };
}

Check real_range(const char* key, double lo, bool lo_open, double hi, bool hi_open,
                 bool allow_inf = false) {
  return [=](const ConfigValue& v) -> std::optional<std::string> {
    const double x = std::get<double>(v);
    if (std::isinf(x) && x > 0 && allow_inf) return std::nullopt;
    if (!std::isfinite(x)) return std::string(key) + " must be finite";
    if (lo_open ? !(x > lo) : !(x >= lo))
      return std::string(key) + (lo_open ? " must exceed " : " below minimum ") + fmt(lo);
    if (hi_open ? !(x < hi) : !(x <= hi))
      return std::string(key) + (hi_open ? " must be below " : " above maximum ") + fmt(hi);
    return std::nullopt;
  };
}

Check list_each(const char* key, double lo, bool allow_inf) {
  return [=](const ConfigValue& v) -> std::optional<std::string> {
    const auto& xs = std::get<std::vector<double>>(v);
    if (xs.empty()) return std::string(key) + " must not be empty";
    for (double x : xs) {
      if (std::isinf(x) && x > 0 && allow_inf) continue;
      if (!std::isfinite(x)) return std::string(key) + " entries must be finite";
      if (x < lo) return std::string(key) + " entry " + fmt(x) + " below minimum " + fmt(lo);
    }
    return std::nullopt;
  };
}

Check one_of(const char* key, std::vector<std::string> allowed) {
  return [=](const ConfigValue& v) -> std::optional<std::string> {
    const auto& s = std::get<std::string>(v);
    for (const auto& a : allowed)
      if (s == a) return std::nullopt;
    std::string msg = std::string(key) + " must be one of";
    for (const auto& a : allowed) msg += " " + a;
    return msg;
  };
}

Check any() {
  return [](const ConfigValue&) -> std::optional<std::string> { return std::nullopt; };
}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"N", Kind::integer, at_least_int("N", 8)},
      {"R", Kind::real, real_range("R", 0.0, true, kInf, true)},
      {"dt", Kind::real, real_range("dt", 0.0, true, kInf, true)},
      {"T", Kind::real, real_range("T", 0.0, false, kInf, true)},
      {"cadence", Kind::real, real_range("cadence", 0.0, true, kInf, true)},
      {"gamma", Kind::real, real_range("gamma", 1.0, true, kInf, true)},
      {"c", Kind::real, real_range("c", 0.0, false, 1.0, true)},
      {"w", Kind::real, real_range("w", 0.0, true, kInf, true)},
      {"dealias", Kind::real, real_range("dealias", 0.0, true, 1.0, false)},
      {"guard", Kind::real, real_range("guard", 0.0, true, 1.0, true)},
      {"nonlinear", Kind::boolean, any()},
      {"fit_lo", Kind::real, real_range("fit_lo", 0.0, true, kInf, true)},
      {"fit_hi", Kind::real, real_range("fit_hi", 0.0, true, kInf, true)},
      {"lower_lo", Kind::real, real_range("lower_lo", 0.0, true, kInf, true)},
      {"lower_hi", Kind::real, real_range("lower_hi", 0.0, true, kInf, true)},
      {"weighted_lo", Kind::real, real_range("weighted_lo", 0.0, false, kInf, true)},
      {"weighted_hi", Kind::real, real_range("weighted_hi", 0.0, false, kInf, true)},
      {"ratio_max", Kind::real, real_range("ratio_max", 1.0, false, kInf, true)},
      {"weighted_ratio_max", Kind::real, real_range("weighted_ratio_max", 1.0, false, kInf, true)},
      {"linear_r2", Kind::real, real_range("linear_r2", 0.0, false, 1.0, false)},
      {"nonlinear_r2", Kind::real, real_range("nonlinear_r2", 0.0, false, 1.0, false)},
      {"p_list", Kind::real_list, list_each("p_list", 1.0, true)},
      {"t_list", Kind::real_list, list_each("t_list", 4.0, false)},
      {"branch", Kind::text, one_of("branch", {"plus", "minus"})},
      {"s", Kind::real, real_range("s", -kInf, false, kInf, false)},
      {"p", Kind::real, real_range("p", 1.0, false, kInf, true, true)},
      {"q", Kind::real, real_range("q", 1.0, false, kInf, true, true)},
      {"band", Kind::text, one_of("band", {"full", "low", "high"})},
      {"j0", Kind::integer, any()},
      {"input", Kind::text, any()},
      {"column", Kind::text, any()},
      {"target", Kind::real, real_range("target", -kInf, false, kInf, false)},
      {"tolerance", Kind::real, real_range("tolerance", 0.0, true, kInf, true)},
      {"min_r2", Kind::real, real_range("min_r2", 0.0, false, 1.0, false)},
  };
  return table;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_real(std::string_view s) {
  if (s == "inf" || s == "+inf" || s == "infinity" || s == "Inf") return kInf;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  if (std::isnan(x)) return std::nullopt;
  return x;
}

std::optional<ConfigValue> parse_value(Kind kind, std::string_view s) {
  switch (kind) {
    case Kind::integer: {
      long long x = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
      if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
      return ConfigValue(x);
    }
    case Kind::real: {
      const auto x = parse_real(s);
      if (!x) return std::nullopt;
      return ConfigValue(*x);
    }
    case Kind::boolean:
      if (s == "true" || s == "1" || s == "yes") return ConfigValue(true);
      if (s == "false" || s == "0" || s == "no") return ConfigValue(false);
      return std::nullopt;
    case Kind::text:
      if (s.empty()) return std::nullopt;
      return ConfigValue(std::string(s));
    case Kind::real_list: {
      std::vector<double> xs;
      std::size_t start = 0;
      while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const auto item = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
        const auto x = parse_real(item);
        if (!x) return std::nullopt;
        xs.push_back(*x);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      return ConfigValue(std::move(xs));
    }
  }
  return std::nullopt;
}

const char* kind_name(Kind kind) {
  switch (kind) {
    case Kind::integer: return "an integer";
    case Kind::real: return "a number";
    case Kind::boolean: return "true or false";
    case Kind::text: return "a non-empty string";
    case Kind::real_list: return "a comma-separated list of numbers";
  }
  return "";
}

template <class T>
const T* lookup(const RunConfig& c, const std::string& key) {
  const auto it = c.params.find(key);
  if (it == c.params.end()) return nullptr;
  const T* v = std::get_if<T>(&it->second);
  if (!v) throw ConfigError("parameter " + key + " has the wrong type");
  return v;
}

}  // namespace

long long RunConfig::integer(const std::string& key, long long fallback) const {
  const auto* v = lookup<long long>(*this, key);
  return v ? *v : fallback;
}

double RunConfig::real(const std::string& key, double fallback) const {
  const auto* v = lookup<double>(*this, key);
  return v ? *v : fallback;
}

bool RunConfig::flag(const std::string& key, bool fallback) const {
  const auto* v = lookup<bool>(*this, key);
  return v ? *v : fallback;
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const {
  const auto* v = lookup<std::string>(*this, key);
  return v ? *v : fallback;
}

std::vector<double> RunConfig::list(const std::string& key,
                                    const std::vector<double>& fallback) const {
  const auto* v = lookup<std::vector<double>>(*this, key);
  return v ? *v : fallback;
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& k : key_table()) out.emplace_back(k.name);
  return out;
}

ConfigParse parse_config_collect(std::string_view text) {
  ConfigParse out;
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string tag = " (line " + std::to_string(line_no) + ")";

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      out.errors.push_back("expected key = value" + tag);
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view raw = trim(line.substr(eq + 1));

    const KeySpec* spec = nullptr;
    for (const auto& k : key_table())
      if (key == k.name) spec = &k;
    if (!spec) {
      out.errors.push_back("unknown key '" + key + "'" + tag);
      continue;
    }
    if (const auto it = seen.find(key); it != seen.end()) {
      out.errors.push_back("duplicate key '" + key + "' (first on line " +
                           std::to_string(it->second) + ")" + tag);
      continue;
    }
    seen[key] = line_no;
    auto value = parse_value(spec->kind, raw);
    if (!value) {
      out.errors.push_back("cannot parse " + key + " = '" + std::string(raw) + "': expected " +
                           kind_name(spec->kind) + tag);
      continue;
    }
    if (const auto problem = spec->check(*value)) {
      out.errors.push_back(*problem + tag);
      continue;
    }
    out.config.params[key] = std::move(*value);
  }
  return out;
}

RunConfig parse_config(std::string_view text) {
  ConfigParse parsed = parse_config_collect(text);
  if (!parsed.ok()) {
    std::string msg;
    for (std::size_t i = 0; i < parsed.errors.size(); ++i) {
      if (i) msg += '\n';
      msg += parsed.errors[i];
    }
    throw ConfigError(msg);
  }
  return std::move(parsed.config);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

SolverConfig solver_config(const RunConfig& config) {
  SolverConfig s;
  s.modes = static_cast<std::size_t>(config.integer("N", static_cast<long long>(s.modes)));
  s.radius = config.real("R", s.radius);
  s.dt = config.real("dt", s.dt);
  s.final_time = config.real("T", s.final_time);
  s.cadence = config.real("cadence", s.cadence);
  s.gamma = config.real("gamma", s.gamma);
  s.amplitude = config.real("c", s.amplitude);
  s.width = config.real("w", s.width);
  s.dealias = config.real("dealias", s.dealias);
  s.density_floor = config.real("guard", s.density_floor);
  s.nonlinear = config.flag("nonlinear", s.nonlinear);
  s.validate();
  return s;
}

LabSettings lab_settings(const RunConfig& config) {
  LabSettings l;
  l.fit_lo = config.real("fit_lo", l.fit_lo);
  l.fit_hi = config.real("fit_hi", l.fit_hi);
  l.lower_lo = config.real("lower_lo", l.lower_lo);
  l.lower_hi = config.real("lower_hi", l.lower_hi);
  l.weighted_lo = config.real("weighted_lo", l.weighted_lo);
  l.weighted_hi = config.real("weighted_hi", l.weighted_hi);
  l.ratio_max = config.real("ratio_max", l.ratio_max);
  l.weighted_ratio_max = config.real("weighted_ratio_max", l.weighted_ratio_max);
  l.linear_r2 = config.real("linear_r2", l.linear_r2);
  l.nonlinear_r2 = config.real("nonlinear_r2", l.nonlinear_r2);
  if (!(l.fit_lo < l.fit_hi)) throw ConfigError("fit_lo must be below fit_hi");
  if (!(l.lower_lo < l.lower_hi)) throw ConfigError("lower_lo must be below lower_hi");
  if (!(l.weighted_lo < l.weighted_hi)) throw ConfigError("weighted_lo must be below weighted_hi");
  return l;
}

BesovSpec besov_spec(const RunConfig& config) {
  BesovSpec b;
  b.s = config.real("s", b.s);
  b.p = config.real("p", b.p);
  b.q = config.real("q", b.q);
  b.j0 = static_cast<int>(config.integer("j0", b.j0));
  const std::string band = config.text("band", "full");
  b.band = band == "low" ? FrequencyBand::low
                         : (band == "high" ? FrequencyBand::high : FrequencyBand::full);
  return b;
}

Branch branch(const RunConfig& config) {
  return config.text("branch", "plus") == "minus" ? Branch::minus : Branch::plus;
}

}  // namespace radcns
