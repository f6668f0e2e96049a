// radcns: decay experiments for the radial compressible Navier-Stokes system.
//
//   radcns <command> [--config PATH] [--out DIR] [--quiet]
//
// Exit status: 0 pass, 1 experiment FAIL, 2 configuration error, 3 solver
// abort or non-finite output.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "radcns/besov.hpp"
#include "radcns/config.hpp"
#include "radcns/decay_lab.hpp"
#include "radcns/errors.hpp"
#include "radcns/radial.hpp"
#include "radcns/report_io.hpp"
#include "radcns/solver.hpp"

namespace {

using namespace radcns;
using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kAbort = 3 };

struct Context {
  RunConfig config;
  bool quiet = false;
  // Artifacts are rendered first and written together, so a non-finite value
  // leaves the output directory untouched.
  std::map<std::string, std::string> files;

  void say(const std::string& line) const {
    if (!quiet) std::cout << line << '\n';
  }
  void flush() const {
    for (const auto& [name, content] : files) write_file(config.out_dir / name, content);
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string p_name(double p) { return std::isinf(p) ? "inf" : num(p); }

void summarize(const Context& ctx, const ExperimentReport& report) {
  for (const auto& f : report.fits)
    ctx.say("  " + f.label + ": exponent " + num(f.fit.slope) + " (target " + num(f.target) +
            " +/- " + num(f.tolerance) + "), r2 " + num(f.fit.r2) + " -> " +
            (f.pass ? "PASS" : "FAIL"));
  for (const auto& r : report.ratios)
    ctx.say("  " + r.label + " on [" + num(r.t_lo) + ", " + num(r.t_hi) + "]: ratio " +
            num(r.ratio) + " (limit " + num(r.threshold) + ") -> " + (r.pass ? "PASS" : "FAIL"));
  for (const auto& n : report.notes) ctx.say("  note: " + n);
  ctx.say(report.experiment + ": " + report.verdict());
}

int verdict_code(const ExperimentReport& report) { return report.pass() ? kPass : kFail; }

SimulationResult run_simulation(Context& ctx, const SolverConfig& sc) {
  ctx.say("simulating N = " + std::to_string(sc.modes) + ", R = " + num(sc.radius) +
          ", dt = " + num(sc.dt) + ", T = " + num(sc.final_time) +
          (sc.nonlinear ? "" : " (linear only)"));
  SimulationResult sim = simulate(sc);
  ctx.files["diagnostics.csv"] = diagnostics_csv(sim.rows);
  return sim;
}

int cmd_grid_check(Context& ctx) {
  const SolverConfig sc = solver_config(ctx.config);
  const RadialGrid grid = sc.grid();
  const auto [a0, v0] = initial_data_gaussian(sc.amplitude > 0.0 ? sc.amplitude : 1.0, sc.width, grid);
  (void)v0;
  const TransformCheck check = transform_check(a0);
  const bool pass = check.involution <= 1e-12 && check.parseval <= 1e-10;
  json doc = {{"experiment", "grid-check"},
              {"N", grid.size()},
              {"R", grid.outer_radius()},
              {"dr", grid.dr()},
              {"drho", grid.drho()},
              {"rho_max", grid.rho_max()},
              {"involution_error", check.involution},
              {"parseval_error", check.parseval},
              {"verdict", pass ? "PASS" : "FAIL"}};
  ctx.files["grid_check.json"] = dump_json(doc);
  ctx.say("  dr = " + num(grid.dr()) + ", drho = " + num(grid.drho()) + ", rho_max = " +
          num(grid.rho_max()));
  ctx.say("  involution error " + num(check.involution) + " (limit 1e-12)");
  ctx.say("  Parseval error " + num(check.parseval) + " (limit 1e-10)");
  ctx.say(std::string("grid-check: ") + (pass ? "PASS" : "FAIL"));
  return pass ? kPass : kFail;
}

int cmd_linear_decay(Context& ctx) {
  SolverConfig sc = solver_config(ctx.config);
  const LabSettings lab = lab_settings(ctx.config);
  const auto p_list = ctx.config.list("p_list", {2.0, kInf});
  const LinearSeries series = linear_evolution_series(sc, p_list);
  const ExperimentReport report = evaluate_linear_decay(series, lab);

  std::vector<std::string> names;
  std::vector<DecaySeries> columns = series.lp;
  for (double p : series.p_values) names.push_back("L" + p_name(p));
  names.push_back("weighted_sup");
  columns.push_back(series.weighted_sup);
  ctx.files["linear_decay.csv"] = series_csv(names, columns);
  ctx.files["linear_decay.json"] = dump_json(to_json(report));
  summarize(ctx, report);
  return verdict_code(report);
}

int cmd_simulate(Context& ctx) {
  const SimulationResult sim = run_simulation(ctx, solver_config(ctx.config));
  const DiagnosticsRow& last = sim.rows.back();
  ctx.say("  t = " + num(last.t) + ": ||(a,v)||_2 = " + num(last.l2_av) + ", ||(a,v)||_inf = " +
          num(last.linf_av));
  ctx.say("simulate: " + std::to_string(sim.rows.size()) + " rows");
  return kPass;
}

int cmd_nonlinear_decay(Context& ctx) {
  const SolverConfig sc = solver_config(ctx.config);
  const LabSettings lab = lab_settings(ctx.config);
  const auto p_list = ctx.config.list("p_list", {2.0, kInf});
  for (double p : p_list)
    if (p != 2.0 && !std::isinf(p)) throw ConfigError("nonlinear-decay supports p = 2 and p = inf only");
  const SimulationResult sim = run_simulation(ctx, sc);
  const ExperimentReport report = evaluate_nonlinear_decay(sim.rows, p_list, lab);
  ctx.files["nonlinear_decay.json"] = dump_json(to_json(report));
  summarize(ctx, report);
  return verdict_code(report);
}

// Linear evolution always; the full solver as well when it is switched on.
template <class Evaluate>
ExperimentReport linear_and_nonlinear(Context& ctx, const std::string& name, Evaluate evaluate) {
  const SolverConfig sc = solver_config(ctx.config);
  ExperimentReport report{name, {}, {}, false, {}};
  const double p_inf[] = {kInf};
  const LinearSeries lin = linear_evolution_series(sc, p_inf);
  merge_report(report, evaluate(lin.lp.front(), lin.weighted_sup), "linear");
  if (sc.nonlinear && sc.amplitude > 0.0) {
    const SimulationResult sim = run_simulation(ctx, sc);
    merge_report(report, evaluate(column(sim.rows, &DiagnosticsRow::linf_av),
                  column(sim.rows, &DiagnosticsRow::weighted_sup)),
         "nonlinear");
  }
  return report;
}

int cmd_lower_bound(Context& ctx) {
  const LabSettings lab = lab_settings(ctx.config);
  const ExperimentReport report = linear_and_nonlinear(
      ctx, "lower-bound",
      [&](const DecaySeries& linf, const DecaySeries&) { return evaluate_lower_bound(linf, lab); });
  ctx.files["lower_bound.json"] = dump_json(to_json(report));
  summarize(ctx, report);
  return verdict_code(report);
}

int cmd_weighted_decay(Context& ctx) {
  const LabSettings lab = lab_settings(ctx.config);
  const ExperimentReport report =
      linear_and_nonlinear(ctx, "weighted-decay", [&](const DecaySeries&, const DecaySeries& w) {
        return evaluate_weighted_decay(w, lab);
      });
  ctx.files["weighted_decay.json"] = dump_json(to_json(report));
  summarize(ctx, report);
  return verdict_code(report);
}

int cmd_kernel_probe(Context& ctx) {
  const LabSettings lab = lab_settings(ctx.config);
  const auto t_list = ctx.config.list("t_list", {16.0, 64.0, 256.0});
  const KernelProbeReport probe = run_kernel_lower_probe(t_list, branch(ctx.config), lab);
  ctx.files["kernel_probe.json"] = dump_json(to_json(probe));
  for (const auto& s : probe.samples)
    ctx.say("  t = " + num(s.t) + ": sup " + num(s.sup) + ", t^2 sup " + num(s.scaled) + ", " +
            std::to_string(s.nodes_per_axis) + " nodes/axis, refinement " +
            num(s.refinement_change) + ", j0 " + std::to_string(s.j0) + ", frame sup " +
            num(s.frame_sup));
  summarize(ctx, probe.report);
  return verdict_code(probe.report);
}

// Field from `input` (columns r and `column`, on the configured grid) or the
// configured Gaussian.
RadialScalarField besov_input(const RunConfig& config, const RadialGrid& grid) {
  if (!config.has("input")) {
    const SolverConfig defaults;
    return initial_data_gaussian(config.real("c", defaults.amplitude),
                                 config.real("w", defaults.width), grid)
        .first;
  }
  const CsvTable table = read_csv(config.text("input", ""));
  const auto r = table.column("r");
  const auto f = table.column(config.text("column", "f"));
  if (r.size() != grid.size())
    throw ConfigError("input has " + std::to_string(r.size()) + " rows, grid has N = " +
                      std::to_string(grid.size()));
  for (std::size_t m = 0; m < r.size(); ++m)
    if (std::abs(r[m] - grid.r(m)) > 1e-9 * grid.r(m))
      throw ConfigError("input radius on row " + std::to_string(m + 2) +
                        " does not match the grid node " + num(grid.r(m)));
  RadialScalarField out = RadialScalarField::zeros(grid, Space::physical);
  out.values = f;
  return out;
}

int cmd_besov_norm(Context& ctx) {
  const SolverConfig defaults;
  const RadialGrid grid(static_cast<std::size_t>(ctx.config.integer("N", static_cast<long long>(defaults.modes))),
                        ctx.config.real("R", defaults.radius));
  const BesovSpec spec = besov_spec(ctx.config);
  const RadialScalarField field = besov_input(ctx.config, grid);
  const BesovBreakdown b = besov_breakdown(field, spec);
  json doc = {{"experiment", "besov-norm"}, {"s", spec.s}, {"value", b.value},
              {"indices", b.indices}, {"block_norms", b.block_norms},
              {"unresolved", b.unresolved}};
  doc["p"] = std::isinf(spec.p) ? json("inf") : json(spec.p);
  doc["q"] = std::isinf(spec.q) ? json("inf") : json(spec.q);
  ctx.files["besov_norm.json"] = dump_json(doc);
  ctx.say("  blocks " + std::to_string(b.indices.size()) + ", unresolved " +
          std::to_string(b.unresolved));
  ctx.say("besov-norm: " + format_number(b.value));
  return kPass;
}

int cmd_fit(Context& ctx) {
  if (!ctx.config.has("input")) throw ConfigError("fit needs input = <csv file>");
  if (!ctx.config.has("column")) throw ConfigError("fit needs column = <name>");
  const LabSettings lab = lab_settings(ctx.config);
  const CsvTable table = read_csv(ctx.config.text("input", ""));
  DecaySeries series;
  series.t = table.column("t");
  series.value = table.column(ctx.config.text("column", ""));
  const FitResult fit = fit_decay_exponent(series, lab.fit_lo, lab.fit_hi);
  json doc = to_json(fit);
  doc["experiment"] = "fit";
  doc["column"] = ctx.config.text("column", "");
  int code = kPass;
  std::string verdict = "NONE";
  if (ctx.config.has("target")) {
    const double target = ctx.config.real("target", 0.0);
    const double tol = ctx.config.real("tolerance", 0.1);
    const double min_r2 = ctx.config.real("min_r2", 0.0);
    const bool pass = std::abs(fit.slope - target) <= tol && fit.r2 >= min_r2;
    doc["target_exponent"] = target;
    doc["tolerance"] = tol;
    doc["min_r2"] = min_r2;
    verdict = pass ? "PASS" : "FAIL";
    code = pass ? kPass : kFail;
  }
  doc["verdict"] = verdict;
  ctx.files["fit.json"] = dump_json(doc);
  ctx.say("  exponent " + num(fit.slope) + ", r2 " + num(fit.r2) + ", " +
          std::to_string(fit.points) + " points");
  ctx.say("fit: " + verdict);
  return code;
}

using Command = int (*)(Context&);

const std::vector<std::pair<std::string, Command>>& commands() {
  static const std::vector<std::pair<std::string, Command>> table = {
      {"grid-check", cmd_grid_check},         {"linear-decay", cmd_linear_decay},
      {"simulate", cmd_simulate},             {"nonlinear-decay", cmd_nonlinear_decay},
      {"lower-bound", cmd_lower_bound},       {"weighted-decay", cmd_weighted_decay},
      {"kernel-probe", cmd_kernel_probe},     {"besov-norm", cmd_besov_norm},
      {"fit", cmd_fit},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decay experiments for the radial compressible Navier-Stokes system"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = ".";
  bool quiet = false;
  std::string chosen;
  for (const auto& [name, fn] : commands()) {
    (void)fn;
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--out", out_dir, "directory for CSV/JSON artifacts");
    sub->add_flag("--quiet", quiet, "suppress the summary");
    sub->callback([&chosen, n = name] { chosen = n; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kConfig;
  }

  Context ctx;
  ctx.quiet = quiet;
  try {
    if (!config_path.empty()) ctx.config = load_config(config_path);
    ctx.config.command = chosen;
    ctx.config.out_dir = out_dir;
    Command fn = nullptr;
    for (const auto& [name, f] : commands())
      if (name == chosen) fn = f;
    const int code = fn(ctx);
    ctx.flush();
    return code;
  } catch (const SolverAbort& e) {
    std::cout << chosen << ": ABORT at t = " << e.time();
    if (e.mode() >= 0) std::cout << " (node " << e.mode() << ")";
    std::cout << ": " << e.what() << '\n';
    return kAbort;
  } catch (const NumericDomainError& e) {
    std::cout << chosen << ": ABORT: " << e.what() << '\n';
    return kAbort;
  } catch (const Error& e) {
    std::cerr << chosen << ": configuration error:\n" << e.what() << '\n';
    return kConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << chosen << ": " << e.what() << '\n';
    return kConfig;
  }
}
