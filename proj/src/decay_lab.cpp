#include "radcns/decay_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "radcns/besov.hpp"
#include "radcns/errors.hpp"
#include "radcns/probe.hpp"
#include "radcns/radial.hpp"

namespace radcns {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string p_label(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

}  // namespace

bool DecaySeries::all_zero() const {
  return std::all_of(value.begin(), value.end(), [](double v) { return v == 0.0; });
}

double theoretical_exponent(double p, ExponentKind kind) {
  if (!(p >= 2.0)) throw UnsupportedParameterError("decay exponents are stated for p in [2, inf]");
  if (kind == ExponentKind::weighted_sup) return 0.75;
  const double inv = std::isinf(p) ? 0.0 : 1.0 / p;
  const double sigma = 1.5 * (1.0 - inv) + 0.5 * (1.0 - 2.0 * inv);
  return kind == ExponentKind::nonlinear ? sigma + 0.5 : sigma;
}

FitResult fit_decay_exponent(const DecaySeries& series, double t_lo, double t_hi) {
  std::vector<double> xs, ys;
  std::vector<double> offenders;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.t[i];
    if (t < t_lo || t > t_hi) continue;
    const double v = series.value[i];
    if (!(v > 0.0) || !(t > 0.0)) {
      offenders.push_back(t);
      continue;
    }
    xs.push_back(std::log(t));
    ys.push_back(std::log(v));
  }
  if (!offenders.empty()) {
    std::ostringstream msg;
    msg << "fit: non-positive samples in window at t =";
    for (std::size_t i = 0; i < offenders.size() && i < 10; ++i) msg << ' ' << offenders[i];
    if (offenders.size() > 10) msg << " ... (" << offenders.size() << " total)";
    throw FitError(msg.str());
  }
  if (xs.size() < 4)
    throw FitError("fit: window [" + std::to_string(t_lo) + ", " + std::to_string(t_hi) +
                   "] holds " + std::to_string(xs.size()) + " samples, need at least 4");

  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw FitError("fit: all samples share one time");
  const double b = sxy / sxx;
  FitResult out;
  out.slope = -b;
  out.intercept = my - b * mx;
  out.t_lo = t_lo;
  out.t_hi = t_hi;
  out.points = xs.size();
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (out.intercept + b * xs[i]);
    ss_res += r * r;
  }
  // Relative to the spread of log-values: below rounding level means constant.
  if (syy <= 1e-28 * std::max(1.0, my * my) * n) {
    out.zero_variance = true;
    out.slope = 0.0;
    out.intercept = my;
    out.r2 = 1.0;
  } else {
    out.r2 = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return out;
}

bool ExperimentReport::pass() const {
  if (empty) return false;
  for (const auto& f : fits)
    if (!f.pass) return false;
  for (const auto& r : ratios)
    if (!r.pass) return false;
  return true;
}

std::string ExperimentReport::verdict() const {
  if (empty) return "EMPTY";
  return pass() ? "PASS" : "FAIL";
}

FitCheck check_fit(std::string label, const DecaySeries& series, double t_lo, double t_hi,
                   double target, double tolerance, double min_r2) {
  FitCheck check{std::move(label), target, tolerance, min_r2, {}, false};
  check.fit = fit_decay_exponent(series, t_lo, t_hi);
  check.pass = std::abs(check.fit.slope - target) <= tolerance && check.fit.r2 >= min_r2;
  return check;
}

RatioCheck check_scaled_ratio(std::string label, const DecaySeries& series, double t_lo,
                              double t_hi, double power, double threshold) {
  RatioCheck check{std::move(label), t_lo, t_hi, kInf, 0.0, kInf, threshold, false};
  std::size_t count = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.t[i];
    if (t < t_lo || t > t_hi) continue;
    const double scaled = std::pow(t, power) * series.value[i];
    check.min = std::min(check.min, scaled);
    check.max = std::max(check.max, scaled);
    ++count;
  }
  if (count == 0) {
    check.min = 0.0;
    return check;
  }
  check.ratio = check.min > 0.0 ? check.max / check.min : kInf;
  check.pass = check.min > 0.0 && check.ratio <= threshold;
  return check;
}

RatioCheck check_weighted_bound(std::string label, const DecaySeries& series, double t_lo,
                                double t_hi, double threshold) {
  RatioCheck check{std::move(label), t_lo, t_hi, kInf, 0.0, kInf, threshold, false};
  double reference = -1.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.t[i];
    if (t < t_lo || t > t_hi) continue;
    const double scaled = std::pow(t + 1.0, 0.75) * series.value[i];
    if (reference < 0.0) reference = scaled;
    check.min = std::min(check.min, scaled);
    check.max = std::max(check.max, scaled);
  }
  if (reference < 0.0) {
    check.min = 0.0;
    return check;
  }
  if (reference == 0.0) {
    // All-zero series is trivially bounded.
    check.ratio = check.max == 0.0 ? 0.0 : kInf;
  } else {
    check.ratio = check.max / reference;
  }
  check.pass = check.ratio <= threshold;
  return check;
}

LinearSeries linear_evolution_series(const SolverConfig& config, std::span<const double> p_list) {
  config.validate();
  const RadialGrid grid = config.grid();
  const auto [a0, v0] = initial_data_gaussian(config.amplitude, config.width, grid);
  const RadialScalarField a_hat = to_spectral(a0);
  const RadialScalarField v_hat = to_spectral(v0);

  LinearSeries out;
  out.p_values.assign(p_list.begin(), p_list.end());
  out.lp.resize(p_list.size());
  const auto ticks = static_cast<std::size_t>(std::llround(config.final_time / config.cadence));
  for (std::size_t i = 1; i <= ticks; ++i) {
    const double t = static_cast<double>(i) * config.cadence;
    const auto [at, vt] = apply_semigroup(a_hat, v_hat, t);
    const RadialScalarField a = to_physical(at);
    const RadialScalarField v = to_physical(vt);
    for (std::size_t k = 0; k < p_list.size(); ++k) out.lp[k].push(t, lp_norm_pair(a, v, p_list[k]));
    out.weighted_sup.push(t, weighted_sup_norm_pair(a, v));
  }
  return out;
}

DecaySeries column(const std::vector<DiagnosticsRow>& rows, double DiagnosticsRow::*member) {
  DecaySeries s;
  for (const auto& row : rows) s.push(row.t, row.*member);
  return s;
}

double linear_tolerance(double p) { return std::isinf(p) ? 0.10 : 0.05; }

ExperimentReport evaluate_linear_decay(const LinearSeries& series, const LabSettings& settings) {
  ExperimentReport report{"linear-decay", {}, {}, false, {}};
  bool any_signal = false;
  for (const auto& s : series.lp) any_signal = any_signal || !s.all_zero();
  if (!any_signal) {
    report.empty = true;
    report.notes.push_back("zero data: no fit attempted");
    return report;
  }
  for (std::size_t k = 0; k < series.p_values.size(); ++k) {
    const double p = series.p_values[k];
    report.fits.push_back(check_fit("L" + p_label(p) + " (a,v)", series.lp[k], settings.fit_lo,
                                    settings.fit_hi, theoretical_exponent(p, ExponentKind::full),
                                    linear_tolerance(p), settings.linear_r2));
  }
  return report;
}

ExperimentReport evaluate_nonlinear_decay(const std::vector<DiagnosticsRow>& rows,
                                          std::span<const double> p_list,
                                          const LabSettings& settings) {
  ExperimentReport report{"nonlinear-decay", {}, {}, false, {}};
  const DecaySeries total2 = column(rows, &DiagnosticsRow::l2_av);
  if (total2.all_zero()) {
    report.empty = true;
    report.notes.push_back("zero data: no fit attempted");
    return report;
  }
  for (double p : p_list) {
    if (p == 2.0) {
      report.fits.push_back(check_fit("L2 (a,v)", total2, settings.fit_lo, settings.fit_hi,
                                      theoretical_exponent(2.0, ExponentKind::full), 0.10,
                                      settings.nonlinear_r2));
      report.fits.push_back(check_fit("L2 Duhamel part", column(rows, &DiagnosticsRow::nl_l2),
                                      settings.fit_lo, settings.fit_hi,
                                      theoretical_exponent(2.0, ExponentKind::nonlinear), 0.15,
                                      settings.nonlinear_r2));
    } else if (std::isinf(p)) {
      report.fits.push_back(check_fit("Linf (a,v)", column(rows, &DiagnosticsRow::linf_av),
                                      settings.fit_lo, settings.fit_hi,
                                      theoretical_exponent(kInf, ExponentKind::full), 0.20,
                                      settings.nonlinear_r2));
      report.fits.push_back(check_fit(
          "B0_inf,1 Duhamel part", column(rows, &DiagnosticsRow::nl_besov_inf1), settings.fit_lo,
          settings.fit_hi, theoretical_exponent(kInf, ExponentKind::nonlinear), 0.20,
          settings.nonlinear_r2));
    } else {
      throw ConfigError("nonlinear-decay supports p = 2 and p = inf only");
    }
  }
  // Informational: the plain sup norm of the Duhamel part, which the Besov
  // norm dominates.
  try {
    const FitResult f =
        fit_decay_exponent(column(rows, &DiagnosticsRow::nl_linf), settings.fit_lo, settings.fit_hi);
    std::ostringstream note;
    note << "Linf Duhamel part exponent " << f.slope << " (r2 " << f.r2 << ")";
    report.notes.push_back(note.str());
  } catch (const FitError&) {
  }
  return report;
}

ExperimentReport evaluate_lower_bound(const DecaySeries& linf, const LabSettings& settings) {
  ExperimentReport report{"lower-bound", {}, {}, false, {}};
  if (linf.all_zero()) {
    report.empty = true;
    report.notes.push_back("zero data: lower bound cannot hold");
    return report;
  }
  report.ratios.push_back(check_scaled_ratio("t^2 ||(a,v)||_inf", linf, settings.lower_lo,
                                             settings.lower_hi, 2.0, settings.ratio_max));
  return report;
}

ExperimentReport evaluate_weighted_decay(const DecaySeries& weighted,
                                         const LabSettings& settings) {
  ExperimentReport report{"weighted-decay", {}, {}, false, {}};
  report.ratios.push_back(check_weighted_bound("(t+1)^{3/4} || |x| (a,v) ||_inf", weighted,
                                               settings.weighted_lo, settings.weighted_hi,
                                               settings.weighted_ratio_max));
  if (weighted.all_zero()) report.notes.push_back("zero data: trivially bounded");
  return report;
}

ExperimentReport run_linear_decay(const SolverConfig& config, std::span<const double> p_list,
                                  const LabSettings& settings) {
  return evaluate_linear_decay(linear_evolution_series(config, p_list), settings);
}

ExperimentReport run_nonlinear_decay(const SolverConfig& config, std::span<const double> p_list,
                                     const LabSettings& settings) {
  for (double p : p_list)
    if (p != 2.0 && !std::isinf(p)) throw ConfigError("nonlinear-decay supports p = 2 and p = inf only");
  const SimulationResult sim = simulate(config);
  return evaluate_nonlinear_decay(sim.rows, p_list, settings);
}

void merge_report(ExperimentReport& into, ExperimentReport part, const std::string& tag) {
  for (auto& r : part.ratios) {
    r.label = tag + ": " + r.label;
    into.ratios.push_back(std::move(r));
  }
  for (auto& n : part.notes) into.notes.push_back(tag + ": " + n);
  into.empty = into.empty || part.empty;
}

ExperimentReport run_lower_bound(const SolverConfig& config, const LabSettings& settings) {
  ExperimentReport report{"lower-bound", {}, {}, false, {}};
  const double p_inf[] = {kInf};
  const LinearSeries lin = linear_evolution_series(config, p_inf);
  merge_report(report, evaluate_lower_bound(lin.lp.front(), settings), "linear");
  if (config.nonlinear && config.amplitude > 0.0) {
    const SimulationResult sim = simulate(config);
    merge_report(report, evaluate_lower_bound(column(sim.rows, &DiagnosticsRow::linf_av), settings),
          "nonlinear");
  }
  return report;
}

ExperimentReport run_weighted_decay(const SolverConfig& config, const LabSettings& settings) {
  ExperimentReport report{"weighted-decay", {}, {}, false, {}};
  const LinearSeries lin = linear_evolution_series(config, {});
  merge_report(report, evaluate_weighted_decay(lin.weighted_sup, settings), "linear");
  if (config.nonlinear && config.amplitude > 0.0) {
    const SimulationResult sim = simulate(config);
    merge_report(report,
          evaluate_weighted_decay(column(sim.rows, &DiagnosticsRow::weighted_sup), settings),
          "nonlinear");
  }
  return report;
}

KernelProbeReport run_kernel_lower_probe(std::span<const double> t_list, Branch branch,
                                         const LabSettings& settings) {
  for (double t : t_list)
    if (!(t >= 4.0)) throw DomainError("kernel probe requires t >= 4");
  KernelProbeReport out;
  out.report.experiment = "kernel-probe";
  if (t_list.empty()) {
    out.report.empty = true;
    return out;
  }
  const CutoffPsi psi;
  const RadialGrid grid = default_kernel_grid();
  const DyadicPartition part = DyadicPartition::for_grid(grid);
  DecaySeries scaled;
  for (double t : t_list) {
    KernelProbeSample sample;
    sample.t = t;
    const auto points = default_probe_points(t);
    const ProbeResult probe = kernel_probe(t, psi, points, branch);
    sample.sup = probe.sup;
    sample.scaled = t * t * probe.sup;
    sample.nodes_per_axis = probe.nodes_per_axis;
    sample.refinement_change = probe.refinement_change;
    sample.j0 = j0_for_time(t);

    const int j0 = sample.j0;
    const ComplexRadialField frame = semigroup_kernel(grid, t, branch, [j0](double rho) {
      double m = 0.0;
      for (int j = j0 - 2; j <= j0 + 2; ++j) m += phi_block(j, rho);
      return m;
    });
    sample.frame_sup = lp_norm_pair(frame.re, frame.im, kInf);
    for (int j = part.j_min; j <= part.j_max; ++j) {
      const ComplexRadialField piece =
          semigroup_kernel(grid, t, branch, [j](double rho) { return phi_block(j, rho); });
      sample.besov_inf_inf = std::max(sample.besov_inf_inf, lp_norm_pair(piece.re, piece.im, kInf));
    }
    scaled.push(t, probe.sup);
    out.samples.push_back(sample);
  }
  const double lo = *std::min_element(t_list.begin(), t_list.end());
  const double hi = *std::max_element(t_list.begin(), t_list.end());
  out.report.ratios.push_back(
      check_scaled_ratio("t^2 sup |K_t|", scaled, lo, hi, 2.0, settings.ratio_max));
  RatioCheck refinement{"quadrature refinement change", lo, hi, kInf, 0.0, 0.0, 1e-6, true};
  for (const auto& s : out.samples) {
    refinement.min = std::min(refinement.min, s.refinement_change);
    refinement.max = std::max(refinement.max, s.refinement_change);
  }
  refinement.ratio = refinement.max;
  refinement.pass = refinement.max < 1e-6;
  out.report.ratios.push_back(refinement);
  return out;
}

}  // namespace radcns
