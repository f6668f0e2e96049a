#pragma once

// Decay-rate experiments: norm time series, log-log exponent fits, and
// verdicts against the sharp exponents
//   sigma(p) = (3/2)(1 - 1/p) + (1/2)(1 - 2/p)
// for the solution, sigma(p) + 1/2 for its Duhamel part, and 3/4 for the
// weighted sup norm.

#include <span>
#include <string>
#include <vector>

#include "radcns/semigroup.hpp"
#include "radcns/solver.hpp"

namespace radcns {

struct DecaySeries {
  std::vector<double> t;
  std::vector<double> value;

  void push(double time, double v) {
    t.push_back(time);
    value.push_back(v);
  }
  std::size_t size() const { return t.size(); }
  bool all_zero() const;
};

/// Fit of log(value) = intercept - slope log(t), i.e. value ~ t^{-slope}.
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::size_t points = 0;
  bool zero_variance = false;  // all log-values equal; r2 reported as 1
};

enum class ExponentKind { full, nonlinear, weighted_sup };

/// Throws UnsupportedParameterError for p < 2 (p may be +inf).
double theoretical_exponent(double p, ExponentKind kind);

/// Least squares on (log t, log value) over samples with t in [t_lo, t_hi].
/// Throws FitError if fewer than 4 samples fall in the window or any of them is
/// not strictly positive (the message lists the offending times).
FitResult fit_decay_exponent(const DecaySeries& series, double t_lo, double t_hi);

struct FitCheck {
  std::string label;
  double target = 0.0;
  double tolerance = 0.0;
  double min_r2 = 0.0;
  FitResult fit;
  bool pass = false;
};

/// Boundedness check on value * weight(t) over a window.
struct RatioCheck {
  std::string label;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double min = 0.0;
  double max = 0.0;
  double ratio = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<FitCheck> fits;
  std::vector<RatioCheck> ratios;
  bool empty = false;  // no signal (zero data): no fit attempted
  std::vector<std::string> notes;

  bool pass() const;
  std::string verdict() const;  // PASS, FAIL or EMPTY
};

FitCheck check_fit(std::string label, const DecaySeries& series, double t_lo, double t_hi,
                   double target, double tolerance, double min_r2);

/// min/max of t^power * value over the window; passes when min > 0 and max/min <= threshold.
RatioCheck check_scaled_ratio(std::string label, const DecaySeries& series, double t_lo,
                              double t_hi, double power, double threshold);

/// (t+1)^{3/4} value over the window, normalised by its value at t_lo; passes
/// when the maximum ratio is <= threshold.
RatioCheck check_weighted_bound(std::string label, const DecaySeries& series, double t_lo,
                                double t_hi, double threshold);

/// Fit windows and pass thresholds of the experiments.
struct LabSettings {
  double fit_lo = 10.0;
  double fit_hi = 200.0;
  double lower_lo = 20.0;
  double lower_hi = 200.0;
  double weighted_lo = 1.0;
  double weighted_hi = 200.0;
  double ratio_max = 3.0;
  double weighted_ratio_max = 5.0;
  double linear_r2 = 0.995;
  double nonlinear_r2 = 0.98;
};

/// Exact linear evolution of the Gaussian data: ||(a, v)(t)||_p for each p and
/// the weighted sup norm, at every cadence tick in (0, T].
struct LinearSeries {
  std::vector<double> p_values;
  std::vector<DecaySeries> lp;
  DecaySeries weighted_sup;
};
LinearSeries linear_evolution_series(const SolverConfig& config, std::span<const double> p_list);

/// Diagnostics columns of a simulation as decay series.
DecaySeries column(const std::vector<DiagnosticsRow>& rows, double DiagnosticsRow::*member);

/// Tolerance on the linear-evolution exponent: 0.05 at finite p, 0.10 at p = inf.
double linear_tolerance(double p);

ExperimentReport evaluate_linear_decay(const LinearSeries& series, const LabSettings& settings = {});
ExperimentReport evaluate_nonlinear_decay(const std::vector<DiagnosticsRow>& rows,
                                          std::span<const double> p_list,
                                          const LabSettings& settings = {});
ExperimentReport evaluate_lower_bound(const DecaySeries& linf, const LabSettings& settings = {});
ExperimentReport evaluate_weighted_decay(const DecaySeries& weighted,
                                         const LabSettings& settings = {});

/// Appends the bound checks and notes of `part`, labels prefixed by `tag`.
void merge_report(ExperimentReport& into, ExperimentReport part, const std::string& tag);

ExperimentReport run_linear_decay(const SolverConfig& config, std::span<const double> p_list,
                                  const LabSettings& settings = {});
/// p_list entries must be 2 or inf (the diagnostics columns).
ExperimentReport run_nonlinear_decay(const SolverConfig& config, std::span<const double> p_list,
                                     const LabSettings& settings = {});
/// Checks the exact linear evolution, and also the full solver when
/// config.nonlinear is set and c > 0.
ExperimentReport run_lower_bound(const SolverConfig& config, const LabSettings& settings = {});
ExperimentReport run_weighted_decay(const SolverConfig& config, const LabSettings& settings = {});

struct KernelProbeSample {
  double t = 0.0;
  double sup = 0.0;
  double scaled = 0.0;  // t^2 sup
  int nodes_per_axis = 0;
  double refinement_change = 0.0;
  int j0 = 0;
  double frame_sup = 0.0;   // || F^{-1}[sum_{|j-j0|<=2} phi_j e^{t lambda}] ||_inf
  double besov_inf_inf = 0.0;  // || F^{-1}[e^{t lambda}] ||_{B^0_{inf,inf}}
};

struct KernelProbeReport {
  ExperimentReport report;
  std::vector<KernelProbeSample> samples;
};

/// Throws DomainError if any t < 4.
KernelProbeReport run_kernel_lower_probe(std::span<const double> t_list,
                                         Branch branch = Branch::plus,
                                         const LabSettings& settings = {});

}  // namespace radcns
