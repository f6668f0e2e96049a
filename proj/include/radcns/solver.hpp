#pragma once

// Radially symmetric (a, v) system
//   a_t + |D| v = f,      f = -div(a u),
//   v_t - Lap v - |D| a = h,  h = |D|^{-1} div(-u.grad u - a/(1+a) A u - beta(a) grad a),
// with u = -grad |D|^{-1} v the curl-free velocity, integrated by second-order
// exponential time differencing on the exact per-mode semigroup.

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "radcns/grid.hpp"
#include "radcns/mode_matrix.hpp"

namespace radcns {

/// Barotropic law P(rho) = rho^gamma / gamma, normalised so that P'(1) = 1.
struct PressureLaw {
  double gamma = 1.4;

  /// Throws ConfigError unless gamma > 1.
  explicit PressureLaw(double gamma_ = 1.4);

  double pressure(double rho) const;
  double dpressure(double rho) const;
  /// beta(a) = P'(1+a)/(1+a) - P'(1) = (1+a)^{gamma-2} - 1.
  double beta(double a) const;
};

struct SolverConfig {
  std::size_t modes = 16384;
  double radius = 500.0;
  double dt = 0.05;
  double final_time = 200.0;
  double cadence = 1.0;      // time between diagnostics rows
  double gamma = 1.4;
  double amplitude = 0.01;   // a0 = c exp(-(r/w)^2)
  double width = 1.0;
  double dealias = 2.0 / 3.0;
  double density_floor = 0.5;  // abort when min(1 + a) <= floor
  bool nonlinear = true;

  /// Throws ConfigError listing the first violated invariant.
  void validate() const;
  RadialGrid grid() const { return RadialGrid(modes, radius); }
};

struct SolverState {
  double t = 0.0;
  RadialScalarField a_hat;
  RadialScalarField v_hat;
  RadialScalarField a_lin;  // e^{tM}(a0, v0)
  RadialScalarField v_lin;

  static SolverState initial(const RadialScalarField& a0, const RadialScalarField& v0);
};

struct DiagnosticsRow {
  double t = 0.0;
  double l2_av = 0.0;
  double linf_av = 0.0;
  double besov0_21 = 0.0;
  double besov0_inf1 = 0.0;
  double nl_l2 = 0.0;
  double nl_besov_inf1 = 0.0;
  double weighted_sup = 0.0;
  // Not part of the CSV schema.
  double nl_linf = 0.0;
  double energy = 0.0;  // ||(a, v)||_2^2
};

/// a0(r) = c exp(-(r/w)^2), v0 = 0, both physical. Throws ConfigError for
/// c < 0 or w <= 0.
std::pair<RadialScalarField, RadialScalarField> initial_data_gaussian(double amplitude,
                                                                      double width,
                                                                      const RadialGrid& grid);

/// U = -(|D|^{-1} v)' : profile of the curl-free velocity with |D|^{-1} div u = v.
RadialVectorProfile reconstruct_velocity(const RadialScalarField& v_hat);

struct NonlinearTerms {
  RadialScalarField f_hat;
  RadialScalarField h_hat;
};

struct NonlinearOptions {
  double dealias = 2.0 / 3.0;
  double density_floor = 0.5;
  double time = 0.0;  // reported in aborts
};

/// Spectral (f^, h^) of the nonlinear forcing. Throws SolverAbort when
/// min(1 + a) <= density_floor.
NonlinearTerms nonlinear_rhs(const RadialScalarField& a_hat, const RadialScalarField& v_hat,
                             const PressureLaw& law, const NonlinearOptions& options = {});

/// ETD2 (Cox-Matthews RK2) stepper with per-mode e^{dt M}, phi1(dt M), phi2(dt M)
/// cached for a fixed grid and step.
class Etd2Stepper {
 public:
  Etd2Stepper(const RadialGrid& grid, double dt, PressureLaw law, NonlinearOptions options = {},
              bool nonlinear = true);

  SolverState step(const SolverState& state) const;
  double dt() const noexcept { return dt_; }

 private:
  RadialGrid grid_;
  double dt_;
  PressureLaw law_;
  NonlinearOptions options_;
  bool nonlinear_;
  std::vector<ModeMatrix> exp_;
  std::vector<ModeMatrix> phi1_;
  std::vector<ModeMatrix> phi2_;
};

SolverState step_etd2(const SolverState& state, double dt, const PressureLaw& law,
                      const NonlinearOptions& options = {});

/// Duhamel integral part (a - a_lin, v - v_lin) in physical space.
std::pair<RadialScalarField, RadialScalarField> nonlinear_part(const SolverState& state);

/// Physical-space (a, v).
std::pair<RadialScalarField, RadialScalarField> physical_pair(const SolverState& state);

DiagnosticsRow diagnose(const SolverState& state);

struct SimulationResult {
  std::vector<DiagnosticsRow> rows;
  SolverState final_state;
};

/// Runs the configured simulation, emitting a row every `cadence` (and at t = 0).
/// Deterministic given the config. Aborts propagate as SolverAbort.
SimulationResult simulate(const SolverConfig& config,
                          const std::function<void(const DiagnosticsRow&)>& on_row = {});

}  // namespace radcns
