#include "radcns/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "radcns/besov.hpp"
#include "radcns/errors.hpp"
#include "radcns/kernels.hpp"
#include "radcns/radial.hpp"
#include "radcns/semigroup.hpp"

namespace radcns {
namespace {

std::size_t dealias_cutoff(std::size_t n, double fraction) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
}

void dealias_in_place(RadialScalarField& spectral, double fraction) {
  const std::size_t keep = dealias_cutoff(spectral.size(), fraction);
  std::fill(spectral.values.begin() + static_cast<std::ptrdiff_t>(keep), spectral.values.end(),
            0.0);
}

RadialScalarField dealiased(RadialScalarField spectral, double fraction) {
  dealias_in_place(spectral, fraction);
  return spectral;
}

RadialScalarField multiply_by_rho(const RadialScalarField& spectral, double power) {
  RadialScalarField out = spectral;
  for (std::size_t k = 0; k < out.size(); ++k)
    out.values[k] *= std::pow(out.grid.rho(k), power);
  return out;
}

// Gradient profile of a physical-space product, dealiased before differentiation.
RadialVectorProfile product_gradient(RadialScalarField physical, double fraction) {
  return gradient_profile(dealiased(to_spectral(physical), fraction));
}

void check_finite(const RadialScalarField& f, double time, const char* what) {
  for (std::size_t k = 0; k < f.size(); ++k)
    if (!std::isfinite(f.values[k]))
      throw SolverAbort(std::string("non-finite ") + what + " at mode " + std::to_string(k),
                        time, static_cast<std::ptrdiff_t>(k));
}

void check_density(const RadialScalarField& a, double floor, double time) {
  std::size_t worst = 0;
  for (std::size_t m = 1; m < a.size(); ++m)
    if (a.values[m] < a.values[worst]) worst = m;
  if (1.0 + a.values[worst] <= floor) {
    std::ostringstream msg;
    msg << "density guard: min(1 + a) = " << 1.0 + a.values[worst] << " <= " << floor
        << " at r = " << a.grid.r(worst) << ", t = " << time;
    throw SolverAbort(msg.str(), time, static_cast<std::ptrdiff_t>(worst));
  }
}

void require_integral_ratio(double value, double step, const char* name) {
  const double ratio = value / step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError(std::string(name) + " must be an integer multiple of dt");
}

// y <- y + scale * mats (x1, x2)
void add_mode_product(const std::vector<ModeMatrix>& mats, double scale,
                      const std::vector<double>& x1, const std::vector<double>& x2,
                      std::vector<double>& y1, std::vector<double>& y2) {
  const auto n = static_cast<std::ptrdiff_t>(mats.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const ModeMatrix& m = mats[k];
    y1[k] += scale * (m.m11 * x1[k] + m.m12 * x2[k]);
    y2[k] += scale * (m.m21 * x1[k] + m.m22 * x2[k]);
  }
}

}  // namespace

PressureLaw::PressureLaw(double gamma_) : gamma(gamma_) {
  if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
}

double PressureLaw::pressure(double rho) const { return std::pow(rho, gamma) / gamma; }
double PressureLaw::dpressure(double rho) const { return std::pow(rho, gamma - 1.0); }
double PressureLaw::beta(double a) const {
  if (gamma == 2.0) return 0.0;
  return std::pow(1.0 + a, gamma - 2.0) - 1.0;
}

void SolverConfig::validate() const {
  (void)grid();
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(final_time >= 0.0)) throw ConfigError("T must be non-negative");
  if (final_time > 0.0 && final_time < dt) throw ConfigError("T must be at least dt");
  if (!(cadence > 0.0)) throw ConfigError("cadence must be positive");
  if (!(gamma > 1.0)) throw ConfigError("gamma must exceed 1");
  if (!(amplitude >= 0.0)) throw ConfigError("c must be non-negative");
  if (!(width > 0.0)) throw ConfigError("w must be positive");
  if (!(dealias > 0.0 && dealias <= 1.0)) throw ConfigError("dealias must lie in (0, 1]");
  if (!(density_floor > 0.0 && density_floor < 1.0))
    throw ConfigError("density floor must lie in (0, 1)");
  if (radius < 2.0 * final_time + 10.0 * width)
    throw ConfigError("R must be at least 2T + 10w so the acoustic front stays inside the domain");
  require_integral_ratio(final_time, dt, "T");
  require_integral_ratio(cadence, dt, "cadence");
}

SolverState SolverState::initial(const RadialScalarField& a0, const RadialScalarField& v0) {
  require_same_grid(a0.grid, v0.grid, "SolverState::initial");
  RadialScalarField a = in_space(a0, Space::spectral);
  RadialScalarField v = in_space(v0, Space::spectral);
  return SolverState{0.0, a, v, a, v};
}

std::pair<RadialScalarField, RadialScalarField> initial_data_gaussian(double amplitude,
                                                                      double width,
                                                                      const RadialGrid& grid) {
  if (!(amplitude >= 0.0)) throw ConfigError("c must be non-negative");
  if (!(width > 0.0)) throw ConfigError("w must be positive");
  auto a0 = RadialScalarField::sample(grid, Space::physical, [&](double r) {
    const double s = r / width;
    return amplitude * std::exp(-s * s);
  });
  return {a0, RadialScalarField::zeros(grid, Space::physical)};
}

RadialVectorProfile reconstruct_velocity(const RadialScalarField& v_hat) {
  require_space(v_hat, Space::spectral, "reconstruct_velocity");
  RadialVectorProfile u = gradient_profile(multiply_by_rho(v_hat, -1.0));
  for (double& x : u.values) x = -x;
  return u;
}

NonlinearTerms nonlinear_rhs(const RadialScalarField& a_hat, const RadialScalarField& v_hat,
                             const PressureLaw& law, const NonlinearOptions& options) {
  require_space(a_hat, Space::spectral, "nonlinear_rhs");
  require_space(v_hat, Space::spectral, "nonlinear_rhs");
  require_same_grid(a_hat.grid, v_hat.grid, "nonlinear_rhs");
  const RadialGrid& grid = a_hat.grid;
  const std::size_t n = grid.size();
  const double frac = options.dealias;

  const RadialScalarField a_s = dealiased(a_hat, frac);
  const RadialScalarField v_s = dealiased(v_hat, frac);
  const RadialScalarField a = to_physical(a_s);
  check_density(a, options.density_floor, options.time);

  const RadialScalarField w_hat = multiply_by_rho(v_s, 1.0);  // |D| v
  const RadialVectorProfile u = reconstruct_velocity(v_s);

  // f = -div(a u)
  RadialVectorProfile au = RadialVectorProfile::zeros(grid);
  for (std::size_t m = 0; m < n; ++m) au.values[m] = a.values[m] * u.values[m];
  RadialScalarField f = divergence_of_profile(au);
  for (double& x : f.values) x = -x;

  // G = -grad(U^2/2) - a/(1+a) grad(|D| v) - beta(a) grad(a)
  RadialScalarField half_u_sq = RadialScalarField::zeros(grid, Space::physical);
  for (std::size_t m = 0; m < n; ++m) half_u_sq.values[m] = 0.5 * u.values[m] * u.values[m];
  const RadialVectorProfile grad_kinetic = product_gradient(half_u_sq, frac);
  const RadialVectorProfile grad_w = gradient_profile(w_hat);
  const RadialVectorProfile grad_a = gradient_profile(a_s);

  RadialVectorProfile g = RadialVectorProfile::zeros(grid);
  for (std::size_t m = 0; m < n; ++m) {
    const double am = a.values[m];
    g.values[m] = -grad_kinetic.values[m] - am / (1.0 + am) * grad_w.values[m] -
                  law.beta(am) * grad_a.values[m];
  }
  RadialScalarField h_hat = to_spectral(divergence_of_profile(g));
  for (std::size_t k = 0; k < n; ++k) h_hat.values[k] /= grid.rho(k);

  NonlinearTerms out{dealiased(to_spectral(f), frac), dealiased(std::move(h_hat), frac)};
  check_finite(out.f_hat, options.time, "f");
  check_finite(out.h_hat, options.time, "h");
  return out;
}

Etd2Stepper::Etd2Stepper(const RadialGrid& grid, double dt, PressureLaw law,
                         NonlinearOptions options, bool nonlinear)
    : grid_(grid), dt_(dt), law_(law), options_(options), nonlinear_(nonlinear) {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  const std::size_t n = grid.size();
  exp_.resize(n);
  phi1_.resize(n);
  phi2_.resize(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double rho = grid.rho(k);
    exp_[k] = mode_function(ModeFunction::exp, rho, dt);
    phi1_[k] = mode_function(ModeFunction::phi1, rho, dt);
    phi2_[k] = mode_function(ModeFunction::phi2, rho, dt);
  }
}

SolverState Etd2Stepper::step(const SolverState& state) const {
  require_same_grid(state.a_hat.grid, grid_, "Etd2Stepper::step");
  SolverState next = state;
  next.t = state.t + dt_;
  kernels::apply_modes(exp_, next.a_lin.values, next.v_lin.values);
  kernels::apply_modes(exp_, next.a_hat.values, next.v_hat.values);
  if (!nonlinear_) return next;

  NonlinearOptions opts = options_;
  opts.time = state.t;
  const NonlinearTerms n0 = nonlinear_rhs(state.a_hat, state.v_hat, law_, opts);
  // predictor: e^{dtM} u + dt phi1 N(u)
  add_mode_product(phi1_, dt_, n0.f_hat.values, n0.h_hat.values, next.a_hat.values,
                   next.v_hat.values);
  opts.time = next.t;
  const NonlinearTerms n1 = nonlinear_rhs(next.a_hat, next.v_hat, law_, opts);
  // corrector: + dt phi2 (N(u~) - N(u))
  std::vector<double> df(grid_.size()), dh(grid_.size());
  for (std::size_t k = 0; k < df.size(); ++k) {
    df[k] = n1.f_hat.values[k] - n0.f_hat.values[k];
    dh[k] = n1.h_hat.values[k] - n0.h_hat.values[k];
  }
  add_mode_product(phi2_, dt_, df, dh, next.a_hat.values, next.v_hat.values);

  check_finite(next.a_hat, next.t, "a");
  check_finite(next.v_hat, next.t, "v");
  check_density(to_physical(next.a_hat), options_.density_floor, next.t);
  return next;
}

SolverState step_etd2(const SolverState& state, double dt, const PressureLaw& law,
                      const NonlinearOptions& options) {
  return Etd2Stepper(state.a_hat.grid, dt, law, options).step(state);
}

std::pair<RadialScalarField, RadialScalarField> nonlinear_part(const SolverState& state) {
  RadialScalarField da = state.a_hat;
  RadialScalarField dv = state.v_hat;
  for (std::size_t k = 0; k < da.size(); ++k) {
    da.values[k] -= state.a_lin.values[k];
    dv.values[k] -= state.v_lin.values[k];
  }
  return {to_physical(da), to_physical(dv)};
}

std::pair<RadialScalarField, RadialScalarField> physical_pair(const SolverState& state) {
  return {to_physical(state.a_hat), to_physical(state.v_hat)};
}

DiagnosticsRow diagnose(const SolverState& state) {
  const auto [a, v] = physical_pair(state);
  const auto [na, nv] = nonlinear_part(state);
  const BesovSpec b21{0.0, 2.0, 1.0, FrequencyBand::full, 0};
  const BesovSpec binf1{0.0, std::numeric_limits<double>::infinity(), 1.0, FrequencyBand::full,
                        0};
  DiagnosticsRow row;
  row.t = state.t;
  row.l2_av = lp_norm_pair(a, v, 2.0);
  row.linf_av = lp_norm_pair(a, v, std::numeric_limits<double>::infinity());
  row.besov0_21 = besov_norm_pair(state.a_hat, state.v_hat, b21);
  row.besov0_inf1 = besov_norm_pair(state.a_hat, state.v_hat, binf1);
  row.nl_l2 = lp_norm_pair(na, nv, 2.0);
  row.nl_besov_inf1 = besov_norm_pair(na, nv, binf1);
  row.nl_linf = lp_norm_pair(na, nv, std::numeric_limits<double>::infinity());
  row.weighted_sup = weighted_sup_norm_pair(a, v);
  row.energy = row.l2_av * row.l2_av;
  return row;
}

SimulationResult simulate(const SolverConfig& config,
                          const std::function<void(const DiagnosticsRow&)>& on_row) {
  config.validate();
  const RadialGrid grid = config.grid();
  const auto [a0, v0] = initial_data_gaussian(config.amplitude, config.width, grid);
  SolverState state = SolverState::initial(a0, v0);

  SimulationResult result{{}, state};
  auto emit = [&](const SolverState& s) {
    result.rows.push_back(diagnose(s));
    if (on_row) on_row(result.rows.back());
  };
  emit(state);

  const auto steps = static_cast<std::size_t>(std::llround(config.final_time / config.dt));
  const auto every = static_cast<std::size_t>(std::llround(config.cadence / config.dt));
  if (steps > 0) {
    NonlinearOptions options{config.dealias, config.density_floor, 0.0};
    const Etd2Stepper stepper(grid, config.dt, PressureLaw(config.gamma), options,
                              config.nonlinear && config.amplitude > 0.0);
    for (std::size_t i = 1; i <= steps; ++i) {
      state = stepper.step(state);
      // Pin the clock to the step count so cadence times are exact.
      state.t = static_cast<double>(i) * config.dt;
      if (i % every == 0 || i == steps) emit(state);
    }
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace radcns
