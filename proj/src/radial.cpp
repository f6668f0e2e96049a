#include "radcns/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "radcns/errors.hpp"
#include "radcns/kernels.hpp"

namespace radcns {
namespace {

const double kSqrt2OverPi = std::sqrt(2.0 / std::numbers::pi);

// sine_sum returns 2 sum_j x_j sin(...); the transform carries a half of that.
RadialScalarField weighted_sine_transform(const RadialScalarField& field, Space target) {
  const RadialGrid& grid = field.grid;
  const std::size_t n = grid.size();
  const bool forward = target == Space::spectral;
  const double step = forward ? grid.dr() : grid.drho();

  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double node = forward ? grid.r(i) : grid.rho(i);
    g[i] = node * field.values[i];
  }
  std::vector<double> s(n);
  kernels::sine_sum(g, s);

  RadialScalarField out = RadialScalarField::zeros(grid, target);
  const double scale = 0.5 * kSqrt2OverPi * step;
  for (std::size_t i = 0; i < n; ++i) {
    const double node = forward ? grid.rho(i) : grid.r(i);
    out.values[i] = scale * s[i] / node;
  }
  return out;
}

}  // namespace

RadialScalarField to_spectral(const RadialScalarField& field) {
  require_space(field, Space::physical, "to_spectral");
  return weighted_sine_transform(field, Space::spectral);
}

RadialScalarField to_physical(const RadialScalarField& field) {
  require_space(field, Space::spectral, "to_physical");
  return weighted_sine_transform(field, Space::physical);
}

RadialScalarField in_space(const RadialScalarField& field, Space space) {
  if (field.space == space) return field;
  return space == Space::spectral ? to_spectral(field) : to_physical(field);
}

RadialScalarField apply_multiplier(const RadialScalarField& field,
                                   const std::function<double(double)>& m) {
  require_space(field, Space::spectral, "apply_multiplier");
  RadialScalarField out = field;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double factor = m(field.grid.rho(k));
    if (!std::isfinite(factor))
      throw NumericDomainError("apply_multiplier: non-finite multiplier at rho = " +
                               std::to_string(field.grid.rho(k)));
    out.values[k] *= factor;
  }
  return out;
}

RadialScalarField apply_fractional_derivative(const RadialScalarField& field, double s) {
  return apply_multiplier(field, [s](double rho) { return std::pow(rho, s); });
}

RadialVectorProfile gradient_profile(const RadialScalarField& field) {
  const RadialGrid& grid = field.grid;
  const std::size_t n = grid.size();
  const RadialScalarField spectral = in_space(field, Space::spectral);
  const RadialScalarField physical = in_space(field, Space::physical);

  // g = r w has sine coefficients rho_k w^_k; d/dr sin(r rho) = rho cos(r rho).
  std::vector<double> x(n), c(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double rho = grid.rho(k);
    x[k] = rho * rho * spectral.values[k];
  }
  kernels::cosine_sum(x, c);

  RadialVectorProfile out = RadialVectorProfile::zeros(grid);
  const double scale = 0.5 * kSqrt2OverPi * grid.drho();
  for (std::size_t m = 0; m < n; ++m) {
    const double dg = scale * c[m];
    // w' = g'/r - g/r^2 and g/r = w.
    out.values[m] = (dg - physical.values[m]) / grid.r(m);
  }
  return out;
}

RadialScalarField divergence_of_profile(const RadialVectorProfile& vec) {
  const RadialGrid& grid = vec.grid;
  const std::size_t n = grid.size();
  std::vector<double> coeff(n), x(n), dg(n);
  kernels::sine_sum(vec.values, coeff);
  for (std::size_t k = 0; k < n; ++k) x[k] = coeff[k] * grid.rho(k);
  kernels::cosine_sum(x, dg);

  RadialScalarField out = RadialScalarField::zeros(grid, Space::physical);
  const double scale = 1.0 / (2.0 * static_cast<double>(n + 1));
  for (std::size_t m = 0; m < n; ++m)
    out.values[m] = scale * dg[m] + 2.0 * vec.values[m] / grid.r(m);
  return out;
}

namespace {

double lp_from_magnitudes(const RadialGrid& grid, const std::vector<double>& mag, double p) {
  if (!(p >= 1.0)) throw ConfigError("lp_norm: p must be >= 1");
  if (std::isinf(p)) return mag.empty() ? 0.0 : *std::max_element(mag.begin(), mag.end());
  double sum = 0.0;
  for (std::size_t m = 0; m < mag.size(); ++m) {
    const double r = grid.r(m);
    if (mag[m] != 0.0) sum += std::pow(mag[m], p) * r * r;
  }
  return std::pow(4.0 * std::numbers::pi * grid.dr() * sum, 1.0 / p);
}

std::vector<double> magnitudes(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::abs(x); });
  return out;
}

}  // namespace

double lp_norm(const RadialScalarField& field, double p) {
  require_space(field, Space::physical, "lp_norm");
  return lp_from_magnitudes(field.grid, magnitudes(field.values), p);
}

double lp_norm(const RadialVectorProfile& vec, double p) {
  return lp_from_magnitudes(vec.grid, magnitudes(vec.values), p);
}

double lp_norm_pair(const RadialScalarField& f, const RadialScalarField& g, double p) {
  require_space(f, Space::physical, "lp_norm_pair");
  require_space(g, Space::physical, "lp_norm_pair");
  require_same_grid(f.grid, g.grid, "lp_norm_pair");
  std::vector<double> mag(f.size());
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::hypot(f.values[i], g.values[i]);
  return lp_from_magnitudes(f.grid, mag, p);
}

double weighted_sup_norm(const RadialScalarField& field) {
  require_space(field, Space::physical, "weighted_sup_norm");
  double best = 0.0;
  for (std::size_t m = 0; m < field.size(); ++m)
    best = std::max(best, field.grid.r(m) * std::abs(field.values[m]));
  return best;
}

double weighted_sup_norm_pair(const RadialScalarField& f, const RadialScalarField& g) {
  require_space(f, Space::physical, "weighted_sup_norm_pair");
  require_space(g, Space::physical, "weighted_sup_norm_pair");
  require_same_grid(f.grid, g.grid, "weighted_sup_norm_pair");
  double best = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m)
    best = std::max(best, f.grid.r(m) * std::hypot(f.values[m], g.values[m]));
  return best;
}

double weighted_fourier_bound(const RadialScalarField& field) {
  const RadialScalarField spectral = in_space(field, Space::spectral);
  double sum = 0.0;
  for (std::size_t k = 0; k < spectral.size(); ++k)
    sum += std::abs(spectral.values[k]) * spectral.grid.rho(k);
  return 4.0 * std::numbers::pi * spectral.grid.drho() * sum;
}

double spectral_l2_norm(const RadialScalarField& field) {
  const RadialScalarField f = in_space(field, Space::spectral);
  double sum = 0.0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    const double x = f.grid.rho(k) * f.values[k];
    sum += x * x;
  }
  return std::sqrt(4.0 * std::numbers::pi * f.grid.drho() * sum);
}

TransformCheck transform_check(const RadialScalarField& physical) {
  require_space(physical, Space::physical, "transform_check");
  const RadialScalarField spectral = to_spectral(physical);
  const RadialScalarField back = to_physical(spectral);
  double err = 0.0;
  double scale = 0.0;
  for (std::size_t m = 0; m < back.values.size(); ++m) {
    err = std::max(err, std::abs(back.values[m] - physical.values[m]));
    scale = std::max(scale, std::abs(physical.values[m]));
  }
  TransformCheck out;
  out.involution = scale > 0.0 ? err / scale : err;
  const double l2 = lp_norm(physical, 2.0);
  const double l2_hat = spectral_l2_norm(spectral);
  out.parseval = l2 > 0.0 ? std::abs(l2 - l2_hat) / l2 : l2_hat;
  return out;
}

}  // namespace radcns
