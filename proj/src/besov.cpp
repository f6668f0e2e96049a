#include "radcns/besov.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "radcns/errors.hpp"
#include "radcns/radial.hpp"

namespace radcns {
namespace {

double smooth_step_piece(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

int floor_log2(double x) { return std::ilogb(x); }

int ceil_log2(double x) {
  const int e = std::ilogb(x);
  return std::ldexp(1.0, e) == x ? e : e + 1;
}

void require_resolved(const DyadicPartition& part, int j, const char* what) {
  if (!part.contains(j))
    throw RangeError(std::string(what) + ": block " + std::to_string(j) +
                     " outside resolved range [" + std::to_string(part.j_min) + ", " +
                     std::to_string(part.j_max) + "]");
}

RadialScalarField block_spectral(const RadialScalarField& spectral, int j) {
  RadialScalarField out = spectral;
  for (std::size_t k = 0; k < out.size(); ++k) out.values[k] *= phi_block(j, out.grid.rho(k));
  return out;
}

double spectral_l2(const RadialScalarField& spectral) {
  double sum = 0.0;
  for (std::size_t k = 0; k < spectral.size(); ++k) {
    const double rho = spectral.grid.rho(k);
    sum += rho * rho * spectral.values[k] * spectral.values[k];
  }
  return std::sqrt(4.0 * std::numbers::pi * spectral.grid.drho() * sum);
}

std::vector<int> selected_blocks(const DyadicPartition& part, const BesovSpec& spec,
                                 std::size_t& unresolved) {
  int lo = part.j_min;
  int hi = part.j_max;
  unresolved = 0;
  if (spec.band == FrequencyBand::low) {
    if (spec.j0 > part.j_max) unresolved = static_cast<std::size_t>(spec.j0 - part.j_max);
    hi = std::min(hi, spec.j0);
  } else if (spec.band == FrequencyBand::high) {
    if (spec.j0 < part.j_min) unresolved = static_cast<std::size_t>(part.j_min - spec.j0);
    lo = std::max(lo, spec.j0);
  }
  std::vector<int> out;
  for (int j = lo; j <= hi; ++j) out.push_back(j);
  return out;
}

void validate_spec(const BesovSpec& spec) {
  if (!(spec.p >= 1.0) || !(spec.q >= 1.0))
    throw ConfigError("Besov exponents p and q must lie in [1, inf]");
}

double combine(const BesovBreakdown& parts, const BesovSpec& spec) {
  double acc = 0.0;
  for (std::size_t i = 0; i < parts.indices.size(); ++i) {
    const double term = std::exp2(spec.s * parts.indices[i]) * parts.block_norms[i];
    if (std::isinf(spec.q))
      acc = std::max(acc, term);
    else
      acc += std::pow(term, spec.q);
  }
  if (std::isinf(spec.q) || acc == 0.0) return acc;
  return std::pow(acc, 1.0 / spec.q);
}

std::vector<double> spectral_derivative(const RadialScalarField& spectral) {
  const std::size_t n = spectral.size();
  const double h = spectral.grid.drho();
  const auto& f = spectral.values;
  std::vector<double> d(n);
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  return d;
}

}  // namespace

double theta(double rho) {
  if (rho <= 1.0) return 1.0;
  if (rho >= 2.0) return 0.0;
  const double up = smooth_step_piece(2.0 - rho);
  const double down = smooth_step_piece(rho - 1.0);
  return up / (up + down);
}

double phi_block(int j, double rho) {
  return theta(std::ldexp(rho, -j)) - theta(std::ldexp(rho, -j + 1));
}

DyadicPartition DyadicPartition::for_grid(const RadialGrid& grid) {
  return {floor_log2(grid.rho(0)), ceil_log2(grid.rho_max())};
}

RadialScalarField block(const RadialScalarField& field, int j) {
  require_resolved(DyadicPartition::for_grid(field.grid), j, "block");
  return in_space(block_spectral(in_space(field, Space::spectral), j), field.space);
}

RadialScalarField low_cutoff(const RadialScalarField& field, int j) {
  require_resolved(DyadicPartition::for_grid(field.grid), j, "low_cutoff");
  RadialScalarField spectral = in_space(field, Space::spectral);
  for (std::size_t k = 0; k < spectral.size(); ++k)
    spectral.values[k] *= theta(std::ldexp(spectral.grid.rho(k), -j));
  return in_space(spectral, field.space);
}

BesovBreakdown besov_breakdown(const RadialScalarField& field, const BesovSpec& spec) {
  validate_spec(spec);
  const DyadicPartition part = DyadicPartition::for_grid(field.grid);
  BesovBreakdown out;
  out.indices = selected_blocks(part, spec, out.unresolved);
  const RadialScalarField spectral = in_space(field, Space::spectral);
  for (int j : out.indices) {
    const RadialScalarField piece = block_spectral(spectral, j);
    out.block_norms.push_back(spec.p == 2.0 ? spectral_l2(piece)
                                            : lp_norm(to_physical(piece), spec.p));
  }
  out.value = combine(out, spec);
  return out;
}

double besov_norm(const RadialScalarField& field, const BesovSpec& spec) {
  return besov_breakdown(field, spec).value;
}

double besov_norm_pair(const RadialScalarField& f, const RadialScalarField& g,
                       const BesovSpec& spec) {
  validate_spec(spec);
  require_same_grid(f.grid, g.grid, "besov_norm_pair");
  const DyadicPartition part = DyadicPartition::for_grid(f.grid);
  BesovBreakdown parts;
  parts.indices = selected_blocks(part, spec, parts.unresolved);
  const RadialScalarField fs = in_space(f, Space::spectral);
  const RadialScalarField gs = in_space(g, Space::spectral);
  for (int j : parts.indices) {
    const RadialScalarField fj = block_spectral(fs, j);
    const RadialScalarField gj = block_spectral(gs, j);
    if (spec.p == 2.0)
      parts.block_norms.push_back(std::hypot(spectral_l2(fj), spectral_l2(gj)));
    else
      parts.block_norms.push_back(lp_norm_pair(to_physical(fj), to_physical(gj), spec.p));
  }
  return combine(parts, spec);
}

BesovBreakdown weighted_besov_breakdown_p2(const RadialScalarField& field, int axis,
                                           const BesovSpec& spec) {
  if (spec.p != 2.0)
    throw UnsupportedParameterError("weighted Besov norm is only available for p = 2");
  if (axis < 1 || axis > 3) throw UsageError("weighted Besov norm: axis must be 1, 2 or 3");
  validate_spec(spec);
  const RadialScalarField spectral = in_space(field, Space::spectral);
  const auto derivative = spectral_derivative(spectral);
  const DyadicPartition part = DyadicPartition::for_grid(field.grid);
  BesovBreakdown out;
  out.indices = selected_blocks(part, spec, out.unresolved);
  const double h = spectral.grid.drho();
  for (int j : out.indices) {
    double sum = 0.0;
    for (std::size_t k = 0; k < spectral.size(); ++k) {
      const double rho = spectral.grid.rho(k);
      const double w = phi_block(j, rho) * derivative[k] * rho;
      sum += w * w;
    }
    out.block_norms.push_back(std::sqrt(4.0 * std::numbers::pi / 3.0 * h * sum));
  }
  out.value = combine(out, spec);
  return out;
}

double weighted_besov_norm_p2(const RadialScalarField& field, int axis, const BesovSpec& spec) {
  return weighted_besov_breakdown_p2(field, axis, spec).value;
}

int j0_for_time(double t) {
  if (!(t >= 1.0)) throw DomainError("j0_for_time: t must be >= 1");
  // Rounded up: with the floor the lower end t^{-1/2}/2 escapes (2^{j0-2}, 2^{j0+2})
  // whenever t is not a power of 4. Both agree on powers of 4.
  return 1 - static_cast<int>(std::ceil(0.5 * std::log2(t)));
}

}  // namespace radcns
