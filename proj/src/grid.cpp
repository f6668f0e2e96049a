#include "radcns/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "radcns/errors.hpp"

namespace radcns {

const char* to_string(Space space) {
  return space == Space::physical ? "physical" : "spectral";
}

RadialGrid::RadialGrid(std::size_t mode_count, double outer_radius)
    : n_(mode_count), radius_(outer_radius) {
  if (mode_count < min_modes)
    throw ConfigError("N below minimum " + std::to_string(min_modes) + " (got " +
                      std::to_string(mode_count) + ")");
  if (!(outer_radius > 0.0) || !std::isfinite(outer_radius))
    throw ConfigError("R must be positive and finite");
  dr_ = radius_ / static_cast<double>(n_ + 1);
  drho_ = std::numbers::pi / radius_;
}

std::vector<double> RadialGrid::radii() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = r(i);
  return out;
}

std::vector<double> RadialGrid::frequencies() const {
  std::vector<double> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i] = rho(i);
  return out;
}

RadialGrid make_grid(std::size_t mode_count, double outer_radius) {
  return RadialGrid(mode_count, outer_radius);
}

RadialScalarField RadialScalarField::zeros(const RadialGrid& grid, Space space) {
  return RadialScalarField{grid, std::vector<double>(grid.size(), 0.0), space};
}

RadialVectorProfile RadialVectorProfile::zeros(const RadialGrid& grid) {
  return RadialVectorProfile{grid, std::vector<double>(grid.size(), 0.0)};
}

void require_same_grid(const RadialGrid& a, const RadialGrid& b, const char* what) {
  if (!(a == b)) throw UsageError(std::string(what) + ": grid mismatch");
}

void require_space(const RadialScalarField& f, Space expected, const char* what) {
  if (f.space != expected)
    throw UsageError(std::string(what) + ": expected " + to_string(expected) +
                     " field, got " + to_string(f.space));
}

}  // namespace radcns
