#pragma once

#include <cstddef>
#include <vector>

namespace radcns {

enum class Space { physical, spectral };

const char* to_string(Space space);

/// Paired physical/spectral nodes for a 3D radial field reduced to 1D.
///
/// Physical nodes r_m = m dr (m = 1..N, dr = R/(N+1)) and spectral nodes
/// rho_k = k drho (drho = pi/R) satisfy dr * drho = pi/(N+1), which makes the
/// weighted type-I sine transform between them an exact involution. Neither
/// node set contains the origin.
class RadialGrid {
 public:
  static constexpr std::size_t min_modes = 8;

  /// Throws ConfigError unless mode_count >= 8 and outer_radius > 0.
  RadialGrid(std::size_t mode_count, double outer_radius);

  std::size_t size() const noexcept { return n_; }
  double outer_radius() const noexcept { return radius_; }
  double dr() const noexcept { return dr_; }
  double drho() const noexcept { return drho_; }

  /// Zero-based: r(0) is the first node dr.
  double r(std::size_t i) const noexcept { return static_cast<double>(i + 1) * dr_; }
  double rho(std::size_t i) const noexcept { return static_cast<double>(i + 1) * drho_; }
  double rho_max() const noexcept { return rho(n_ - 1); }

  std::vector<double> radii() const;
  std::vector<double> frequencies() const;

  friend bool operator==(const RadialGrid& a, const RadialGrid& b) noexcept {
    return a.n_ == b.n_ && a.radius_ == b.radius_;
  }

 private:
  std::size_t n_;
  double radius_;
  double dr_;
  double drho_;
};

RadialGrid make_grid(std::size_t mode_count, double outer_radius);

/// A radial scalar sampled on the physical nodes (f(r_m)) or the spectral
/// nodes (f^(rho_k)).
struct RadialScalarField {
  RadialGrid grid;
  std::vector<double> values;
  Space space;

  static RadialScalarField zeros(const RadialGrid& grid, Space space);

  template <class F>
  static RadialScalarField sample(const RadialGrid& grid, Space space, F&& f) {
    RadialScalarField out = zeros(grid, space);
    for (std::size_t i = 0; i < grid.size(); ++i)
      out.values[i] = f(space == Space::physical ? grid.r(i) : grid.rho(i));
    return out;
  }

  std::size_t size() const noexcept { return values.size(); }
};

/// Radial profile U of the curl-free 3D vector field U(|x|) x/|x|, sampled at
/// the physical nodes. A divergence-free component is not representable.
struct RadialVectorProfile {
  RadialGrid grid;
  std::vector<double> values;

  static RadialVectorProfile zeros(const RadialGrid& grid);
  std::size_t size() const noexcept { return values.size(); }
};

/// Throws UsageError if the grids differ.
void require_same_grid(const RadialGrid& a, const RadialGrid& b, const char* what);
/// Throws UsageError if the field is not in the expected space.
void require_space(const RadialScalarField& f, Space expected, const char* what);

}  // namespace radcns
