#pragma once

// Lower-bound probe of the low-frequency semigroup kernel with an
// anisotropic, time-dependent cutoff:
//   K_t(x) = \int e^{i x.xi} e^{t lambda(|xi|)} Psi^(t^{1/2} xi_t) dxi,
//   xi_t = (xi_1, t^{1/4} xi_2, t^{1/4} xi_3).
// The support of the cutoff is the box |xi_1| in [t^{-1/2}/2, t^{-1/2}],
// |xi_2|, |xi_3| <= t^{-3/4}, integrated with tensor-product Gauss-Legendre.

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "radcns/semigroup.hpp"

namespace radcns {

using Point3 = std::array<double, 3>;

/// Smooth even bump supported in {1/2 < |xi| < 1, |xi_1| >= 1/2}:
///   Psi^(xi) = b((|xi| - 3/4) / (1/8)) b((|xi_1| - 3/4) / (1/4)),
///   b(s) = exp(-1/(1 - s^2)) on |s| < 1.
class CutoffPsi {
 public:
  explicit CutoffPsi(double amplitude = 1.0) : amplitude_(amplitude) {}

  static double bump(double s);
  double operator()(double x1, double x2, double x3) const;
  double amplitude() const noexcept { return amplitude_; }

 private:
  double amplitude_;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
  static GaussLegendre make(int n);
};

/// |K_t(x)| at each point with `nodes_per_axis` Gauss nodes on every axis of
/// the support box. Points with at most one nonzero coordinate are evaluated
/// through pre-contracted marginals; others use the full tensor sum.
std::vector<double> kernel_probe_values(double t, const CutoffPsi& psi,
                                        std::span<const Point3> points, Branch branch,
                                        int nodes_per_axis);

/// Same integral, always through the full tensor-product sum (O(n^3) per point).
std::vector<std::complex<double>> kernel_probe_tensor(double t, const CutoffPsi& psi,
                                                      std::span<const Point3> points,
                                                      Branch branch, int nodes_per_axis);

struct ProbeResult {
  double sup = 0.0;
  std::vector<double> values;
  int nodes_per_axis = 0;
  /// max_x |K_n(x) - K_{n/2}(x)| / sup at the accepted order n.
  double refinement_change = 0.0;
};

/// Doubles the Gauss order from `start_nodes` until the refinement change
/// drops below `tolerance` (or `max_nodes` is reached).
/// Throws DomainError for t < 4 and UsageError for an empty probe set.
ProbeResult kernel_probe(double t, const CutoffPsi& psi, std::span<const Point3> points,
                         Branch branch = Branch::plus, int start_nodes = 32,
                         double tolerance = 1e-6, int max_nodes = 1024);

/// 256 points x = (x_1, 0, 0) with x_1 in t [0, 4], and 256 on each transverse
/// axis with coordinate in t^{3/4} [0, 4].
std::vector<Point3> default_probe_points(double t, std::size_t per_axis = 256);

}  // namespace radcns
