#include "radcns/probe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "radcns/errors.hpp"
#include "radcns/kernels.hpp"

namespace radcns {
namespace {

using cplx = std::complex<double>;

// Nodes of the support box in scaled coordinates eta = (t^{1/2} xi_1, t^{3/4} xi_2, t^{3/4} xi_3).
struct AxisRule {
  std::vector<double> eta;
  std::vector<double> weight;
};

AxisRule longitudinal_rule(const GaussLegendre& gl) {
  AxisRule rule;
  for (double sign : {-1.0, 1.0})
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      rule.eta.push_back(sign * (0.75 + 0.25 * gl.nodes[i]));
      rule.weight.push_back(0.25 * gl.weights[i]);
    }
  return rule;
}

AxisRule transverse_rule(const GaussLegendre& gl) { return {gl.nodes, gl.weights}; }

struct ProbeGrid {
  AxisRule axis1;
  AxisRule axis23;
  double scale1;   // t^{-1/2}
  double scale23;  // t^{-3/4}
  double jacobian; // t^{-2}
};

ProbeGrid make_probe_grid(double t, int n) {
  const GaussLegendre gl = GaussLegendre::make(n);
  return {longitudinal_rule(gl), transverse_rule(gl), 1.0 / std::sqrt(t), std::pow(t, -0.75),
          1.0 / (t * t)};
}

// Weighted integrand at node (i, j, l), including the Jacobian.
cplx node_value(const ProbeGrid& g, const CutoffPsi& psi, double t, Branch branch, std::size_t i,
                std::size_t j, std::size_t l) {
  const double e1 = g.axis1.eta[i];
  const double e2 = g.axis23.eta[j];
  const double e3 = g.axis23.eta[l];
  const double cut = psi(e1, e2, e3);
  if (cut == 0.0) return 0.0;
  const double x1 = g.scale1 * e1;
  const double x2 = g.scale23 * e2;
  const double x3 = g.scale23 * e3;
  const double rho = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3);
  const double w = g.axis1.weight[i] * g.axis23.weight[j] * g.axis23.weight[l] * g.jacobian;
  return w * cut * std::exp(t * eigenvalue(rho, branch));
}

void validate(double t, std::span<const Point3> points) {
  if (!(t >= 4.0)) throw DomainError("kernel_probe: t must be >= 4");
  if (points.empty()) throw UsageError("kernel_probe: empty probe set");
}

int single_axis(const Point3& x) {
  int nonzero = 0;
  int axis = 0;
  for (int d = 0; d < 3; ++d)
    if (x[static_cast<std::size_t>(d)] != 0.0) {
      ++nonzero;
      axis = d;
    }
  return nonzero <= 1 ? axis : -1;
}

}  // namespace

double CutoffPsi::bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

double CutoffPsi::operator()(double x1, double x2, double x3) const {
  if (amplitude_ == 0.0) return 0.0;
  const double radius = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3);
  return amplitude_ * bump((radius - 0.75) / 0.125) * bump((std::abs(x1) - 0.75) / 0.25);
}

GaussLegendre GaussLegendre::make(int n) {
  if (n < 1) throw ConfigError("Gauss-Legendre order must be positive");
  GaussLegendre rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

std::vector<cplx> kernel_probe_tensor(double t, const CutoffPsi& psi,
                                      std::span<const Point3> points, Branch branch,
                                      int nodes_per_axis) {
  validate(t, points);
  const ProbeGrid g = make_probe_grid(t, nodes_per_axis);
  std::vector<kernels::QuadratureNode> nodes;
  for (std::size_t i = 0; i < g.axis1.eta.size(); ++i)
    for (std::size_t j = 0; j < g.axis23.eta.size(); ++j)
      for (std::size_t l = 0; l < g.axis23.eta.size(); ++l) {
        const cplx w = node_value(g, psi, t, branch, i, j, l);
        if (w == 0.0) continue;
        nodes.push_back({{g.scale1 * g.axis1.eta[i], g.scale23 * g.axis23.eta[j],
                          g.scale23 * g.axis23.eta[l]},
                         w});
      }
  std::vector<cplx> out(points.size());
  kernels::oscillatory_sum(nodes, points, out);
  return out;
}

std::vector<double> kernel_probe_values(double t, const CutoffPsi& psi,
                                        std::span<const Point3> points, Branch branch,
                                        int nodes_per_axis) {
  validate(t, points);
  const ProbeGrid g = make_probe_grid(t, nodes_per_axis);
  const std::size_t n1 = g.axis1.eta.size();
  const std::size_t n2 = g.axis23.eta.size();

  // Marginals of the weighted integrand along each axis.
  std::vector<cplx> m1(n1), m2(n2), m3(n2);
  std::vector<cplx> slab(n1 * n2 * n2);
  const auto total = static_cast<std::ptrdiff_t>(slab.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const auto u = static_cast<std::size_t>(idx);
    slab[u] = node_value(g, psi, t, branch, u / (n2 * n2), (u / n2) % n2, u % n2);
  }
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j)
      for (std::size_t l = 0; l < n2; ++l) {
        const cplx w = slab[(i * n2 + j) * n2 + l];
        m1[i] += w;
        m2[j] += w;
        m3[l] += w;
      }

  std::vector<double> out(points.size());
  std::vector<Point3> general;
  std::vector<std::size_t> general_index;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const int axis = single_axis(points[p]);
    if (axis < 0) {
      general.push_back(points[p]);
      general_index.push_back(p);
      continue;
    }
    const double x = points[p][static_cast<std::size_t>(axis)];
    const AxisRule& rule = axis == 0 ? g.axis1 : g.axis23;
    const double scale = axis == 0 ? g.scale1 : g.scale23;
    const std::vector<cplx>& marginal = axis == 0 ? m1 : (axis == 1 ? m2 : m3);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < marginal.size(); ++i) {
      const double phase = x * scale * rule.eta[i];
      sum += marginal[i] * cplx(std::cos(phase), std::sin(phase));
    }
    out[p] = std::abs(sum);
  }
  if (!general.empty()) {
    const auto values = kernel_probe_tensor(t, psi, general, branch, nodes_per_axis);
    for (std::size_t k = 0; k < general.size(); ++k) out[general_index[k]] = std::abs(values[k]);
  }
  return out;
}

ProbeResult kernel_probe(double t, const CutoffPsi& psi, std::span<const Point3> points,
                         Branch branch, int start_nodes, double tolerance, int max_nodes) {
  validate(t, points);
  ProbeResult result;
  int n = start_nodes;
  std::vector<double> previous = kernel_probe_values(t, psi, points, branch, n);
  for (;;) {
    const int next = 2 * n;
    std::vector<double> current = kernel_probe_values(t, psi, points, branch, next);
    const double sup = *std::max_element(current.begin(), current.end());
    double change = 0.0;
    for (std::size_t i = 0; i < current.size(); ++i)
      change = std::max(change, std::abs(current[i] - previous[i]));
    result.refinement_change = sup > 0.0 ? change / sup : 0.0;
    result.values = std::move(current);
    result.sup = sup;
    result.nodes_per_axis = next;
    if (result.refinement_change < tolerance || next >= max_nodes) break;
    previous = result.values;
    n = next;
  }
  return result;
}

std::vector<Point3> default_probe_points(double t, std::size_t per_axis) {
  std::vector<Point3> points;
  points.reserve(3 * per_axis);
  const double along = 4.0 * t;
  const double across = 4.0 * std::pow(t, 0.75);
  const double denom = static_cast<double>(per_axis > 1 ? per_axis - 1 : 1);
  for (std::size_t i = 0; i < per_axis; ++i) points.push_back({along * i / denom, 0.0, 0.0});
  for (std::size_t i = 0; i < per_axis; ++i) points.push_back({0.0, across * i / denom, 0.0});
  for (std::size_t i = 0; i < per_axis; ++i) points.push_back({0.0, 0.0, across * i / denom});
  return points;
}

}  // namespace radcns
