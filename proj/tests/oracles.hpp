#pragma once

// Independent reference computations shared by the unit and acceptance tests.
// Nothing here calls into the library's numerical kernels.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "radcns/grid.hpp"

namespace oracle {

using Mat2 = std::array<long double, 4>;  // row-major

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

// e^{t M_rho} by a 40-term Taylor series of (t M / 2^s) followed by s squarings,
// in long double.
inline Mat2 expm_series(double rho, double t) {
  const long double r = rho;
  Mat2 a = {0.0L, -r * t, r * t, -r * r * t};
  long double norm = 0.0L;
  for (long double x : a) norm = std::max(norm, std::fabs(x));
  int s = 0;
  while (norm > 0.25L) {
    norm /= 2.0L;
    ++s;
  }
  const long double scale = std::ldexp(1.0L, -s);
  for (long double& x : a) x *= scale;
  Mat2 sum = {1.0L, 0.0L, 0.0L, 1.0L};
  Mat2 term = sum;
  for (int n = 1; n <= 40; ++n) {
    term = mul(term, a);
    for (long double& x : term) x /= n;
    for (int i = 0; i < 4; ++i) sum[static_cast<std::size_t>(i)] += term[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < s; ++i) sum = mul(sum, sum);
  return sum;
}

// Adaptive Simpson on [a, b]. The first `min_depth` levels always split, so
// integrands that vanish at the initial five samples are still resolved.
inline double simpson(const std::function<double(double)>& f, double a, double b, double tol,
                      int min_depth = 6, int depth = 50) {
  std::function<double(double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid);
        const double rm = 0.5 * (mid + hi);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
        const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
        if (d <= 0 || (depth - d >= min_depth && std::abs(left + right - whole) <= 15.0 * tol))
          return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, flo, flm, fmid, left, d - 1) + rec(mid, hi, fmid, frm, fhi, right, d - 1);
      };
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), depth);
}

// The spectral transform written out as a double sum:
//   rho_k f^_k = sqrt(2/pi) dr sum_m r_m f_m sin(r_m rho_k).
inline std::vector<double> direct_to_spectral(const radcns::RadialGrid& g,
                                              const std::vector<double>& f) {
  const std::size_t n = g.size();
  std::vector<double> out(n);
  const long double c = std::sqrt(2.0L / std::numbers::pi_v<long double>) * g.dr();
  for (std::size_t k = 0; k < n; ++k) {
    long double s = 0.0L;
    for (std::size_t m = 0; m < n; ++m)
      s += static_cast<long double>(g.r(m)) * f[m] *
           std::sin(std::numbers::pi_v<long double> * (m + 1) * (k + 1) / (n + 1));
    out[k] = static_cast<double>(c * s / g.rho(k));
  }
  return out;
}

inline std::vector<double> direct_to_physical(const radcns::RadialGrid& g,
                                              const std::vector<double>& fh) {
  const std::size_t n = g.size();
  std::vector<double> out(n);
  const long double c = std::sqrt(2.0L / std::numbers::pi_v<long double>) * g.drho();
  for (std::size_t m = 0; m < n; ++m) {
    long double s = 0.0L;
    for (std::size_t k = 0; k < n; ++k)
      s += static_cast<long double>(g.rho(k)) * fh[k] *
           std::sin(std::numbers::pi_v<long double> * (m + 1) * (k + 1) / (n + 1));
    out[m] = static_cast<double>(c * s / g.r(m));
  }
  return out;
}

// Random smooth spectrum supported in [lo, hi]: a few random Gaussian bumps
// times a C-infinity window vanishing outside the band.
inline radcns::RadialScalarField random_band_limited(const radcns::RadialGrid& g,
                                                     std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  struct Bump {
    double c, w, a;
  };
  std::vector<Bump> bumps;
  for (int i = 0; i < 4; ++i)
    bumps.push_back({lo + (hi - lo) * unit(rng), 0.05 * (hi - lo) + 0.3 * (hi - lo) * unit(rng),
                     amp(rng)});
  auto window = [&](double rho) {
    if (rho <= lo || rho >= hi) return 0.0;
    const double s = (2.0 * rho - lo - hi) / (hi - lo);
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
  };
  return radcns::RadialScalarField::sample(g, radcns::Space::spectral, [&](double rho) {
    double v = 0.0;
    for (const auto& b : bumps) v += b.a * std::exp(-std::pow((rho - b.c) / b.w, 2));
    return v * window(rho);
  });
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
