#include "radcns/semigroup.hpp"

#include <array>
#include <cmath>
#include <string>

#include "radcns/besov.hpp"
#include "radcns/errors.hpp"
#include "radcns/kernels.hpp"
#include "radcns/radial.hpp"

namespace radcns {
namespace {

using cplx = std::complex<double>;

constexpr double kCoalescenceThreshold = 1e-3;
constexpr double kSeriesRadius = 1.0;
constexpr int kSeriesTerms = 40;

int phi_order(ModeFunction fn) {
  switch (fn) {
    case ModeFunction::exp: return 0;
    case ModeFunction::phi1: return 1;
    case ModeFunction::phi2: return 2;
  }
  return 0;
}

// phi_k(z) = sum_j z^j / (j+k)!, valid for any z; used for |z| < kSeriesRadius.
template <class T>
T phi_series(int k, T z) {
  double denom = 1.0;
  for (int i = 2; i <= k; ++i) denom *= i;
  T term = T(1.0 / denom);
  T sum = term;
  for (int j = 1; j < kSeriesTerms; ++j) {
    term *= z / static_cast<double>(j + k);
    sum += term;
  }
  return sum;
}

double phi_real(int k, double x) {
  if (k == 0) return std::exp(x);
  if (std::abs(x) < kSeriesRadius) return phi_series(k, x);
  const double em1 = std::expm1(x);
  if (k == 1) return em1 / x;
  return (em1 - x) / (x * x);
}

cplx phi_complex(int k, cplx z) {
  if (k == 0) return std::exp(z);
  if (std::abs(z) < kSeriesRadius) return phi_series(k, z);
  const cplx em1 = std::exp(z) - 1.0;
  if (k == 1) return em1 / z;
  return (em1 - z) / (z * z);
}

// n-th derivative of phi_k at real mu, n = 0..5.
std::array<double, 6> phi_derivatives(int k, double mu) {
  std::array<double, 6> d{};
  if (k == 0) {
    d.fill(std::exp(mu));
    return d;
  }
  if (std::abs(mu) <= 2.0) {
    // phi_k^{(n)}(z) = sum_j z^j/j! / prod_{i=1..k} (j+n+i)
    for (int n = 0; n < 6; ++n) {
      double sum = 0.0;
      double power = 1.0;  // z^j / j!
      for (int j = 0; j < 60; ++j) {
        double denom = 1.0;
        for (int i = 1; i <= k; ++i) denom *= static_cast<double>(j + n + i);
        sum += power / denom;
        power *= mu / static_cast<double>(j + 1);
      }
      d[static_cast<std::size_t>(n)] = sum;
    }
    return d;
  }
  // z phi_k^{(n)} + n phi_k^{(n-1)} = phi_{k-1}^{(n)}, starting from phi_0 = exp.
  std::array<double, 6> prev{};
  prev.fill(std::exp(mu));
  for (int order = 1; order <= k; ++order) {
    std::array<double, 6> cur{};
    cur[0] = phi_real(order, mu);
    for (int n = 1; n < 6; ++n)
      cur[static_cast<std::size_t>(n)] =
          (prev[static_cast<std::size_t>(n)] - n * cur[static_cast<std::size_t>(n - 1)]) / mu;
    prev = cur;
  }
  return prev;
}

struct EvenOdd {
  double f0;  // (F(mu+delta) + F(mu-delta)) / 2
  double f1;  // (F(mu+delta) - F(mu-delta)) / (2 delta)
};

EvenOdd even_odd_parts(int k, double mu, double delta_sq, double det) {
  const double abs_delta = std::sqrt(std::abs(delta_sq));
  if (abs_delta < kCoalescenceThreshold) {
    const auto d = phi_derivatives(k, mu);
    const double e = delta_sq;
    return {d[0] + d[2] * e / 2.0 + d[4] * e * e / 24.0,
            d[1] + d[3] * e / 6.0 + d[5] * e * e / 120.0};
  }
  if (delta_sq < 0.0) {
    const cplx value = phi_complex(k, cplx(mu, abs_delta));
    return {value.real(), value.imag() / abs_delta};
  }
  // Real, distinct eigenvalues. The fast one is mu - delta; the slow one is
  // formed from the product det = lambda_slow * lambda_fast to avoid cancellation.
  const double fast = mu - abs_delta;
  const double slow = det / fast;
  if (k == 0) {
    const double e_slow = std::exp(slow);
    return {0.5 * e_slow * (1.0 + std::exp(-2.0 * abs_delta)),
            -0.5 * e_slow * std::expm1(-2.0 * abs_delta) / abs_delta};
  }
  const double f_slow = phi_real(k, slow);
  const double f_fast = phi_real(k, fast);
  return {0.5 * (f_slow + f_fast), 0.5 * (f_slow - f_fast) / abs_delta};
}

}  // namespace

const char* to_string(Branch branch) { return branch == Branch::plus ? "plus" : "minus"; }

EigenPair eigenvalues(double rho) {
  if (!(rho > 0.0)) throw DomainError("eigenvalues: rho must be positive");
  const double half = 0.5 * rho * rho;
  if (rho < 2.0) {
    const double im = half * std::sqrt(4.0 / (rho * rho) - 1.0);
    return {cplx(-half, -im), cplx(-half, im)};
  }
  if (rho == 2.0) return {cplx(-2.0, 0.0), cplx(-2.0, 0.0)};
  const double s = std::sqrt(1.0 - 4.0 / (rho * rho));
  // lambda_- = -(rho^2/2)(1 - s) = -2/(1 + s).
  return {cplx(-half * (1.0 + s), 0.0), cplx(-2.0 / (1.0 + s), 0.0)};
}

std::complex<double> eigenvalue(double rho, Branch branch) {
  const EigenPair pair = eigenvalues(rho);
  return branch == Branch::plus ? pair.plus : pair.minus;
}

ModeMatrix generator(double rho) { return {0.0, -rho, rho, -rho * rho}; }

ModeMatrix mode_function(ModeFunction fn, double rho, double t) {
  if (!(rho > 0.0)) throw DomainError("mode_function: rho must be positive");
  if (!(t >= 0.0)) throw DomainError("mode_function: t must be non-negative");
  const double mu = -0.5 * t * rho * rho;
  const double det = t * t * rho * rho;
  // delta^2 = t^2 rho^2 (rho^2/4 - 1), factored to stay accurate near rho = 2.
  const double delta_sq = 0.25 * t * t * rho * rho * (rho - 2.0) * (rho + 2.0);
  const EvenOdd parts = even_odd_parts(phi_order(fn), mu, delta_sq, det);
  // A - mu I = [[t rho^2/2, -t rho], [t rho, -t rho^2/2]]
  const double diag = -mu;
  const double off = t * rho;
  return {parts.f0 + parts.f1 * diag, -parts.f1 * off, parts.f1 * off, parts.f0 - parts.f1 * diag};
}

ModeMatrix mode_exponential(double rho, double t) {
  return mode_function(ModeFunction::exp, rho, t);
}

std::vector<ModeMatrix> mode_exponentials(const RadialGrid& grid, double t) {
  if (!(t >= 0.0)) throw DomainError("mode_exponentials: t must be non-negative");
  std::vector<ModeMatrix> mats(grid.size());
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k)
    mats[static_cast<std::size_t>(k)] = mode_exponential(grid.rho(static_cast<std::size_t>(k)), t);
  return mats;
}

std::pair<RadialScalarField, RadialScalarField> apply_semigroup(const RadialScalarField& a_hat,
                                                                const RadialScalarField& v_hat,
                                                                double t) {
  require_space(a_hat, Space::spectral, "apply_semigroup");
  require_space(v_hat, Space::spectral, "apply_semigroup");
  require_same_grid(a_hat.grid, v_hat.grid, "apply_semigroup");
  if (!(t >= 0.0)) throw DomainError("apply_semigroup: t must be non-negative");
  std::pair<RadialScalarField, RadialScalarField> out{a_hat, v_hat};
  if (t == 0.0) return out;
  const auto mats = mode_exponentials(a_hat.grid, t);
  kernels::apply_modes(mats, out.first.values, out.second.values);
  return out;
}

ExponentPair hi_freq_identity_check(double rho, double t, Branch branch) {
  if (!(rho > 2.0)) throw DomainError("hi_freq_identity_check: rho must exceed 2");
  if (!(t >= 0.0)) throw DomainError("hi_freq_identity_check: t must be non-negative");
  const double s = std::sqrt(1.0 - 4.0 / (rho * rho));
  const double sign = branch == Branch::plus ? 1.0 : -1.0;
  return {-t * (0.5 * rho * rho) * (1.0 + sign * s), -2.0 * t / (1.0 - sign * s)};
}

double KernelBand::multiplier(double rho) const {
  switch (kind) {
    case Kind::low: return theta(rho);
    case Kind::block: return phi_block(j, rho);
    case Kind::high: return 1.0 - theta(0.5 * rho);
  }
  return 0.0;
}

ComplexRadialField semigroup_kernel(const RadialGrid& grid, double t, Branch branch,
                                    const std::function<double(double)>& multiplier) {
  RadialScalarField re = RadialScalarField::zeros(grid, Space::spectral);
  RadialScalarField im = re;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double rho = grid.rho(k);
    const double m = multiplier(rho);
    if (m == 0.0) continue;
    const cplx value = m * std::exp(t * eigenvalue(rho, branch));
    re.values[k] = value.real();
    im.values[k] = value.imag();
  }
  return {to_physical(re), to_physical(im)};
}

double kernel_band_norm(const RadialGrid& grid, double t, const KernelBand& band, double p,
                        Branch branch) {
  if (!(t > 0.0)) throw DomainError("kernel_band_norm: t must be positive");
  const ComplexRadialField kernel =
      semigroup_kernel(grid, t, branch, [&band](double rho) { return band.multiplier(rho); });
  return lp_norm_pair(kernel.re, kernel.im, p);
}

RadialGrid default_kernel_grid() { return RadialGrid(16383, 1024.0); }

}  // namespace radcns
