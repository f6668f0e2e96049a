#pragma once

// Exact per-mode propagation of the linear (a, v) system.
//
// On each Fourier mode rho the linear system is d/dt (a^, v^) = M_rho (a^, v^)
// with the generator M_rho = [[0, -rho], [rho, -rho^2]]. Everything here is a
// function of the 2x2 matrix A = t M_rho, evaluated through the
// Cayley-Hamilton form
//   F(A) = F0 I + F1 (A - mu I),   mu = tr(A)/2,  delta^2 = mu^2 - det(A),
// with F0, F1 the even/odd parts of F at mu +- delta. Near eigenvalue
// coalescence (rho = 2) both are taken from their Taylor series in delta^2.

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "radcns/grid.hpp"
#include "radcns/mode_matrix.hpp"

namespace radcns {

/// Eigenvalues of M_rho. For rho < 2 they are complex conjugates, for rho > 2
/// real and negative, and both equal -2 at rho = 2.
struct EigenPair {
  std::complex<double> plus;
  std::complex<double> minus;
};

enum class Branch { plus, minus };

const char* to_string(Branch branch);

/// Throws DomainError unless rho > 0.
EigenPair eigenvalues(double rho);
std::complex<double> eigenvalue(double rho, Branch branch);

ModeMatrix generator(double rho);

/// Scalar functions lifted to the 2x2 mode matrices. phi1(z) = (e^z - 1)/z and
/// phi2(z) = (e^z - 1 - z)/z^2 are the exponential-integrator weights.
enum class ModeFunction { exp, phi1, phi2 };

/// F(t M_rho). Throws DomainError for rho <= 0 or t < 0.
ModeMatrix mode_function(ModeFunction fn, double rho, double t);

/// e^{t M_rho}.
ModeMatrix mode_exponential(double rho, double t);

/// e^{t M_rho} for every spectral node of the grid.
std::vector<ModeMatrix> mode_exponentials(const RadialGrid& grid, double t);

/// Homogeneous propagator e^{t M(D)} applied to spectral (a^, v^).
/// Throws UsageError on grid or space mismatch, DomainError for t < 0.
std::pair<RadialScalarField, RadialScalarField> apply_semigroup(
    const RadialScalarField& a_hat, const RadialScalarField& v_hat, double t);

/// Both sides of the high-frequency exponent identity
///   t lambda_+-(rho) = -t (rho^2/2)(1 +- s) = -2t (1 -+ s)^{-1},
/// with s = sqrt(1 - 4/rho^2). Throws DomainError unless rho > 2 and t >= 0.
struct ExponentPair {
  double lhs;
  double rhs;
};
ExponentPair hi_freq_identity_check(double rho, double t, Branch branch);

// ---- kernels e^{t lambda(D)} ---------------------------------------------------

/// Frequency band of a semigroup kernel. `low` keeps |xi| <= 2 through the
/// Littlewood-Paley sum over j <= 0, `block` a single dyadic block j, and
/// `high` the sum over j >= 2 (|xi| >= 2).
struct KernelBand {
  enum class Kind { low, block, high };
  Kind kind = Kind::low;
  int j = 0;

  static KernelBand low() { return {Kind::low, 0}; }
  static KernelBand high() { return {Kind::high, 0}; }
  static KernelBand block(int j) { return {Kind::block, j}; }

  double multiplier(double rho) const;
};

/// Complex radial kernel F^{-1}[m(rho) e^{t lambda(rho)}] in physical space,
/// stored as real and imaginary parts.
struct ComplexRadialField {
  RadialScalarField re;
  RadialScalarField im;
};

ComplexRadialField semigroup_kernel(const RadialGrid& grid, double t, Branch branch,
                                    const std::function<double(double)>& multiplier);

/// || F^{-1}[m_band e^{t lambda_branch}] ||_p on the given grid.
/// Throws DomainError for t <= 0.
double kernel_band_norm(const RadialGrid& grid, double t, const KernelBand& band, double p,
                        Branch branch = Branch::plus);

/// Default grid for kernel norms: wide enough that fronts at r ~ t stay far
/// from the reflecting boundary for t <= 256.
RadialGrid default_kernel_grid();

}  // namespace radcns
