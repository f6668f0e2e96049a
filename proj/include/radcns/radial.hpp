#pragma once

// Transforms, Fourier multipliers, radial differential operators and norms
// for 3D radially symmetric fields stored as 1D profiles.
//
// Fourier convention: f^(xi) = (2 pi)^{-3/2} \int e^{-i x.xi} f(x) dx, which
// for radial f reduces to
//   rho f^(rho) = sqrt(2/pi) \int_0^inf r f(r) sin(r rho) dr
// and is discretised as the weighted type-I sine transform
//   rho_k f^(rho_k) = sqrt(2/pi) dr sum_m r_m f(r_m) sin(r_m rho_k).
// The inverse is the same formula with (r, dr) and (rho, drho) exchanged.

#include <functional>

#include "radcns/grid.hpp"

namespace radcns {

RadialScalarField to_spectral(const RadialScalarField& field);
RadialScalarField to_physical(const RadialScalarField& field);

/// Returns the field in the requested space, transforming only if needed.
RadialScalarField in_space(const RadialScalarField& field, Space space);

/// Pointwise multiplication of spectral samples by m(rho_k).
/// Throws NumericDomainError if m(rho_k) is not finite.
RadialScalarField apply_multiplier(const RadialScalarField& field,
                                   const std::function<double(double)>& m);

/// |D|^s.
RadialScalarField apply_fractional_derivative(const RadialScalarField& field, double s);

/// Profile w'(r) of the gradient w'(r) x/r of a radial scalar w. Computed from
/// the sine coefficients of g = r w through the matching cosine sum.
RadialVectorProfile gradient_profile(const RadialScalarField& field);

/// Physical samples of div(G(r) x/r) = G' + 2G/r, with G' taken spectrally
/// from the sine series of the odd extension of G.
RadialScalarField divergence_of_profile(const RadialVectorProfile& vec);

/// (4 pi \int |f|^p r^2 dr)^{1/p} by the rectangle rule; max |f| for p = inf.
/// Throws ConfigError for p < 1.
double lp_norm(const RadialScalarField& field, double p);
/// L^p norm of the profile of a radial vector field (|u| = |U|).
double lp_norm(const RadialVectorProfile& vec, double p);

/// Norm of a pair (f, g) taken as the L^p norm of the pointwise magnitude
/// sqrt(f^2 + g^2). Both must be physical and on the same grid.
double lp_norm_pair(const RadialScalarField& f, const RadialScalarField& g, double p);

/// sup_r r |f(r)| = || |x| f ||_inf = || x_k f ||_inf for radial f.
double weighted_sup_norm(const RadialScalarField& field);
double weighted_sup_norm_pair(const RadialScalarField& f, const RadialScalarField& g);

/// 4 pi drho sum_k |f^(rho_k)| rho_k: the discrete bound on ||x_k f||_inf.
double weighted_fourier_bound(const RadialScalarField& field);

/// (4 pi drho sum_k rho_k^2 f^_k^2)^{1/2}: the L^2 norm on the frequency side.
double spectral_l2_norm(const RadialScalarField& field);

struct TransformCheck {
  double involution = 0.0;  // max |F^{-1} F f - f| / max |f|
  double parseval = 0.0;    // | ||f||_2 - ||f^||_2 | / ||f||_2
};

/// Round-trip and Plancherel defects of a physical field.
TransformCheck transform_check(const RadialScalarField& physical);

}  // namespace radcns
