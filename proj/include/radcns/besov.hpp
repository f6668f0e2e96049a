#pragma once

// Littlewood-Paley blocks and homogeneous Besov norms on a radial grid.

#include <cstddef>
#include <vector>

#include "radcns/grid.hpp"

namespace radcns {

/// Smooth transition profile: 1 on [0, 1], 0 on [2, inf), C-infinity ramp between.
double theta(double rho);

/// Annular block profile phi^_j(rho) = theta(2^{-j} rho) - theta(2^{-j+1} rho),
/// supported in [2^{j-1}, 2^{j+1}].
double phi_block(int j, double rho);

/// Dyadic indices the grid can represent. On [j_min, j_max] the block profiles
/// sum to one at every spectral node.
struct DyadicPartition {
  int j_min;
  int j_max;

  static DyadicPartition for_grid(const RadialGrid& grid);
  bool contains(int j) const { return j >= j_min && j <= j_max; }
  std::size_t count() const { return static_cast<std::size_t>(j_max - j_min + 1); }
};

enum class FrequencyBand { full, low, high };

struct BesovSpec {
  double s = 0.0;
  double p = 2.0;
  double q = 1.0;
  FrequencyBand band = FrequencyBand::full;
  int j0 = 0;  // cut-off for the banded norms: low sums j <= j0, high sums j >= j0
};

/// Delta_j f, returned in the input's space. Throws RangeError outside the
/// resolved range.
RadialScalarField block(const RadialScalarField& field, int j);

/// S_j f = (chi_j(D) + Delta_j) f with the smooth low-pass chi_j(rho) =
/// theta(2^{-j+1} rho); the combined multiplier is theta(2^{-j} rho).
RadialScalarField low_cutoff(const RadialScalarField& field, int j);

struct BesovBreakdown {
  double value = 0.0;
  std::vector<int> indices;           // blocks that entered the sum
  std::vector<double> block_norms;    // ||Delta_j f||_p for those blocks
  std::size_t unresolved = 0;         // requested blocks outside the grid's range
};

/// (sum_j 2^{sqj} ||Delta_j f||_p^q)^{1/q} over the resolved blocks selected
/// by spec.band; q = inf takes the maximum.
double besov_norm(const RadialScalarField& field, const BesovSpec& spec);
BesovBreakdown besov_breakdown(const RadialScalarField& field, const BesovSpec& spec);

/// Besov norm of the pair (f, g): block norms are taken of the pointwise
/// magnitude sqrt((Delta_j f)^2 + (Delta_j g)^2).
double besov_norm_pair(const RadialScalarField& f, const RadialScalarField& g,
                       const BesovSpec& spec);

/// ||x_k f||_{B^s_{2,q}} for radial f through Plancherel:
///   ||Delta_j (x_k f)||_2^2 = (4 pi / 3) \int phi^_j^2 (f^')^2 rho^2 drho,
/// with f^' from centred differences. Independent of the axis k in {1,2,3}.
/// Throws UnsupportedParameterError unless spec.p == 2.
double weighted_besov_norm_p2(const RadialScalarField& field, int axis, const BesovSpec& spec);
/// The per-block values ||Delta_j (x_k f)||_2 entering the norm above.
BesovBreakdown weighted_besov_breakdown_p2(const RadialScalarField& field, int axis,
                                           const BesovSpec& spec);

/// j0 = 1 - ceil(log2(t)/2): the block index with
/// (t^{-1/2}/2, t^{-1/2}) inside (2^{j0-2}, 2^{j0+2}). Throws DomainError for t < 1.
int j0_for_time(double t);

}  // namespace radcns
