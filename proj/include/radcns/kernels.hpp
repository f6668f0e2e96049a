#pragma once

// Low-level data-parallel kernels. Every OpenMP kernel has a serial twin that
// the tests use as the reference; the benchmark target compares the two.
// Parallel kernels only split independent output entries across threads and
// keep every reduction in a fixed serial order, so results are bitwise
// independent of the thread count.

#include <array>
#include <complex>
#include <span>

#include "radcns/mode_matrix.hpp"

namespace radcns::kernels {

// ---- trigonometric transforms ------------------------------------------------
//
// Both transforms use the unnormalised FFTW conventions on n = in.size():
//   sine:    out[k] = 2 sum_{m=1..n} in[m] sin(m k pi / (n+1)),             k = 1..n
//   cosine:  out[m] = 2 sum_{k=1..n} in[k] cos(m k pi / (n+1)),             m = 1..n
// (entries are stored zero-based). The sine sum is its own inverse up to the
// factor 2(n+1).

/// Fast sine sum (FFTW RODFT00).
void sine_sum(std::span<const double> in, std::span<double> out);
/// Fast interior cosine sum (FFTW REDFT00 on n+2 points with zero end values).
void cosine_sum(std::span<const double> in, std::span<double> out);

/// O(n^2) direct summation, serial.
void sine_sum_reference(std::span<const double> in, std::span<double> out);
void cosine_sum_reference(std::span<const double> in, std::span<double> out);
/// O(n^2) direct summation, parallel over output entries.
void sine_sum_direct(std::span<const double> in, std::span<double> out);

// ---- per-mode 2x2 products ----------------------------------------------------

/// (a_k, v_k) <- mats[k] (a_k, v_k) for every mode.
void apply_modes_serial(std::span<const ModeMatrix> mats, std::span<double> a,
                        std::span<double> v);
void apply_modes(std::span<const ModeMatrix> mats, std::span<double> a, std::span<double> v);

// ---- oscillatory quadrature ----------------------------------------------------

struct QuadratureNode {
  std::array<double, 3> xi;
  std::complex<double> weight;  // quadrature weight times integrand
};

/// out[i] = sum_n node.weight * exp(i x_i . node.xi), summed in node order.
void oscillatory_sum_serial(std::span<const QuadratureNode> nodes,
                            std::span<const std::array<double, 3>> points,
                            std::span<std::complex<double>> out);
void oscillatory_sum(std::span<const QuadratureNode> nodes,
                     std::span<const std::array<double, 3>> points,
                     std::span<std::complex<double>> out);

}  // namespace radcns::kernels
