#pragma once

#include <cmath>

namespace radcns {

/// A real 2x2 matrix acting on one spectral mode of the pair (a^, v^).
struct ModeMatrix {
  double m11 = 1.0;
  double m12 = 0.0;
  double m21 = 0.0;
  double m22 = 1.0;

  static constexpr ModeMatrix identity() { return {}; }

  constexpr double determinant() const { return m11 * m22 - m12 * m21; }
  constexpr double trace() const { return m11 + m22; }

  bool finite() const {
    return std::isfinite(m11) && std::isfinite(m12) && std::isfinite(m21) &&
           std::isfinite(m22);
  }

  friend constexpr ModeMatrix operator*(const ModeMatrix& a, const ModeMatrix& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
  }
};

}  // namespace radcns
