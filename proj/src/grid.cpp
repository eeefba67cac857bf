// SPDX-License-Identifier: Apache-2.0
#include "lapzero/grid.hpp"

#include <algorithm>

namespace lapzero {

double smoothstep(double t, int degree) {
  t = std::clamp(t, 0.0, 1.0);
  double v = 0.0;
  switch (degree) {
    case 3:
      v = t * t * (3.0 - 2.0 * t);
      break;
    case 5:
      v = t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
      break;
    case 7:
      v = t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
      break;
    default:
      throw ParameterError("smoothstep degree must be 3, 5 or 7");
  }
  // the polynomials overshoot 1 by a few ulps near t = 1
  return std::min(v, 1.0);
}

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

Grid1D::Grid1D(double half_width, Index n, bool power_of_two) : L(half_width), N(n) {
  if (!(L > 0.0)) throw ParameterError("grid half-width must be positive");
  if (n < 2) throw ParameterError("grid needs at least two nodes");
  if (power_of_two && !is_power_of_two(n)) throw ParameterError("grid size " + std::to_string(n) + " is not a power of two");
  h = 2.0 * L / static_cast<double>(N);
  x = RVec::NullaryExpr(N, [this](Index i) { return -L + (static_cast<double>(i) + 0.5) * h; });
}

Grid1D Grid1D::with_spacing(double half_width, double spacing, bool power_of_two) {
  const double n = 2.0 * half_width / spacing;
  const auto N = static_cast<Index>(std::llround(n));
  if (std::abs(n - static_cast<double>(N)) > 1e-9 * n) throw ParameterError("half-width is not a multiple of the spacing");
  return Grid1D(half_width, N, power_of_two);
}

RadialGrid::RadialGrid(double outer, Index n, int d, int l) : L(outer), N(n), dim(d), ell(l) {
  if (!(L > 0.0) || n < 2) throw ParameterError("radial grid needs L > 0 and N >= 2");
  if (d < 1 || l < 0) throw ParameterError("radial grid needs d >= 1 and l >= 0");
  h = L / static_cast<double>(N);
  c_ell = (d - 1.0) * (d - 3.0) / 4.0 + l * (l + d - 2.0);
  r = RVec::NullaryExpr(N, [this](Index i) { return (static_cast<double>(i) + 0.5) * h; });
}

double AbsorbingLayer::profile(double absx) const {
  if (!enabled() || absx <= start) return 0.0;
  return smoothstep((absx - start) / width, degree);
}

}  // namespace lapzero
