// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "lapzero/core.hpp"

namespace lapzero {

/// Smoothstep of odd degree 3, 5 or 7 on [0,1], clamped outside.
double smoothstep(double t, int degree = 7);

/// Cell-centred nodes x_i = -L + (i + 1/2) h on [-L, L], h = 2L/N.
struct Grid1D {
  double L = 0.0;
  Index N = 0;
  double h = 0.0;
  RVec x;

  Grid1D() = default;
  Grid1D(double half_width, Index n, bool power_of_two = true);
  /// Same spacing, grid grown to half-width L (N = 2L/h must be integral).
  static Grid1D with_spacing(double half_width, double spacing, bool power_of_two = true);
};

/// Offset radial nodes r_i = (i + 1/2) h on (0, L) with centrifugal coefficient
/// c_l = (d-1)(d-3)/4 + l(l+d-2) of the reduced radial equation.
struct RadialGrid {
  double L = 0.0;
  Index N = 0;
  double h = 0.0;
  int dim = 3;
  int ell = 0;
  double c_ell = 0.0;
  RVec r;

  RadialGrid() = default;
  RadialGrid(double outer, Index n, int d, int l = 0);
};

/// Absorbing layer -iη S((|x| - start)/width) outside |x| = start.
struct AbsorbingLayer {
  double start = 0.0;
  double width = 0.0;
  double eta = 0.0;
  int degree = 5;

  bool enabled() const { return eta > 0.0 && width > 0.0; }
  double profile(double absx) const;
};

bool is_power_of_two(Index n);

}  // namespace lapzero
