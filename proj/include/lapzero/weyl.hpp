// SPDX-License-Identifier: Apache-2.0
//
// Weyl quantization on a periodic 1D grid:
//   M[i,j] = (1/N) Σ_k c((x_i + x_j)/2, ξ_k) e^{iξ_k (x_i - x_j)},  ξ_k = (π/L) k.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lapzero/besov.hpp"
#include "lapzero/core.hpp"
#include "lapzero/grid.hpp"
#include "lapzero/potential.hpp"

namespace lapzero {

/// Symbol evaluated one position row at a time: out[k] = c(x, xi[k]).
struct SymbolFn {
  std::function<void(double x, const RVec& xi, CVec& out)> row;
  std::string label;
  bool real = true;
  double K = 1.0;
  double mu = 1.0;

  Complex operator()(double x, double xi) const;
};

SymbolFn make_symbol(std::function<Complex(double, double)> c, std::string label, bool real = true);
SymbolFn symbol_constant(Complex c);
SymbolFn symbol_xi();
/// a0 = ξ² / f0(x)²
SymbolFn symbol_a0(double K, double mu);
/// b0 = (ξ / f0(x)) x / <x>
SymbolFn symbol_b0(double K, double mu);
/// c1 + alpha c2
SymbolFn symbol_combine(const SymbolFn& c1, Complex alpha, const SymbolFn& c2);

/// Frequency ladder (π/L) k for k = -N/2 .. N/2-1, stored in FFT order.
RVec frequency_ladder(const Grid1D& g);

struct WeylOperator {
  CMat mat;
  std::string label;
  bool hermitian = false;
  double hermitian_residual() const;
};

/// Dense reference matrix.
WeylOperator weyl_quantize(const SymbolFn& c, const Grid1D& g);
/// Matrix-free product Op^w(c) u, one inverse FFT per midpoint.
CVec weyl_apply(const SymbolFn& c, const Grid1D& g, const CVec& u);

enum class FilterKind { outgoing, mirrored, high_energy, low_energy };

/// Cutoff profiles of the radiation filters.
struct FilterSpec {
  double plateau = 2.0;        // χ_- = 1 on [0, plateau]
  double ramp = 1.0;           // width of the χ_- ramps
  double tilde_floor = -3.0;   // χ̃_- rises on [floor, floor + 1]
  double tilde_lo = -0.5;      // χ̃_- = 1 up to here
  double sigma = 0.0;          // χ̃_- vanishes on [sigma, ∞)
  int degree = 7;
  bool tilde_zero = false;     // χ̃_- ≡ 0

  double chi_minus(double t) const;
  double chi_plus(double t) const { return 1.0 - chi_minus(t); }
  double chi_tilde(double b) const;
  void validate(FilterKind kind) const;
};

/// Plateau C0' + 1 from the model's certified C0 and K.
FilterSpec default_filter(const PotentialModel& model);

SymbolFn filter_symbol(const FilterSpec& spec, FilterKind kind, double K, double mu);

struct FilterResult {
  CVec w;
  ShellProfile profile;  // shells of |x|
  DefectLadder defect;   // R^{-s0} ball and annulus norms
};

FilterResult radiation_filter(const CVec& u, const FilterSpec& spec, FilterKind kind, const PotentialModel& model,
                              const Grid1D& g, const std::vector<double>& ladder, double eps = 0.5);

std::string to_string(FilterKind k);

}  // namespace lapzero
