// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "lapzero/core.hpp"

namespace lapzero {

/// Radial profile r -> value; the long-range part is smooth and even in r.
using RadialFn = std::function<double(double)>;

struct TailParams {
  double delta = 0.25;
  double C = 0.0;
  double R = 1.0;
};

/// V = V1 + V2 with the constants of the attractive long-range condition.
struct PotentialModel {
  std::string family;  // standard, coulomb, custom
  double gamma = 1.0;
  double mu = 1.0;
  int dim = 1;
  double eps1 = 1.0;
  double eps1_tilde = 1.0;
  std::array<double, 3> C{};  // symbol bounds for |alpha| = 0, 1, 2

  RadialFn V1;    // V1(r)
  RadialFn dV1;   // dV1/dr
  RadialFn d2V1;  // d²V1/dr²
  RadialFn V2;    // empty means V2 = 0
  TailParams tail;

  double s0() const { return 0.5 + mu / 4.0; }
  /// K of the radiation-condition section.
  double K() const { return eps1 * eps1_tilde / (2.0 - mu); }
  double C0_prime() const { return std::max(C[0] / K(), 1.0); }
  bool has_V2() const { return static_cast<bool>(V2); }
  double V(double r) const { return V1(r) + (V2 ? V2(r) : 0.0); }
};

PotentialModel standard_model(double gamma, double mu, int dim);
/// V = 0 with the weight exponent μ kept for f; not a certified model.
PotentialModel free_model(double mu, int dim);
/// -γ/|x| in d >= 3 written as -γ<x>^{-1} plus γ(<x>^{-1} - |x|^{-1}).
PotentialModel coulomb_model(double gamma, int dim);
/// Attaches a tabulated radial V2 (linear interpolation, zero outside the table).
PotentialModel with_tabulated_V2(PotentialModel m, std::vector<double> r, std::vector<double> v,
                                 TailParams tail);
/// Reads a two-column text file (radius value); '#' starts a comment.
void load_radial_table(const std::string& path, std::vector<double>& r, std::vector<double>& v);

struct WeightParams {
  double lambda = 0.0;
  double K = 1.0;
  double mu = 1.0;
};

/// f_λ(x) = (λ + K<x>^{-μ})^{1/2}
double weight_f(const WeightParams& p, double x);
RVec weight_f(const WeightParams& p, const RVec& x);

/// W = -2V1 - x·∇V1 as a function of r = |x|.
double virial_W(const PotentialModel& m, double r);

struct HypothesisResult {
  std::string id;
  bool pass = true;
  double worst = 0.0;     // worst slack; negative means violated
  double witness = 0.0;   // radius at the worst slack
  std::string detail;
  double tolerance = 0.0; // roundoff allowance on the slack
};

struct ConditionReport {
  std::vector<HypothesisResult> items;
  std::vector<double> sample_radii;
  bool pass() const;
};

/// Log-spaced radii in [r_min, r_max] plus 0.
std::vector<double> sample_radii(double r_max, std::size_t count, double r_min = 1e-3);

/// All five hypotheses plus the virial lower bound, with worst-case witnesses.
ConditionReport check_condition(const PotentialModel& m, const std::vector<double>& radii);
ConditionReport check_condition(const PotentialModel& m);

}  // namespace lapzero
