// SPDX-License-Identifier: Apache-2.0
//
// Dyadic shell norms for a self-adjoint multiplication operator A.
//
// Everything here works on a finite spectrum a_i (the values of A at the
// grid nodes), so shell projections are exact coordinate masks.
#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "lapzero/core.hpp"

namespace lapzero {

/// Shell radii R_0 = 0, R_j = p^{j-1}; shell j is [R_{j-1}, R_j).
class ShellScheme {
 public:
  ShellScheme() : ShellScheme(2.0, 1.0) {}
  /// Smallest scheme of base p whose top radius exceeds max_abs.
  ShellScheme(double p, double max_abs);

  double base() const { return p_; }
  int count() const { return static_cast<int>(r_.size()) - 1; }
  double radius(int j) const { return r_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& radii() const { return r_; }

  /// Shell index in 1..count() of a spectral value.
  int shell_of(double a) const;

 private:
  double p_;
  std::vector<double> r_;
};

struct WeightSpectrum {
  RVec values;
  std::string label;

  WeightSpectrum() = default;
  explicit WeightSpectrum(RVec v, std::string name = {});

  Index size() const { return values.size(); }
  double max_abs() const { return values.size() ? values.cwiseAbs().maxCoeff() : 0.0; }
  WeightSpectrum scaled(double c) const;
  WeightSpectrum power(double e) const;
};

struct ShellProfile {
  std::vector<double> radii;  // R_0..R_J
  std::vector<double> norms;  // n_1..n_J stored at 0..J-1

  double besov() const;
  double dual() const;
  double total() const;
};

namespace detail {
void check_sizes(Index u, Index a);
void check_finite(bool finite);
std::vector<int> shell_index(const WeightSpectrum& a, const ShellScheme& s);
}  // namespace detail

template <typename Derived>
ShellProfile shell_decompose(const Eigen::MatrixBase<Derived>& u, const WeightSpectrum& a,
                             const ShellScheme& scheme) {
  detail::check_sizes(u.size(), a.size());
  detail::check_finite(u.allFinite());
  ShellProfile prof;
  prof.radii = scheme.radii();
  prof.norms.assign(static_cast<std::size_t>(scheme.count()), 0.0);
  for (Index i = 0; i < u.size(); ++i) {
    const int j = scheme.shell_of(a.values[i]);
    prof.norms[static_cast<std::size_t>(j - 1)] += std::norm(Complex(u[i]));
  }
  for (auto& n : prof.norms) n = std::sqrt(n);
  return prof;
}

template <typename Derived>
double besov_norm(const Eigen::MatrixBase<Derived>& u, const WeightSpectrum& a,
                  const ShellScheme& scheme = {}) {
  return shell_decompose(u, a, ShellScheme(scheme.base(), a.max_abs())).besov();
}

template <typename Derived>
double dual_norm(const Eigen::MatrixBase<Derived>& u, const WeightSpectrum& a,
                 const ShellScheme& scheme = {}) {
  return shell_decompose(u, a, ShellScheme(scheme.base(), a.max_abs())).dual();
}

/// ‖F(|A| < R) u‖ for every R of an increasing ladder.
template <typename Derived>
std::vector<double> ball_norms(const Eigen::MatrixBase<Derived>& u, const WeightSpectrum& a,
                               const std::vector<double>& ladder) {
  detail::check_sizes(u.size(), a.size());
  std::vector<Index> order(static_cast<std::size_t>(u.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index l, Index r) {
    return std::abs(a.values[l]) < std::abs(a.values[r]);
  });
  std::vector<double> out;
  out.reserve(ladder.size());
  double acc = 0.0;
  std::size_t k = 0;
  for (double R : ladder) {
    while (k < order.size() && std::abs(a.values[order[k]]) < R) acc += std::norm(Complex(u[order[k++]]));
    out.push_back(std::sqrt(acc));
  }
  return out;
}

/// sup_{R>1} R^{-1/2} ‖F(|A| < R) u‖, evaluated at its jump points.
template <typename Derived>
double ball_sup(const Eigen::MatrixBase<Derived>& u, const WeightSpectrum& a) {
  detail::check_sizes(u.size(), a.size());
  std::vector<Index> order(static_cast<std::size_t>(u.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index l, Index r) {
    return std::abs(a.values[l]) < std::abs(a.values[r]);
  });
  // the ball at R -> r+ holds every node with |a| <= r
  double acc = 0.0, best = 0.0;
  std::size_t k = 0;
  while (k < order.size() && std::abs(a.values[order[k]]) <= 1.0) acc += std::norm(Complex(u[order[k++]]));
  best = std::sqrt(acc);
  while (k < order.size()) {
    const double r = std::abs(a.values[order[k]]);
    while (k < order.size() && std::abs(a.values[order[k]]) == r) acc += std::norm(Complex(u[order[k++]]));
    best = std::max(best, std::sqrt(acc / r));
  }
  return best;
}

struct DefectLadder {
  std::vector<double> radii;
  std::vector<double> ball;     // R^{-e} ‖F(|A| < R) u‖
  std::vector<double> annulus;  // R^{-e} ‖F(εR <= |A| < R) u‖
  double exponent = 0.5;
  double eps = 0.5;

  /// max over the top half of the ladder
  double ball_tail() const;
  double annulus_tail() const;
  double ball_slope() const;
  double annulus_slope() const;
  double ball_at(double R) const;
  double annulus_at(double R) const;
};

/// Top half of a ladder, the window used for tail statistics.
std::size_t top_half_start(std::size_t n);

template <typename Derived>
DefectLadder bstar0_defect(const Eigen::MatrixBase<Derived>& u, const WeightSpectrum& a,
                           const std::vector<double>& ladder, double exponent = 0.5, double eps = 0.5) {
  if (ladder.empty()) throw ParameterError("bstar0_defect: empty radius ladder");
  if (!std::is_sorted(ladder.begin(), ladder.end()) || ladder.front() <= 0.0)
    throw ParameterError("bstar0_defect: ladder must be positive and increasing");
  if (!(eps > 0.0 && eps < 1.0)) throw ParameterError("bstar0_defect: annulus ratio must lie in (0,1)");
  detail::check_finite(u.allFinite());
  DefectLadder d;
  d.radii = ladder;
  d.exponent = exponent;
  d.eps = eps;
  std::vector<double> inner(ladder);
  for (auto& r : inner) r *= eps;
  const auto outer = ball_norms(u, a, ladder);
  const auto low = ball_norms(u, a, inner);
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    const double w = std::pow(ladder[k], -exponent);
    d.ball.push_back(w * outer[k]);
    d.annulus.push_back(w * std::sqrt(std::max(0.0, outer[k] * outer[k] - low[k] * low[k])));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Lemma checks

struct LemmaCheck {
  std::string id;
  double constant = 0.0;  // allowance the worst ratio is compared to
  double worst = 0.0;
  std::size_t samples = 0;
  Index witness = -1;  // sample index attaining the worst ratio
  bool pass = true;
};

struct LemmaReport {
  std::string lemma;
  std::vector<LemmaCheck> checks;
  std::uint64_t seed = 0;
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const LemmaCheck& c) { return c.pass; });
  }
};

struct SampleBank {
  std::vector<CVec> vectors;
  std::uint64_t seed = 0;
  std::size_t random_count = 0;
};

/// Complex Gaussian vectors (flat and decaying envelopes), one random vector per
/// shell, and unit vectors at the nodes on either side of every shell edge of
/// the given bases.
SampleBank make_samples(const WeightSpectrum& a, std::size_t random_count, std::uint64_t seed,
                        const std::vector<double>& bases = {2.0});

/// Base-p against base-2 shell norms, both directions.
LemmaReport verify_base_equivalence(const SampleBank& samples, const WeightSpectrum& a, double p);

inline double base_constant_forward(double p) {
  return 1.0 + std::sqrt(p) * (2.0 + std::log(2.0) / std::log(p));
}
inline double base_constant_backward(double p) {
  return 1.0 + std::sqrt(2.0) * (2.0 + std::log(p) / std::log(2.0));
}

struct ScalingOptions {
  double general = 8.0;     // allowance times |c|^{1/2}
  double contracted = 3.0;  // |c| <= 1 branch
  bool project = true;      // enforce u = F(|cA| >= 1)u when |c| <= 1
};

LemmaReport verify_scaling(const SampleBank& samples, const WeightSpectrum& a, double c,
                           const ScalingOptions& opt = {});

/// Constant for ‖A^{-s/2}u‖_{B(A^{1+s})} <= C(s) ‖u‖_{B(A)}.
double power_map_constant(double s);

LemmaReport verify_power_map(const SampleBank& samples, const WeightSpectrum& a, double s);

struct EmbeddingConstants {
  double weighted_to_besov;  // ‖u‖_B <= c ‖u‖_{L²_s}
  double besov_to_half;      // ‖u‖_{L²_{1/2}} <= c ‖u‖_B
  double minus_half_to_dual; // ‖u‖_{B*} <= c ‖u‖_{L²_{-1/2}}
  double dual_to_weighted;   // ‖u‖_{L²_{-s}} <= c ‖u‖_{B*}
};
EmbeddingConstants embedding_constants(double s);

/// Embedding chain L²_s ⊂ B ⊂ L²_{1/2} ⊂ H ⊂ L²_{-1/2} ⊂ B* ⊂ L²_{-s}, plus the duality sandwich.
LemmaReport verify_embeddings(const SampleBank& samples, const WeightSpectrum& a, double s);
LemmaReport verify_duality(const SampleBank& samples, const WeightSpectrum& a);

// ---------------------------------------------------------------------------
// Operator bounds B(A_1) -> B(A_2)*

/// Matrix-free linear map with its adjoint.
struct LinearMap {
  Index rows = 0, cols = 0;
  std::function<CVec(const CVec&)> apply;
  std::function<CVec(const CVec&)> adjoint;
  /// Optional block action T[:, cols]; falls back to apply on unit vectors.
  std::function<CMat(const std::vector<Index>&)> columns;

  CMat column_block(const std::vector<Index>& idx) const;
};

LinearMap as_map(const CMat& T);

/// Unit-width spectral blocks F(n <= a < n+1), keyed by n = floor(a).
struct BlockPartition {
  std::vector<long> keys;
  std::vector<std::vector<Index>> members;
};
BlockPartition unit_blocks(const WeightSpectrum& a, const std::vector<Index>& subset = {});
BlockPartition shell_blocks(const WeightSpectrum& a, const ShellScheme& scheme,
                            const std::vector<Index>& subset = {});

/// Largest singular value of a small dense block.
double block_norm(const CMat& B);
/// Largest singular value of a dense matrix of any size.
double spectral_norm(const CMat& T);

struct PowerResult {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

enum class NormMethod { power, lanczos };

struct NormOptions {
  NormMethod method = NormMethod::lanczos;
  int max_iter = 60;
  double tol = 1e-8;
  std::uint64_t seed = 1;
};

/// Largest singular value of P_rows T P_cols (empty index list = no mask).
/// Both methods only ever underestimate.
PowerResult estimate_norm(const LinearMap& T, const std::vector<Index>& rows, const std::vector<Index>& cols,
                          const NormOptions& opt);
inline PowerResult estimate_norm(const LinearMap& T, const NormOptions& opt) { return estimate_norm(T, {}, {}, opt); }

struct SchurBound {
  double block_sup = 0.0;  // sup over unit block pairs
  double upper = 0.0;      // 2 * block_sup
  double lower = 0.0;      // best B-normalized pairing found
  long arg_row = 0, arg_col = 0;
};

struct SchurOptions {
  std::size_t random_probes = 64;
  NormOptions norm{};
  std::vector<Index> window;  // restrict both sides to these nodes; empty = all
};

/// Upper bound from the unit-block sup, lower bound from single-shell power
/// iteration plus random B-normalized probes.
SchurBound schur_block_bound(const LinearMap& T, const WeightSpectrum& a1, const WeightSpectrum& a2,
                             const SchurOptions& opt = {});
SchurBound schur_block_bound(const CMat& T, const WeightSpectrum& a1, const WeightSpectrum& a2,
                             const SchurOptions& opt = {});

struct AccretiveConstants {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double combined = 0.0;    // 2 C1 + C2 + C3
  double block_sup = 0.0;   // sup over all unit block pairs
  double accretivity = 0.0; // min eigenvalue of T + T*
  bool accretive() const { return accretivity >= -1e-12; }
};

AccretiveConstants accretive_constants(const CMat& T, const WeightSpectrum& a);

struct InterpolationReport {
  double bb_upper = 0.0;       // sup_j sum_k (R_k/R_j)^{1/2} ‖F_k T F_j‖
  double bb_lower = 0.0;       // single-shell probes
  double hilbert_norm = 0.0;
  double weighted_norm = 0.0;  // ‖<A_2>^s T <A_1>^{-s}‖
  double ratio = 0.0;          // bb_upper / (hilbert + weighted)
  double s = 0.0;
};

InterpolationReport verify_interpolation(const CMat& T, const WeightSpectrum& a1, const WeightSpectrum& a2,
                                         double s);

}  // namespace lapzero
