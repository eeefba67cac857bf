// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/SparseLU>

#include "lapzero/besov.hpp"
#include "lapzero/core.hpp"
#include "lapzero/operator.hpp"

namespace lapzero {

/// arg z in (0, θ), |z| <= λ0.
struct Sector {
  double theta = 3.0 * M_PI / 4.0;
  double lambda0 = 1.0;
  std::vector<double> args;     // absolute arguments of the rays
  std::vector<double> moduli;   // |z| ladder

  void validate() const;
  bool contains(Complex z) const;
  std::vector<Complex> points() const;  // ray-major
  /// Default ray: the bisector θ/2.
  double bisector() const { return theta / 2.0; }
};

struct SolverOptions {
  double tol = 1e-10;  // relative residual
  int refine = 3;      // iterative refinement steps before giving up
};

/// Sparse LU of M - zI (M may be non-Hermitian) with residual-checked solves.
class ShiftedSolver {
 public:
  ShiftedSolver(const SpMat& M, Complex z, SolverOptions opt = {});

  CVec solve(const CVec& v) const;
  CVec solve_adjoint(const CVec& v) const;
  CMat solve(const CMat& V) const;
  Complex z() const { return z_; }
  Index size() const { return A_.rows(); }
  const SpMat& matrix() const { return A_; }

 private:
  SpMat A_;
  Complex z_;
  SolverOptions opt_;
  mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;  // adjoint() is non-const
};

using SolverFactory = std::function<std::shared_ptr<const ShiftedSolver>(Complex)>;
SolverFactory make_factory(const SpMat& M, SolverOptions opt = {});

/// (H - z)^{-1} v
CVec solve(const SpMat& H, Complex z, const CVec& v, const SolverOptions& opt = {});

/// diag(left) R(z) diag(right) as a linear map.
LinearMap resolvent_map(std::shared_ptr<const ShiftedSolver> R, const RVec& left, const RVec& right);

struct NormBounds {
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

/// Norm of diag(left) R(z) diag(right); lower only.
NormBounds weighted_opnorm(std::shared_ptr<const ShiftedSolver> R, const RVec& left, const RVec& right,
                           const NormOptions& opt = {});

/// B(|x|) -> B(|x|)* norm of f^{1/2} R(z) f^{1/2} restricted to a node window.
NormBounds besov_bstar_estimate(std::shared_ptr<const ShiftedSolver> R, const RVec& f_half, const RVec& nodes,
                                const std::vector<Index>& window, const SchurOptions& opt = {});

/// Eigenvalues of a Hermitian H closest to sigma by shift-invert Lanczos.
std::vector<double> nearest_eigenvalues(const SpMat& H, double sigma, int count, int steps = 60);

struct HoelderPair {
  Complex z1, z2;
  double dist = 0.0;
  double diff = 0.0;      // ‖T(z1) - T(z2)‖ lower estimate
  double quotient = 0.0;  // diff / dist^γ
};

struct HoelderReport {
  std::vector<HoelderPair> pairs;
  double gamma = 0.0;
  double sup_quotient = 0.0;
  double s = 0.0;
  bool in_hypothesis = true;  // s > s0
};

/// T(z) = <x>^{-s} R(z) <x>^{-s}; gamma_fixed < 0 fits γ from the pairs.
HoelderReport hoelder_estimate(const SolverFactory& make, const RVec& nodes, double s, double s0,
                               const std::vector<std::pair<Complex, Complex>>& pairs, const NormOptions& opt = {},
                               double gamma_fixed = -1.0);

/// Random pairs in the sector with |z| log-uniform in [zmin, λ0].
std::vector<std::pair<Complex, Complex>> sample_pairs(const Sector& sector, std::size_t count, double zmin,
                                                      std::uint64_t seed);

struct BoundaryValueOptions {
  double arg = 3.0 * M_PI / 8.0;
  double rho = 0.5;
  double lambda0 = 1.0;
  double tol = 1e-9;       // relative change of the extrapolated value
  int max_steps = 28;
  int min_steps = 8;
  int levels = 4;          // Richardson columns
  double max_ratio = 0.85; // geometric decrease required over the extrapolation window
  // sign -1: adjoint solves (T - z)^* at the upper-ray points instead of conjugating;
  // equal to R(conj z) of conj T when T is complex symmetric
  bool direct = false;
};

struct BoundaryValueResult {
  CVec u;
  double arg = 0.0;
  int sign = +1;
  std::vector<double> ladder;  // ‖u_{k+1} - u_k‖_{-s}
  std::vector<double> ratios;
  double tolerance = 0.0;      // last change of the extrapolated value, relative
  int steps = 0;
  int window = 0;              // ratios entering the final extrapolation tableau
  double tail_ratio() const;   // max ratio over that window
};

/// R(0 ± i0) v along z_k = λ0 ρ^k e^{iφ}, Richardson-extrapolated to z = 0.
BoundaryValueResult boundary_value(const SolverFactory& make, const CVec& v, const RVec& weight,
                                   const BoundaryValueOptions& opt, int sign = +1);

// ---------------------------------------------------------------------------
// Mourre-regularised resolvent (H - iε i[H,A] - z)^{-1}

class MourreSolver {
 public:
  MourreSolver(const SpMat& H, const SpMat& commutator, Complex z, double eps, SolverOptions opt = {});
  CVec solve(const CVec& v) const { return inner_->solve(v); }
  CMat solve(const CMat& V) const { return inner_->solve(V); }
  CVec solve_adjoint(const CVec& v) const { return inner_->solve_adjoint(v); }
  double eps() const { return eps_; }

 private:
  double eps_;
  std::shared_ptr<ShiftedSolver> inner_;
};

/// Eigen-decomposition of the dilation generator through its real tridiagonal form.
struct DilationSpectrum {
  RVec values;
  CMat vectors;
  /// f(A) as a dense matrix
  CMat apply_function(const std::function<double(double)>& f) const;
};
DilationSpectrum dilation_spectrum(const DiscreteOperator& A);

struct QuadraticRow {
  double modulus = 0.0;
  double eps = 0.0;
  std::string probe;
  double lhs = 0.0;    // ‖f R T‖²
  double rhs = 0.0;    // ‖T* R T‖
  double ratio = 0.0;  // ε lhs / rhs
};

struct QuadraticReport {
  std::vector<QuadraticRow> rows;
  std::vector<double> moduli;
  std::vector<double> sup_by_modulus;  // sup over ε and probes
  double constant = 0.0;               // sup over everything
  double spread = 0.0;                 // max/min of sup_by_modulus
};

struct QuadraticOptions {
  std::vector<double> moduli{1e-1, 1e-2, 1e-3};
  std::vector<double> eps{0.2, 0.1, 0.05};
  double arg = 3.0 * M_PI / 8.0;
  double s = 0.8;       // <x>^{-s} in the first probe
  double K = 1.0;
  double mu = 1.0;
  NormOptions norm{NormMethod::lanczos, 80, 1e-10, 7};
};

QuadraticReport quadratic_check(const DiscreteOperator& H, const DiscreteOperator& A, const QuadraticOptions& opt);

bool box_stable(double a, double b, double tol = 0.05);

/// Runs body(i) for i in [0, n) on up to `threads` workers; results must be
/// written to per-index slots so the outcome does not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  const std::size_t w = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < w; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += w) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace lapzero
