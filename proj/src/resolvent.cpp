// SPDX-License-Identifier: Apache-2.0
#include "lapzero/resolvent.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

namespace lapzero {

void Sector::validate() const {
  if (!(theta > 0.0 && theta <= M_PI)) throw ParameterError("sector angle must lie in (0, pi]");
  if (!(lambda0 > 0.0)) throw ParameterError("sector radius must be positive");
  for (double a : args)
    if (!(a > 0.0 && a < theta)) throw ParameterError("ray argument outside the sector");
  for (double m : moduli)
    if (!(m > 0.0 && m <= lambda0)) throw ParameterError("|z| outside (0, lambda0]");
}

bool Sector::contains(Complex z) const {
  const double m = std::abs(z), a = std::arg(z);
  return m > 0.0 && m <= lambda0 && a > 0.0 && a < theta;
}

std::vector<Complex> Sector::points() const {
  std::vector<Complex> out;
  const std::vector<double> rays = args.empty() ? std::vector<double>{bisector()} : args;
  for (double a : rays)
    for (double m : moduli) out.push_back(std::polar(m, a));
  return out;
}

// ---------------------------------------------------------------------------

ShiftedSolver::ShiftedSolver(const SpMat& M, Complex z, SolverOptions opt) : z_(z), opt_(opt) {
  if (M.rows() != M.cols()) throw DimensionError("resolvent of a non-square matrix");
  SpMat Id(M.rows(), M.cols());
  Id.setIdentity();
  A_ = M - z * Id;
  A_.makeCompressed();
  lu_.compute(A_);
  if (lu_.info() != Eigen::Success) throw SolverError("sparse LU failed: matrix is singular at z", -1.0);
}

namespace {

template <typename Solve, typename Apply>
CVec refined(const CVec& v, Solve&& solve, Apply&& apply, const SolverOptions& opt) {
  const double vn = v.norm();
  if (vn == 0.0) return CVec::Zero(v.size());
  CVec x = solve(v);
  double rel = (v - apply(x)).norm() / vn;
  for (int k = 0; k < opt.refine && rel > opt.tol; ++k) {
    x += solve(CVec(v - apply(x)));
    rel = (v - apply(x)).norm() / vn;
  }
  if (!std::isfinite(rel) || rel > opt.tol) throw SolverError("linear solve did not reach the residual tolerance", rel);
  return x;
}

}  // namespace

CVec ShiftedSolver::solve(const CVec& v) const {
  if (v.size() != size()) throw DimensionError("solve: right-hand side has the wrong length");
  return refined(
      v, [&](const CVec& b) { return CVec(lu_.solve(b)); }, [&](const CVec& x) { return CVec(A_ * x); }, opt_);
}

CVec ShiftedSolver::solve_adjoint(const CVec& v) const {
  if (v.size() != size()) throw DimensionError("solve: right-hand side has the wrong length");
  return refined(
      v, [&](const CVec& b) { return CVec(lu_.adjoint().solve(b)); },
      [&](const CVec& x) { return CVec(A_.adjoint() * x); }, opt_);
}

CMat ShiftedSolver::solve(const CMat& V) const {
  if (V.rows() != size()) throw DimensionError("solve: right-hand side has the wrong length");
  CMat X = lu_.solve(V);
  for (Index j = 0; j < V.cols(); ++j) {
    const double vn = V.col(j).norm();
    if (vn == 0.0) continue;
    double rel = (V.col(j) - A_ * X.col(j)).norm() / vn;
    if (rel > opt_.tol) {
      X.col(j) = solve(CVec(V.col(j)));
      rel = (V.col(j) - A_ * X.col(j)).norm() / vn;
    }
    if (!std::isfinite(rel)) throw SolverError("linear solve produced non-finite values", rel);
  }
  return X;
}

SolverFactory make_factory(const SpMat& M, SolverOptions opt) {
  return [M, opt](Complex z) { return std::make_shared<const ShiftedSolver>(M, z, opt); };
}

CVec solve(const SpMat& H, Complex z, const CVec& v, const SolverOptions& opt) {
  return ShiftedSolver(H, z, opt).solve(v);
}

LinearMap resolvent_map(std::shared_ptr<const ShiftedSolver> R, const RVec& left, const RVec& right) {
  const Index n = R->size();
  if (left.size() != n || right.size() != n) throw DimensionError("resolvent_map: weight length mismatch");
  LinearMap T;
  T.rows = T.cols = n;
  T.apply = [R, left, right](const CVec& x) {
    return CVec(left.cast<Complex>().cwiseProduct(R->solve(CVec(right.cast<Complex>().cwiseProduct(x)))));
  };
  T.adjoint = [R, left, right](const CVec& y) {
    return CVec(right.cast<Complex>().cwiseProduct(R->solve_adjoint(CVec(left.cast<Complex>().cwiseProduct(y)))));
  };
  T.columns = [R, left, right, n](const std::vector<Index>& idx) {
    CMat E = CMat::Zero(n, static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) E(idx[k], static_cast<Index>(k)) = right[idx[k]];
    CMat Y = R->solve(E);
    return CMat(left.cast<Complex>().asDiagonal() * Y);
  };
  return T;
}

NormBounds weighted_opnorm(std::shared_ptr<const ShiftedSolver> R, const RVec& left, const RVec& right,
                           const NormOptions& opt) {
  const auto pw = estimate_norm(resolvent_map(std::move(R), left, right), opt);
  NormBounds b;
  b.lower = pw.value;
  b.iterations = pw.iterations;
  b.converged = pw.converged;
  return b;
}

NormBounds besov_bstar_estimate(std::shared_ptr<const ShiftedSolver> R, const RVec& f_half, const RVec& nodes,
                                const std::vector<Index>& window, const SchurOptions& opt) {
  const LinearMap T = resolvent_map(std::move(R), f_half, f_half);
  const WeightSpectrum a(nodes.cwiseAbs(), "|x|");
  SchurOptions o = opt;
  o.window = window;
  const SchurBound sb = schur_block_bound(T, a, a, o);
  NormBounds b;
  b.lower = sb.lower;
  b.upper = sb.upper;
  b.converged = true;
  return b;
}

std::vector<double> nearest_eigenvalues(const SpMat& H, double sigma, int count, int steps) {
  if (count < 1) throw ParameterError("nearest_eigenvalues: count must be positive");
  const auto R = std::make_shared<const ShiftedSolver>(H, Complex(sigma, 0.0), SolverOptions{1e-8, 3});
  const Index n = H.rows();
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> g;
  CVec q = CVec::NullaryExpr(n, [&](Index) { return Complex(g(rng), 0.0); });
  std::vector<CVec> Q{q / q.norm()};
  std::vector<double> alpha, beta;
  const int m = std::min<int>(steps, static_cast<int>(n));
  for (int k = 0; k < m; ++k) {
    CVec w = R->solve(Q.back());
    alpha.push_back(Q.back().dot(w).real());
    for (int pass = 0; pass < 2; ++pass)
      for (const CVec& v : Q) w -= v.dot(w) * v;
    const double b = w.norm();
    if (b < 1e-12 || k + 1 == m) break;
    beta.push_back(b);
    Q.push_back(w / b);
  }
  const Index k = static_cast<Index>(alpha.size());
  RVec theta(k);
  if (k == 1) {
    theta[0] = alpha[0];
  } else {
    Eigen::SelfAdjointEigenSolver<RMat> es;
    es.computeFromTridiagonal(Eigen::Map<const RVec>(alpha.data(), k), Eigen::Map<const RVec>(beta.data(), k - 1),
                              Eigen::EigenvaluesOnly);
    theta = es.eigenvalues();
  }
  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return std::abs(theta[a]) > std::abs(theta[b]); });
  std::vector<double> out;
  for (Index i : order) {
    if (static_cast<int>(out.size()) == count || theta[i] == 0.0) break;
    out.push_back(sigma + 1.0 / theta[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------

HoelderReport hoelder_estimate(const SolverFactory& make, const RVec& nodes, double s, double s0,
                               const std::vector<std::pair<Complex, Complex>>& pairs, const NormOptions& opt,
                               double gamma_fixed) {
  if (pairs.size() < 3) throw ParameterError("Hoelder estimate needs at least three pairs");
  HoelderReport rep;
  rep.s = s;
  rep.in_hypothesis = s > s0;
  const RVec w = nodes.unaryExpr([s](double x) { return std::pow(japanese(x), -s); });
  const CVec wc = w.cast<Complex>();
  for (const auto& [z1, z2] : pairs) {
    HoelderPair p;
    p.z1 = z1;
    p.z2 = z2;
    p.dist = std::abs(z1 - z2);
    if (p.dist == 0.0) {
      rep.pairs.push_back(p);
      continue;
    }
    const auto R1 = make(z1), R2 = make(z2);
    LinearMap D;
    D.rows = D.cols = nodes.size();
    D.apply = [&](const CVec& x) {
      const CVec y = wc.cwiseProduct(x);
      return CVec(wc.cwiseProduct(R1->solve(y) - R2->solve(y)));
    };
    D.adjoint = [&](const CVec& x) {
      const CVec y = wc.cwiseProduct(x);
      return CVec(wc.cwiseProduct(R1->solve_adjoint(y) - R2->solve_adjoint(y)));
    };
    p.diff = estimate_norm(D, opt).value;
    rep.pairs.push_back(p);
  }
  if (gamma_fixed >= 0.0) {
    rep.gamma = gamma_fixed;
  } else {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double n = 0;
    for (const auto& p : rep.pairs) {
      if (!(p.diff > 0.0)) continue;
      const double X = std::log(p.dist), Y = std::log(p.diff);
      sx += X;
      sy += Y;
      sxx += X * X;
      sxy += X * Y;
      n += 1;
    }
    const double den = n * sxx - sx * sx;
    rep.gamma = (n >= 2 && den > 0.0) ? std::clamp((n * sxy - sx * sy) / den, 0.0, 1.0) : 0.0;
  }
  for (auto& p : rep.pairs) {
    p.quotient = p.dist > 0.0 ? p.diff / std::pow(p.dist, rep.gamma) : 0.0;
    rep.sup_quotient = std::max(rep.sup_quotient, p.quotient);
  }
  return rep;
}

std::vector<std::pair<Complex, Complex>> sample_pairs(const Sector& sector, std::size_t count, double zmin,
                                                      std::uint64_t seed) {
  sector.validate();
  if (!(zmin > 0.0 && zmin < sector.lambda0)) throw ParameterError("sample_pairs: need 0 < zmin < lambda0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double lo = std::log(zmin), hi = std::log(sector.lambda0);
  std::vector<std::pair<Complex, Complex>> out;
  while (out.size() < count) {
    const double m = std::exp(lo + (hi - lo) * u(rng));
    const double a = sector.theta * (0.1 + 0.8 * u(rng));
    const Complex z1 = std::polar(m, a);
    const double d = m * std::pow(10.0, -2.0 * u(rng)) * 0.5;
    const Complex z2 = z1 + std::polar(d, 2.0 * M_PI * u(rng));
    if (sector.contains(z2) && std::abs(z2) >= zmin) out.emplace_back(z1, z2);
  }
  return out;
}

// ---------------------------------------------------------------------------

double BoundaryValueResult::tail_ratio() const {
  if (ratios.empty()) return 0.0;
  const auto n = static_cast<std::ptrdiff_t>(ratios.size());
  const std::ptrdiff_t from = window > 0 ? std::max<std::ptrdiff_t>(0, n - window) : 0;
  return *std::max_element(ratios.begin() + from, ratios.end());
}

BoundaryValueResult boundary_value(const SolverFactory& make, const CVec& v, const RVec& weight,
                                   const BoundaryValueOptions& opt, int sign) {
  if (sign != 1 && sign != -1) throw ParameterError("boundary value sign must be +1 or -1");
  if (!(opt.rho > 0.0 && opt.rho < 1.0)) throw ParameterError("ray contraction must lie in (0,1)");
  if (!(opt.arg > 0.0 && opt.arg < M_PI)) throw ParameterError("ray argument must lie in (0, pi)");
  if (opt.levels < 1 || opt.min_steps <= opt.levels || opt.max_steps < opt.min_steps)
    throw ParameterError("boundary value: need levels < min_steps <= max_steps");
  if (weight.size() != v.size()) throw DimensionError("boundary value: weight length mismatch");
  BoundaryValueResult res;
  res.arg = opt.arg;
  res.sign = sign;
  res.window = opt.levels;
  if (v.norm() == 0.0) {
    res.u = CVec::Zero(v.size());
    return res;
  }
  // R(0 - i0) v = conj(R(0 + i0) conj v) for a real operator
  const bool conj = sign < 0 && !opt.direct;
  const bool adjoint = sign < 0 && opt.direct;
  const CVec rhs = conj ? CVec(v.conjugate()) : v;
  const CVec wc = weight.cast<Complex>();
  auto wnorm = [&](const CVec& x) { return wc.cwiseProduct(x).norm(); };

  std::vector<CVec> raw;
  CVec prev_extrap;
  bool done = false;
  for (int k = 0; k < opt.max_steps; ++k) {
    const Complex z = std::polar(opt.lambda0 * std::pow(opt.rho, k), opt.arg);
    const auto R = make(z);
    raw.push_back(adjoint ? R->solve_adjoint(rhs) : R->solve(rhs));
    res.steps = k + 1;
    if (k > 0) {
      res.ladder.push_back(wnorm(raw[k] - raw[k - 1]));
      const std::size_t n = res.ladder.size();
      if (n > 1 && res.ladder[n - 2] > 0.0) res.ratios.push_back(res.ladder[n - 1] / res.ladder[n - 2]);
    }
    if (k < opt.levels) continue;
    // tableau over the last levels + 1 iterates
    std::vector<CVec> col(raw.end() - opt.levels - 1, raw.end());
    for (int m = 1; m <= opt.levels; ++m) {
      const double rm = std::pow(opt.rho, m);
      for (std::size_t i = col.size() - 1; i >= static_cast<std::size_t>(m); --i)
        col[i] = (col[i] - rm * col[i - 1]) / (1.0 - rm);
    }
    const CVec extrap = col.back();
    if (prev_extrap.size() > 0) {
      const double scale = std::max(wnorm(extrap), 1e-300);
      res.tolerance = wnorm(extrap - prev_extrap) / scale;
      if (k + 1 >= opt.min_steps && res.tolerance <= opt.tol) {
        res.u = extrap;
        done = true;
        break;
      }
    }
    prev_extrap = extrap;
  }
  if (!done) throw ConvergenceError("boundary value did not converge along the ray", res.ladder);
  if (res.tail_ratio() > opt.max_ratio)
    throw ConvergenceError("resolvent ladder does not contract geometrically", res.ladder);
  if (conj) res.u = res.u.conjugate();
  return res;
}

bool box_stable(double a, double b, double tol) {
  const double m = std::max(std::abs(a), std::abs(b));
  return m == 0.0 || std::abs(a - b) <= tol * m;
}

}  // namespace lapzero
