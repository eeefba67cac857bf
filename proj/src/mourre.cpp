// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include <Eigen/Eigenvalues>

#include "lapzero/resolvent.hpp"

namespace lapzero {

MourreSolver::MourreSolver(const SpMat& H, const SpMat& commutator, Complex z, double eps, SolverOptions opt)
    : eps_(eps) {
  if (H.rows() != commutator.rows() || H.cols() != commutator.cols())
    throw DimensionError("Mourre solver: operator and commutator sizes differ");
  if (!(eps * z.imag() > 0.0)) throw ParameterError("Mourre solver needs eps * Im z > 0");
  const SpMat M = H - Complex(0.0, eps) * commutator;
  inner_ = std::make_shared<ShiftedSolver>(M, z, opt);
}

CMat DilationSpectrum::apply_function(const std::function<double(double)>& f) const {
  const RVec fv = values.unaryExpr(f);
  return vectors * fv.cast<Complex>().asDiagonal() * vectors.adjoint();
}

DilationSpectrum dilation_spectrum(const DiscreteOperator& A) {
  const Index n = A.size();
  const CMat D = A.mat;
  RVec diag(n), off(std::max<Index>(n - 1, 0));
  // similarity by diag(i^k) turns the Hermitian tridiagonal into a real one
  auto phase = [](Index k) {
    static const Complex p[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return p[k % 4];
  };
  const double scale = std::max(D.cwiseAbs().maxCoeff(), 1e-300);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j)
      if (std::abs(i - j) > 1 && std::abs(D(i, j)) > 1e-12 * scale)
        throw DataError("dilation spectrum needs a tridiagonal generator");
    diag[i] = D(i, i).real();
    if (i + 1 < n) {
      const Complex s = std::conj(phase(i)) * D(i, i + 1) * phase(i + 1);
      if (std::abs(s.imag()) > 1e-12 * scale) throw DataError("generator is not of dilation type");
      off[i] = s.real();
    }
  }
  Eigen::SelfAdjointEigenSolver<RMat> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  DilationSpectrum out;
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors().cast<Complex>();
  for (Index i = 0; i < n; ++i) out.vectors.row(i) *= phase(i);
  return out;
}

QuadraticReport quadratic_check(const DiscreteOperator& H, const DiscreteOperator& A, const QuadraticOptions& opt) {
  if (H.size() != A.size()) throw DimensionError("quadratic check: operator sizes differ");
  if (opt.moduli.empty() || opt.eps.empty()) throw ParameterError("quadratic check: empty modulus or eps grid");
  const Index n = H.size();
  const DiscreteOperator C = commutator(H, A);
  const DilationSpectrum spec = dilation_spectrum(A);
  const CMat Ainv = spec.apply_function([](double a) { return 1.0 / japanese(a); });
  const RVec& x = H.nodes;
  const RVec decay = x.unaryExpr([&](double t) { return std::pow(japanese(t), -opt.s); });

  QuadraticReport rep;
  for (double mz : opt.moduli) {
    const Complex z = std::polar(mz, opt.arg);
    const RVec f = weight_f(WeightParams{mz, opt.K, opt.mu}, x);
    const CVec fc = f.cast<Complex>();
    const CVec t1 = (f.cwiseSqrt().cwiseProduct(decay)).cast<Complex>();
    const CMat T2 = fc.asDiagonal() * Ainv;
    double sup = 0.0;
    for (double eps : opt.eps) {
      const MourreSolver R(H.mat, C.mat, z, eps);
      for (int probe = 0; probe < 2; ++probe) {
        LinearMap T;
        T.rows = T.cols = n;
        if (probe == 0) {
          T.apply = [&](const CVec& v) { return CVec(t1.cwiseProduct(v)); };
          T.adjoint = [&](const CVec& v) { return CVec(t1.conjugate().cwiseProduct(v)); };
        } else {
          T.apply = [&](const CVec& v) { return CVec(T2 * v); };
          T.adjoint = [&](const CVec& v) { return CVec(T2.adjoint() * v); };
        }
        LinearMap left, mid;
        left.rows = left.cols = mid.rows = mid.cols = n;
        left.apply = [&](const CVec& v) { return CVec(fc.cwiseProduct(R.solve(T.apply(v)))); };
        left.adjoint = [&](const CVec& v) { return T.adjoint(R.solve_adjoint(CVec(fc.cwiseProduct(v)))); };
        mid.apply = [&](const CVec& v) { return T.adjoint(R.solve(T.apply(v))); };
        mid.adjoint = [&](const CVec& v) { return T.adjoint(R.solve_adjoint(T.apply(v))); };
        QuadraticRow row;
        row.modulus = mz;
        row.eps = eps;
        row.probe = probe == 0 ? "weight" : "dilation";
        const double l = estimate_norm(left, opt.norm).value;
        row.lhs = l * l;
        row.rhs = estimate_norm(mid, opt.norm).value;
        row.ratio = row.rhs > 0.0 ? eps * row.lhs / row.rhs : 0.0;
        sup = std::max(sup, row.ratio);
        rep.rows.push_back(row);
      }
    }
    rep.moduli.push_back(mz);
    rep.sup_by_modulus.push_back(sup);
    rep.constant = std::max(rep.constant, sup);
  }
  const auto [lo, hi] = std::minmax_element(rep.sup_by_modulus.begin(), rep.sup_by_modulus.end());
  rep.spread = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  return rep;
}

}  // namespace lapzero
