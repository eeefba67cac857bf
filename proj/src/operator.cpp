// SPDX-License-Identifier: Apache-2.0
#include "lapzero/operator.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace lapzero {

double DiscreteOperator::hermitian_residual() const {
  const SpMat d = mat - SpMat(mat.adjoint());
  double num = 0.0, den = 0.0;
  for (Index k = 0; k < d.outerSize(); ++k)
    for (SpMat::InnerIterator it(d, k); it; ++it) num = std::max(num, std::abs(it.value()));
  for (Index k = 0; k < mat.outerSize(); ++k)
    for (SpMat::InnerIterator it(mat, k); it; ++it) den = std::max(den, std::abs(it.value()));
  return den > 0.0 ? num / den : 0.0;
}

namespace {

// -d²/dx² with odd reflection at both ends (Dirichlet on the cell faces)
std::vector<Triplet> laplacian(Index N, double h, int order, bool left_wall, bool right_wall) {
  std::vector<Triplet> t;
  const double s = 1.0 / (h * h);
  auto add = [&](Index i, Index j, double v) {
    if (j >= 0 && j < N) t.emplace_back(i, j, v * s);
  };
  if (order == 2) {
    t.reserve(static_cast<std::size_t>(3 * N));
    for (Index i = 0; i < N; ++i) {
      double diag = 2.0;
      if (i == 0 && left_wall) diag += 1.0;
      if (i == N - 1 && right_wall) diag += 1.0;
      add(i, i, diag);
      add(i, i - 1, -1.0);
      add(i, i + 1, -1.0);
    }
  } else if (order == 4) {
    t.reserve(static_cast<std::size_t>(5 * N));
    const double c[] = {1.0 / 12.0, -16.0 / 12.0, 30.0 / 12.0, -16.0 / 12.0, 1.0 / 12.0};
    for (Index i = 0; i < N; ++i) {
      for (int k = -2; k <= 2; ++k) {
        Index j = i + k;
        double v = c[k + 2];
        if (j < 0) {
          if (!left_wall) continue;
          j = -j - 1;  // ghost u_{-m} = -u_{m-1}
          v = -v;
        } else if (j >= N) {
          if (!right_wall) continue;
          j = 2 * N - 1 - j;
          v = -v;
        }
        add(i, j, v);
      }
    }
  } else {
    throw ParameterError("stencil order must be 2 or 4");
  }
  return t;
}

Hamiltonian assemble(const RVec& nodes, double h, const RVec& diag, const HamiltonianOptions& opt, bool left_wall) {
  const Index N = nodes.size();
  auto t = laplacian(N, h, opt.order, left_wall, true);
  for (Index i = 0; i < N; ++i) t.emplace_back(i, i, diag[i]);
  Hamiltonian out;
  out.H.mat.resize(N, N);
  out.H.mat.setFromTriplets(t.begin(), t.end());
  out.H.mat.makeCompressed();
  out.H.label = "H";
  out.H.hermitian = true;
  out.H.bandwidth = opt.order / 2;
  out.H.nodes = nodes;
  out.H.h = h;
  out.potential = diag;

  out.layer.mat.resize(N, N);
  out.layer.label = "layer";
  out.layer.nodes = nodes;
  out.layer.h = h;
  std::vector<Triplet> lt;
  for (Index i = 0; i < N; ++i) {
    const double s = opt.layer.profile(std::abs(nodes[i]));
    if (s > 0.0)
      lt.emplace_back(i, i, Complex(0.0, -opt.layer.eta * s));
    else
      out.interior.push_back(i);
  }
  out.layer.mat.setFromTriplets(lt.begin(), lt.end());
  return out;
}

std::vector<Triplet> dilation_triplets(const RVec& x, double h) {
  const Index N = x.size();
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(2 * N));
  for (Index i = 0; i + 1 < N; ++i) {
    const double c = (x[i] + x[i + 1]) / (4.0 * h);
    t.emplace_back(i, i + 1, Complex(0.0, -c));
    t.emplace_back(i + 1, i, Complex(0.0, c));
  }
  return t;
}

DiscreteOperator make_dilation(const RVec& x, double h) {
  const auto t = dilation_triplets(x, h);
  DiscreteOperator A;
  A.mat.resize(x.size(), x.size());
  A.mat.setFromTriplets(t.begin(), t.end());
  A.label = "A";
  A.hermitian = true;
  A.bandwidth = 1;
  A.nodes = x;
  A.h = h;
  return A;
}

}  // namespace

Hamiltonian build_hamiltonian(const PotentialModel& model, const Grid1D& grid, const HamiltonianOptions& opt) {
  if (model.dim != 1) throw DimensionError("line grid needs a one-dimensional model");
  RVec diag = grid.x.unaryExpr([&](double x) {
    const double r = std::abs(x);
    return model.V1(r) + (opt.include_V2 && model.has_V2() ? model.V2(r) : 0.0);
  });
  return assemble(grid.x, grid.h, diag, opt, true);
}

Hamiltonian build_hamiltonian(const PotentialModel& model, const RadialGrid& grid, const HamiltonianOptions& opt) {
  if (model.dim != grid.dim) throw DimensionError("radial grid dimension does not match the model");
  RVec diag = grid.r.unaryExpr([&](double r) {
    return grid.c_ell / (r * r) + model.V1(r) + (opt.include_V2 && model.has_V2() ? model.V2(r) : 0.0);
  });
  return assemble(grid.r, grid.h, diag, opt, true);
}

DiscreteOperator build_dilation(const Grid1D& grid) { return make_dilation(grid.x, grid.h); }
DiscreteOperator build_dilation(const RadialGrid& grid) { return make_dilation(grid.r, grid.h); }

DiscreteOperator commutator(const DiscreteOperator& H, const DiscreteOperator& A) {
  if (H.size() != A.size()) throw DimensionError("commutator: operator sizes differ");
  DiscreteOperator C;
  C.mat = SpMat(I * (H.mat * A.mat - A.mat * H.mat)).pruned();
  C.label = "i[" + H.label + "," + A.label + "]";
  C.hermitian = H.hermitian && A.hermitian;
  C.bandwidth = H.bandwidth + A.bandwidth;
  C.nodes = H.nodes;
  C.h = H.h;
  return C;
}

RVec virial_on_nodes(const PotentialModel& model, const RVec& nodes) {
  return nodes.unaryExpr([&](double x) { return virial_W(model, std::abs(x)); });
}

std::vector<RVec> gaussian_probes(const RVec& nodes, double L, bool radial) {
  std::vector<std::pair<double, double>> shapes;
  if (radial)
    shapes = {{L / 3.0, L / 24.0}, {L / 2.0, L / 24.0}, {L / 2.0, L / 40.0}};
  else
    shapes = {{0.0, L / 24.0}, {-L / 4.0, L / 24.0}, {L / 4.0, L / 40.0}, {0.0, L / 12.0}};
  std::vector<RVec> out;
  for (auto [c, w] : shapes) {
    RVec p = nodes.unaryExpr([c = c, w = w](double x) { return std::exp(-(x - c) * (x - c) / (2.0 * w * w)); });
    out.push_back(p / p.norm());
  }
  return out;
}

double commutator_residual(const DiscreteOperator& H, const DiscreteOperator& A, const PotentialModel& model,
                           const std::vector<RVec>& probes) {
  if (model.has_V2()) throw ParameterError("commutator identity holds for V = V1 only");
  if (H.size() != A.size()) throw DimensionError("commutator_residual: operator sizes differ");
  const DiscreteOperator C = commutator(H, A);
  const RVec W = virial_on_nodes(model, H.nodes);
  const SpMat R = C.mat - 2.0 * H.mat;
  const Index N = H.size();
  const Index edge = std::max<Index>(4, N / 20);
  double worst = 0.0;
  for (const RVec& p : probes) {
    if (p.size() != N) throw DimensionError("probe length does not match the grid");
    const double pn = p.norm();
    if (!(pn > 0.0)) throw DataError("degenerate (zero) commutator probe");
    const double pmax = p.cwiseAbs().maxCoeff();
    const double bmax = std::max(p.head(edge).cwiseAbs().maxCoeff(), p.tail(edge).cwiseAbs().maxCoeff());
    if (bmax > 1e-10 * pmax) throw DataError("commutator probe reaches the boundary region");
    const CVec pc = p.cast<Complex>();
    const CVec r = R * pc - W.cwiseProduct(p).cast<Complex>();
    worst = std::max(worst, r.norm() / pn);
  }
  return worst;
}

double RefinementStudy::min_order() const {
  return order.empty() ? 0.0 : *std::min_element(order.begin(), order.end());
}

RefinementStudy commutator_refinement(const PotentialModel& model, double L, Index N0, int levels, bool radial) {
  RefinementStudy st;
  for (int k = 0; k <= levels; ++k) {
    const Index N = N0 << k;
    double res;
    if (radial) {
      const RadialGrid g(L, N, model.dim, 0);
      const auto H = build_hamiltonian(model, g);
      res = commutator_residual(H.H, build_dilation(g), model, gaussian_probes(g.r, L, true));
      st.h.push_back(g.h);
    } else {
      const Grid1D g(L, N);
      const auto H = build_hamiltonian(model, g);
      res = commutator_residual(H.H, build_dilation(g), model, gaussian_probes(g.x, L));
      st.h.push_back(g.h);
    }
    st.residual.push_back(res);
    if (k > 0) st.order.push_back(std::log2(st.residual[k - 1] / res));
  }
  return st;
}

void export_triplets(const DiscreteOperator& op, std::ostream& out) {
  out << "# " << op.label << " " << op.mat.rows() << " " << op.mat.cols() << " " << op.mat.nonZeros() << "\n";
  out << std::setprecision(17);
  for (Index k = 0; k < op.mat.outerSize(); ++k)
    for (SpMat::InnerIterator it(op.mat, k); it; ++it)
      out << it.row() << " " << it.col() << " " << it.value().real() << " " << it.value().imag() << "\n";
}

}  // namespace lapzero
