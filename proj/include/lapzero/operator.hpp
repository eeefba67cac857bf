// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lapzero/core.hpp"
#include "lapzero/grid.hpp"
#include "lapzero/potential.hpp"

namespace lapzero {

struct DiscreteOperator {
  SpMat mat;
  std::string label;
  bool hermitian = false;
  Index bandwidth = 0;
  RVec nodes;  // grid nodes the operator acts on
  double h = 0.0;

  Index size() const { return mat.rows(); }
  /// max|M - M*| / max|M|
  double hermitian_residual() const;
};

struct HamiltonianOptions {
  int order = 2;  // 2 or 4
  AbsorbingLayer layer{};
  bool include_V2 = true;
};

/// H = -Δ + V on the grid, with the absorbing layer kept as a separate term.
struct Hamiltonian {
  DiscreteOperator H;      // Hermitian part
  DiscreteOperator layer;  // -iη S(x) on the diagonal, zero when disabled
  RVec potential;          // V at the nodes (plus c_l / r² on radial grids)
  std::vector<Index> interior;  // nodes where the layer vanishes

  SpMat total() const { return H.mat + layer.mat; }
  Index size() const { return H.size(); }
};

Hamiltonian build_hamiltonian(const PotentialModel& model, const Grid1D& grid, const HamiltonianOptions& opt = {});
Hamiltonian build_hamiltonian(const PotentialModel& model, const RadialGrid& grid, const HamiltonianOptions& opt = {});

/// A = (x p + p x)/2 with the centred-difference momentum.
DiscreteOperator build_dilation(const Grid1D& grid);
DiscreteOperator build_dilation(const RadialGrid& grid);

/// i[H, A] as a sparse product.
DiscreteOperator commutator(const DiscreteOperator& H, const DiscreteOperator& A);

/// W = -2V1 - x·∇V1 at the nodes.
RVec virial_on_nodes(const PotentialModel& model, const RVec& nodes);

/// Normalised Gaussians well inside the box.
std::vector<RVec> gaussian_probes(const RVec& nodes, double L, bool radial = false);

/// max over probes of ‖(i[H,A] - 2H - W)φ‖ / ‖φ‖.
double commutator_residual(const DiscreteOperator& H, const DiscreteOperator& A, const PotentialModel& model,
                           const std::vector<RVec>& probes);

struct RefinementStudy {
  std::vector<double> h;
  std::vector<double> residual;
  std::vector<double> order;  // log2 of consecutive residual ratios
  double min_order() const;
};

/// Residual on h, h/2, ... at fixed half-width (levels + 1 grids).
RefinementStudy commutator_refinement(const PotentialModel& model, double L, Index N0, int levels,
                                      bool radial = false);

/// Text triplets "row col re im", zero-based, preceded by a '#' header.
void export_triplets(const DiscreteOperator& op, std::ostream& out);

}  // namespace lapzero
