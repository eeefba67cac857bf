// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lapzero/config.hpp"
#include "lapzero/operator.hpp"
#include "lapzero/report.hpp"
#include "lapzero/resolvent.hpp"

namespace lapzero {

struct VectorDump {
  std::string name;
  CVec data;
  Json header;
};

struct ExperimentOutput {
  Report report;
  std::vector<SweepRow> sweep;
  std::vector<VectorDump> vectors;
};

const std::vector<std::string>& experiment_ids();

ExperimentOutput run_besov_selftest(const ExperimentConfig& cfg);
ExperimentOutput run_check_potential(const ExperimentConfig& cfg);
ExperimentOutput run_lap_sweep(const ExperimentConfig& cfg);
ExperimentOutput run_besov_bound(const ExperimentConfig& cfg);
ExperimentOutput run_radiation(const ExperimentConfig& cfg);
ExperimentOutput run_uniqueness(const ExperimentConfig& cfg);
ExperimentOutput run_experiment(const std::string& id, const ExperimentConfig& cfg);

/// Triplet export of H, A, the commutator or the absorbing layer.
void export_operator(const ExperimentConfig& cfg, const std::string& which, std::ostream& out);

/// Box + absorbing layer for the configured model at a box scale.
struct Setup {
  PotentialModel model;
  Grid1D grid;
  Hamiltonian ham;
  SpMat total;                 // H plus the layer term
  std::vector<Index> physical; // nodes with |x| < L (unscaled)
};
Setup make_setup(const ExperimentConfig& cfg, double scale = 1.0);

/// max |u - u_exact| / max |u_exact| over |x| < L/2 for V = 0 and a unit Gaussian
/// source, against Gauss-Legendre quadrature of the free kernel.
double free_kernel_error(Index N, double L, Complex z, int order, double width = 1.0);

/// Defect ladder R_k = start 2^{k/4}, k = 0..steps, with the extra radii merged in.
std::vector<double> radius_ladder(double start, int steps, const std::vector<double>& extra = {});

}  // namespace lapzero
