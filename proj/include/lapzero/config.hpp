// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration: INI-style text with [sections] and key = value.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lapzero/core.hpp"
#include "lapzero/grid.hpp"
#include "lapzero/potential.hpp"

namespace lapzero {

struct ModelSpec {
  std::string family = "standard";  // standard | coulomb | free
  double gamma = 1.0;
  double mu = 1.0;
  int dim = 1;
  int ell = 0;
  std::string v2_file;
};

struct GridSpec {
  double L = 400.0;          // physical half-width
  Index N = 4096;            // nodes across the physical box
  double cap_width = 400.0;  // absorbing layer outside the physical box
  double cap_eta = 3e-3;
  int cap_degree = 5;
  int order = 2;

  double h() const { return 2.0 * L / static_cast<double>(N); }
  /// Grid covering box and layer at spacing h.
  Grid1D total_grid(double scale = 1.0) const;
  AbsorbingLayer layer(double scale = 1.0) const;
};

struct SectorSpec {
  double theta = 3.0 * M_PI / 4.0;
  double lambda0 = 1.0;
  std::vector<double> args;  // empty = bisector
  std::vector<double> moduli{1e-1, 1e-2, 1e-3, 1e-4};
};

struct SolverSpec {
  double tol = 1e-10;
  int refine = 3;
  int threads = 1;
  int norm_iter = 60;
  double norm_tol = 1e-8;
  int probes = 64;
};

struct BesovSpec {
  Index size = 96;
  std::size_t samples = 200;
  double base = 4.0;
  std::vector<double> scaling{4.0, 1.0, 1.0 / 3.0, 0.25};
  std::vector<double> power{1.0, 0.5, -0.5};
  double inject_scaling = 0.0;  // replaces the 8|c|^{1/2} constant when > 0
  Index dense_size = 64;
};

struct RadiationSpec {
  double arg = -1.0;  // < 0: θ/2
  double rho = 0.5;
  int max_steps = 28;
  int min_steps = 8;
  int levels = 4;
  double tol = 1e-8;
  double ladder_start = 8.0;
  int ladder_steps = 18;  // R_k = start * 2^{k/4}
  double annulus = 0.5;
  double sigma = 0.0;
  double source_width = 1.0;
  double source_center = 0.0;
};

struct HoelderSpec {
  std::size_t pairs = 20;
  double zmin = 1e-3;
  double s_offset = 0.05;
  double L = 60.0;
  Index N = 256;
  double cap_width = 60.0;
  int refinements = 2;
};

struct QuadraticSpec {
  Index N = 1024;
  double L = 100.0;
  std::vector<double> moduli{1e-1, 1e-2, 1e-3};
  std::vector<double> eps{0.2, 0.1, 0.05};
  double s_offset = 0.05;
};

struct ThresholdSpec {
  double box = 0.05;
  double unweighted_exponent = -0.85;
  double besov_exponent = -0.2;
  double decreasing = -0.2;
  double flat = -0.05;
  double defect_ratio = 0.2;
  double conjugation = 1e-8;
  double ladder_ratio = 0.85;
  double hoelder_spread = 2.0;
  double null_residual = 1e-6;
  double null_norm = 0.1;
  double quadratic_spread = 2.0;
  double commutator_order = 1.8;
  double free_kernel = 1e-6;
};

struct OutputSpec {
  std::string dir = ".";
  std::string prefix;
};

struct ExperimentConfig {
  ModelSpec model;
  GridSpec grid;
  SectorSpec sector;
  SolverSpec solver;
  BesovSpec besov;
  RadiationSpec radiation;
  HoelderSpec hoelder;
  QuadraticSpec quadratic;
  ThresholdSpec thresholds;
  OutputSpec output;
  std::uint64_t seed = 1;

  /// Every key with its resolved value, "section.key" -> text.
  std::map<std::string, std::string> resolved() const;
  PotentialModel build_model() const;
  double ray_arg() const { return radiation.arg < 0.0 ? sector.theta / 2.0 : radiation.arg; }
};

struct SchemaEntry {
  std::string key;  // section.key
  std::string type;
  std::string fallback;
  std::string doc;
};
const std::vector<SchemaEntry>& config_schema();
std::string schema_text();

/// Parses INI text; unknown keys and malformed values raise ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
/// Defaults, then overrides applied as "section.key" = value.
ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv);

}  // namespace lapzero
