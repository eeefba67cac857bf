// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace lapzero {

using Index = Eigen::Index;
using Real = double;
using Complex = std::complex<double>;

using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

inline constexpr Complex I{0.0, 1.0};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// length or shape mismatch between vectors, spectra and operators
class DimensionError : public Error {
 public:
  using Error::Error;
};

// non-finite entries, degenerate probes, invalid sample data
class DataError : public Error {
 public:
  using Error::Error;
};

// parameter outside the admissible range of an operation
class ParameterError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual = -1.0)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Raised when an iterated ladder fails to contract; carries the ladder.
class ConvergenceError : public SolverError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> ladder)
      : SolverError(what), ladder_(std::move(ladder)) {}
  const std::vector<double>& ladder() const { return ladder_; }

 private:
  std::vector<double> ladder_;
};

inline double japanese(double x) { return std::sqrt(1.0 + x * x); }

// Least-squares slope of log(values) against log(radii).
double loglog_slope(const std::vector<double>& radii, const std::vector<double>& values);

}  // namespace lapzero
