// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "lapzero/resolvent.hpp"

using namespace lapzero;

namespace {

CVec random_vec(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CVec u(n);
  for (auto& v : u) v = Complex(g(rng), g(rng));
  return u;
}

}  // namespace

TEST_CASE("Mourre-regularised resolvent") {
  const Grid1D g(16.0, 128);
  const auto H = build_hamiltonian(standard_model(1.0, 1.0, 1), g);
  const auto A = build_dilation(g);
  const auto C = commutator(H.H, A);
  const Complex z(0.1, 0.2);
  const CVec v = random_vec(g.N, 6);
  const CVec exact = solve(H.H.mat, z, v);
  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const double d = (MourreSolver(H.H.mat, C.mat, z, eps).solve(v) - exact).norm();
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev <= 1e-2 * exact.norm());
  CHECK_THROWS_AS(MourreSolver(H.H.mat, C.mat, z, -0.1), ParameterError);
  CHECK_THROWS_AS(MourreSolver(H.H.mat, C.mat, std::conj(z), 0.1), ParameterError);
}

TEST_CASE("dilation spectrum") {
  const Grid1D g(6.0, 64);
  const auto A = build_dilation(g);
  const auto sp = dilation_spectrum(A);
  Eigen::SelfAdjointEigenSolver<CMat> es{CMat(A.mat)};
  CHECK((sp.values - es.eigenvalues()).cwiseAbs().maxCoeff() <= 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff());
  CHECK((sp.vectors.adjoint() * sp.vectors - CMat::Identity(64, 64)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((sp.apply_function([](double a) { return a; }) - CMat(A.mat)).cwiseAbs().maxCoeff() <= 1e-10);
  const CMat inv = sp.apply_function([](double a) { return 1.0 / japanese(a); });
  CHECK(Eigen::SelfAdjointEigenSolver<CMat>(inv).eigenvalues().maxCoeff() <= 1.0 + 1e-12);

  DiscreteOperator wide = A;
  wide.mat.coeffRef(0, 5) = 1.0;
  CHECK_THROWS_AS(dilation_spectrum(wide), DataError);
}

TEST_CASE("quadratic estimate on a small box") {
  const Grid1D g(20.0, 128);
  const auto H = build_hamiltonian(standard_model(1.0, 1.0, 1), g);
  const auto A = build_dilation(g);
  QuadraticOptions qo;
  qo.moduli = {1e-1, 1e-2};
  qo.eps = {0.2, 0.1};
  const auto rep = quadratic_check(H.H, A, qo);
  CHECK(rep.rows.size() == 8);
  CHECK(rep.sup_by_modulus.size() == 2);
  for (const auto& r : rep.rows) {
    CHECK(std::isfinite(r.ratio));
    CHECK(r.ratio >= 0.0);
  }
  CHECK(rep.constant == doctest::Approx(*std::max_element(rep.sup_by_modulus.begin(), rep.sup_by_modulus.end())));
  CHECK(rep.spread >= 1.0);
  qo.eps.clear();
  CHECK_THROWS_AS(quadratic_check(H.H, A, qo), ParameterError);
  CHECK_THROWS_AS(quadratic_check(H.H, build_dilation(Grid1D(20.0, 64)), QuadraticOptions{}), DimensionError);
}
