// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "lapzero/operator.hpp"

using namespace lapzero;

namespace {

double lowest_eigenvalue(const SpMat& H) {
  const RMat D = RMat(H.real());
  Eigen::SelfAdjointEigenSolver<RMat> es(D, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace

TEST_CASE("grid geometry") {
  const Grid1D g(8.0, 64);
  CHECK(g.h == doctest::Approx(0.25));
  CHECK(g.x[0] == doctest::Approx(-8.0 + 0.125));
  for (Index i = 0; i < g.N; ++i) CHECK(g.x[i] == doctest::Approx(-g.x[g.N - 1 - i]));
  CHECK(g.h * g.N == doctest::Approx(2 * g.L));
  CHECK_THROWS_AS(Grid1D(8.0, 60), ParameterError);
  CHECK_NOTHROW(Grid1D(8.0, 60, false));
  const Grid1D w = Grid1D::with_spacing(16.0, 0.25);
  CHECK(w.N == 128);
  CHECK_THROWS_AS(Grid1D::with_spacing(16.1, 0.25), ParameterError);

  const RadialGrid r(10.0, 100, 3, 1);
  CHECK(r.r[0] == doctest::Approx(0.05));
  CHECK(r.c_ell == doctest::Approx(2.0));
  CHECK(RadialGrid(10.0, 10, 1, 0).c_ell == doctest::Approx(0.0));
  CHECK(RadialGrid(10.0, 10, 2, 0).c_ell == doctest::Approx(-0.25));
}

TEST_CASE("smoothstep and layer") {
  for (int d : {3, 5, 7}) {
    CHECK(smoothstep(0.0, d) == 0.0);
    CHECK(smoothstep(1.0, d) == 1.0);
    CHECK(smoothstep(0.5, d) == doctest::Approx(0.5));
    CHECK(smoothstep(-2.0, d) == 0.0);
    CHECK(smoothstep(3.0, d) == 1.0);
    for (double t = 0.0; t < 1.0; t += 0.05) CHECK(smoothstep(t + 0.05, d) >= smoothstep(t, d));
  }
  CHECK_THROWS_AS(smoothstep(0.5, 4), ParameterError);
  const AbsorbingLayer cap{10.0, 5.0, 0.1, 5};
  CHECK(cap.profile(9.0) == 0.0);
  CHECK(cap.profile(12.5) == doctest::Approx(0.5));
  CHECK(cap.profile(20.0) == 1.0);
}

TEST_CASE("particle in a box converges at second order") {
  const double L = 5.0;
  const double exact = std::pow(M_PI / (2 * L), 2);
  std::vector<double> err;
  for (Index N : {64, 128, 256}) {
    const auto H = build_hamiltonian(free_model(1.0, 1), Grid1D(L, N));
    err.push_back(std::abs(lowest_eigenvalue(H.H.mat) - exact));
  }
  CHECK(std::log2(err[0] / err[1]) > 1.9);
  CHECK(std::log2(err[1] / err[2]) > 1.9);
  HamiltonianOptions four;
  four.order = 4;
  const auto H4 = build_hamiltonian(free_model(1.0, 1), Grid1D(L, 128), four);
  CHECK(std::abs(lowest_eigenvalue(H4.H.mat) - exact) < err[1]);
}

TEST_CASE("hydrogen ground state on a radial grid") {
  const PotentialModel c = coulomb_model(1.0, 3);
  std::vector<double> e;
  for (Index N : {400, 800, 1600}) e.push_back(lowest_eigenvalue(build_hamiltonian(c, RadialGrid(40.0, N, 3, 0)).H.mat));
  CHECK(e[2] == doctest::Approx(-0.25).epsilon(2e-3));
  CHECK(std::abs(e[2] + 0.25) < std::abs(e[0] + 0.25));
}

TEST_CASE("hermiticity and layer") {
  HamiltonianOptions opt;
  opt.layer = AbsorbingLayer{8.0, 8.0, 0.01, 5};
  const auto H = build_hamiltonian(standard_model(1.0, 1.0, 1), Grid1D(16.0, 256), opt);
  CHECK(H.H.hermitian);
  CHECK(H.H.hermitian_residual() <= 1e-12);
  CHECK(H.layer.mat.nonZeros() > 0);
  for (Index i : H.interior) CHECK(std::abs(H.H.nodes[i]) <= 8.0);
  CHECK(H.total().coeff(0, 0).imag() == doctest::Approx(-0.01 * opt.layer.profile(std::abs(H.H.nodes[0]))));
  CHECK_THROWS_AS(build_hamiltonian(standard_model(1.0, 1.0, 3), Grid1D(16.0, 256)), DimensionError);
}

TEST_CASE("dilation generator") {
  const Grid1D g(20.0, 1024);
  const auto A = build_dilation(g);
  CHECK(A.hermitian_residual() <= 1e-14);
  // −i(x φ' + φ/2) for φ = exp(−x²/2)
  const CVec phi = g.x.unaryExpr([](double x) { return std::exp(-x * x / 2); }).cast<Complex>();
  const CVec exact = g.x.unaryExpr([](double x) { return (1.0 - x * x - 0.5) * std::exp(-x * x / 2); }).cast<Complex>() * (-I);
  const double e1 = (A.mat * phi - exact).cwiseAbs().maxCoeff();
  const Grid1D g2(20.0, 2048);
  const CVec phi2 = g2.x.unaryExpr([](double x) { return std::exp(-x * x / 2); }).cast<Complex>();
  const CVec exact2 = g2.x.unaryExpr([](double x) { return (0.5 - x * x) * std::exp(-x * x / 2); }).cast<Complex>() * (-I);
  const double e2 = (build_dilation(g2).mat * phi2 - exact2).cwiseAbs().maxCoeff();
  CHECK(std::log2(e1 / e2) > 1.9);

  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  CVec u(g.N);
  for (auto& v : u) v = Complex(n(rng), n(rng));
  const Complex q = u.dot(A.mat * u);
  CHECK(std::abs(q.imag()) <= 1e-10 * std::abs(q));
  // parity P A P = A
  CVec pu = u.reverse();
  CHECK((CVec(A.mat * pu).reverse() - A.mat * u).norm() <= 1e-12 * (A.mat * u).norm());
}

TEST_CASE("virial commutator") {
  SUBCASE("free") {
    const auto st = commutator_refinement(free_model(1.0, 1), 40.0, 256, 2);
    CHECK(st.min_order() >= 1.8);
  }
  SUBCASE("standard model") {
    const auto st = commutator_refinement(standard_model(1.0, 1.0, 1), 40.0, 256, 2);
    CHECK(st.min_order() >= 1.8);
    CHECK(st.residual.back() < st.residual.front());
  }
  SUBCASE("errors") {
    const Grid1D g(40.0, 256);
    const auto m = standard_model(1.0, 1.0, 1);
    const auto H = build_hamiltonian(m, g);
    const auto A = build_dilation(g);
    CHECK_THROWS_AS(commutator_residual(H.H, A, m, {RVec(RVec::Zero(g.N))}), DataError);
    CHECK_THROWS_AS(commutator_residual(H.H, A, m, {RVec(RVec::Ones(g.N))}), DataError);
    CHECK_THROWS_AS(commutator_residual(H.H, A, coulomb_model(1.0, 3), {}), ParameterError);
  }
  SUBCASE("W on nodes") {
    const RVec x = RVec::LinSpaced(5, -2.0, 2.0);
    const RVec W = virial_on_nodes(standard_model(1.0, 1.0, 1), x);
    CHECK(W[2] == doctest::Approx(2.0));
  }
}

TEST_CASE("triplet export") {
  const auto A = build_dilation(Grid1D(2.0, 8));
  std::ostringstream os;
  export_triplets(A, os);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("#", 0) == 0);
  int rows = 0;
  SpMat back(8, 8);
  std::vector<Triplet> t;
  Index r, c;
  double re, im;
  while (in >> r >> c >> re >> im) {
    t.emplace_back(r, c, Complex(re, im));
    ++rows;
  }
  back.setFromTriplets(t.begin(), t.end());
  CHECK(rows == 14);
  CHECK((SpMat(back - A.mat)).norm() <= 1e-15 * A.mat.norm());
}
