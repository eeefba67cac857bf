// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

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

Hamiltonian small_model(Index N = 128, double L = 16.0) {
  return build_hamiltonian(standard_model(1.0, 1.0, 1), Grid1D(L, N));
}

}  // namespace

TEST_CASE("sector") {
  Sector s;
  s.moduli = {0.1, 0.01};
  CHECK(s.points().size() == 2);
  for (Complex z : s.points()) {
    CHECK(s.contains(z));
    CHECK(std::arg(z) == doctest::Approx(s.bisector()));
  }
  s.args = {0.2, 1.0};
  CHECK(s.points().size() == 4);
  CHECK(s.points()[1] == std::polar(0.01, 0.2));
  CHECK_FALSE(s.contains(Complex(-1.0, 0.0)));
  CHECK_FALSE(s.contains(Complex(0.1, 0.0)));
  CHECK_FALSE(s.contains(std::polar(2.0, 0.5)));
  s.args = {2.5};
  CHECK_THROWS_AS(s.validate(), ParameterError);
  Sector far;
  far.moduli = {2.0};
  CHECK_THROWS_AS(far.validate(), ParameterError);
}

TEST_CASE("solves meet the residual bound and the conjugation symmetry") {
  const auto H = small_model();
  const CVec v = random_vec(H.size(), 1);
  const Complex z(0.3, 0.2);
  const ShiftedSolver R(H.H.mat, z);
  const CVec u = R.solve(v);
  CHECK((H.H.mat * u - z * u - v).norm() <= 1e-10 * v.norm());
  const CVec w = ShiftedSolver(H.H.mat, std::conj(z)).solve(CVec(v.conjugate()));
  CHECK((w - u.conjugate()).norm() <= 1e-12 * u.norm());
  const CVec a = R.solve_adjoint(v);
  CHECK((H.H.mat.adjoint() * a - std::conj(z) * a - v).norm() <= 1e-10 * v.norm());
  CHECK_THROWS_AS(R.solve(CVec(CVec::Ones(3))), DimensionError);
}

TEST_CASE("first resolvent identity") {
  const auto H = small_model();
  const SpMat T = H.total();
  const CVec v = random_vec(H.size(), 2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0.1, 3 * M_PI / 4 - 0.1), mod(0.01, 1.0);
  for (int t = 0; t < 10; ++t) {
    const Complex z1 = std::polar(mod(rng), ang(rng)), z2 = std::polar(mod(rng), ang(rng));
    const CVec lhs = solve(T, z1, v) - solve(T, z2, v);
    const CVec rhs = (z1 - z2) * solve(T, z1, solve(T, z2, v));
    CHECK((lhs - rhs).norm() <= 1e-8 * lhs.norm());
  }
}

TEST_CASE("weighted norms against dense oracles") {
  const auto H = small_model(128, 16.0);
  const Complex z(0.2, 0.15);
  const auto R = std::make_shared<const ShiftedSolver>(H.H.mat, z);
  const RVec x = H.H.nodes;
  const RVec w = x.unaryExpr([](double t) { return std::pow(japanese(t), -0.8); });
  const CMat Rd = (CMat(H.H.mat) - z * CMat::Identity(128, 128)).inverse();
  const CMat D = w.cast<Complex>().asDiagonal() * Rd * w.cast<Complex>().asDiagonal();
  const double exact = Eigen::JacobiSVD<CMat>(D).singularValues()(0);
  NormOptions no{NormMethod::lanczos, 128, 1e-12, 5};
  CHECK(weighted_opnorm(R, w, w, no).lower == doctest::Approx(exact).epsilon(1e-6));
  no.method = NormMethod::power;
  no.max_iter = 2000;
  const double pw = weighted_opnorm(R, w, w, no).lower;
  CHECK(pw <= exact * (1 + 1e-10));
  CHECK(pw == doctest::Approx(exact).epsilon(1e-4));
  CHECK(weighted_opnorm(R, RVec::Zero(128), w, no).lower == 0.0);

  // unweighted norm of a Hermitian resolvent is 1 / dist(z, spec H)
  Eigen::SelfAdjointEigenSolver<RMat> es(RMat(H.H.mat.real()), Eigen::EigenvaluesOnly);
  double dist = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < es.eigenvalues().size(); ++i) dist = std::min(dist, std::abs(z - es.eigenvalues()(i)));
  no = {NormMethod::lanczos, 128, 1e-12, 5};
  CHECK(weighted_opnorm(R, RVec::Ones(128), RVec::Ones(128), no).lower == doctest::Approx(1.0 / dist).epsilon(1e-6));
}

TEST_CASE("Besov estimate brackets the dense norm") {
  const auto H = small_model(128, 16.0);
  const RVec x = H.H.nodes;
  for (Complex z : {Complex(0.5, 0.5), Complex(-0.1, 0.3)}) {
    const auto R = std::make_shared<const ShiftedSolver>(H.H.mat, z);
    const RVec fh = weight_f({std::abs(z), 1.0, 1.0}, x).cwiseSqrt();
    const CMat T = fh.cast<Complex>().asDiagonal() * R->solve(CMat(CMat::Identity(128, 128))) * fh.cast<Complex>().asDiagonal();
    // exact B(|x|) -> B(|x|)* norm: max over dyadic shell pairs
    std::map<int, std::vector<Index>> sh;
    for (Index i = 0; i < 128; ++i) {
      const double a = std::abs(x[i]);
      sh[a < 1.0 ? 1 : static_cast<int>(std::floor(std::log2(a))) + 2].push_back(i);
    }
    double exact = 0.0;
    for (const auto& [j, cj] : sh)
      for (const auto& [k, ck] : sh) {
        CMat B(ck.size(), cj.size());
        for (std::size_t r = 0; r < ck.size(); ++r)
          for (std::size_t c = 0; c < cj.size(); ++c) B(r, c) = T(ck[r], cj[c]);
        exact = std::max(exact, Eigen::JacobiSVD<CMat>(B).singularValues()(0) / std::sqrt(std::pow(2.0, j + k - 2)));
      }
    const NormBounds nb = besov_bstar_estimate(R, fh, x, {});
    CHECK(nb.lower <= exact * (1 + 1e-8));
    CHECK(exact <= nb.upper * (1 + 1e-12));
    CHECK(nb.lower <= nb.upper);
  }
}

TEST_CASE("nearest eigenvalues") {
  const auto H = small_model(128, 16.0);
  Eigen::SelfAdjointEigenSolver<RMat> es(RMat(H.H.mat.real()), Eigen::EigenvaluesOnly);
  std::vector<double> all(es.eigenvalues().data(), es.eigenvalues().data() + 128);
  std::sort(all.begin(), all.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  const auto near = nearest_eigenvalues(H.H.mat, 0.0, 3);
  REQUIRE(near.size() == 3);
  for (int k = 0; k < 3; ++k) CHECK(near[static_cast<std::size_t>(k)] == doctest::Approx(all[static_cast<std::size_t>(k)]).epsilon(1e-8));
}

TEST_CASE("Hoelder estimate") {
  HamiltonianOptions ho;
  ho.layer = AbsorbingLayer{8.0, 8.0, 0.05, 5};
  const auto Hl = build_hamiltonian(standard_model(1.0, 1.0, 1), Grid1D::with_spacing(16.0, 0.25), ho);
  const auto make = make_factory(Hl.total());
  Sector s;
  auto pairs = sample_pairs(s, 6, 1e-2, 9);
  CHECK(pairs.size() == 6);
  for (const auto& [a, b] : pairs) {
    CHECK(s.contains(a));
    CHECK(s.contains(b));
  }
  pairs.push_back({pairs[0].first, pairs[0].first});
  const auto rep = hoelder_estimate(make, Hl.H.nodes, 0.8, 0.75, pairs);
  CHECK(rep.in_hypothesis);
  CHECK(rep.pairs.back().quotient == 0.0);
  CHECK(rep.gamma >= 0.0);
  CHECK(rep.gamma <= 1.0);
  CHECK(std::isfinite(rep.sup_quotient));
  CHECK_FALSE(hoelder_estimate(make, Hl.H.nodes, 0.6, 0.75, pairs).in_hypothesis);
  CHECK_THROWS_AS(hoelder_estimate(make, Hl.H.nodes, 0.8, 0.75, {pairs[0], pairs[1]}), ParameterError);
}

TEST_CASE("boundary value") {
  HamiltonianOptions ho;
  ho.layer = AbsorbingLayer{32.0, 32.0, 0.02, 5};
  const auto H = build_hamiltonian(standard_model(1.0, 1.0, 1), Grid1D::with_spacing(64.0, 0.25), ho);
  const RVec x = H.H.nodes;
  const CVec v = x.unaryExpr([](double t) { return std::exp(-t * t / 2); }).cast<Complex>();
  const RVec w = x.unaryExpr([](double t) { return std::pow(japanese(t), -0.8); });
  BoundaryValueOptions bo;
  bo.max_ratio = 1.0;
  const auto make = make_factory(H.total());
  const auto plus = boundary_value(make, v, w, bo, +1);
  CHECK(plus.tolerance <= bo.tol);
  CHECK(plus.steps >= bo.min_steps);
  const auto minus = boundary_value(make, v, w, bo, -1);
  CHECK((minus.u - plus.u.conjugate()).norm() <= 1e-12 * plus.u.norm());
  bo.direct = true;
  const auto direct = boundary_value(make, v, w, bo, -1);
  CHECK((direct.u - minus.u).norm() <= 1e-8 * minus.u.norm());

  // the extrapolated value solves H u = v away from the layer
  const CVec r = H.H.mat * plus.u - v;
  double res = 0.0;
  for (Index i : H.interior) res = std::max(res, std::abs(r[i]));
  CHECK(res <= 1e-6 * v.cwiseAbs().maxCoeff());

  const auto zero = boundary_value(make, CVec(CVec::Zero(v.size())), w, bo, +1);
  CHECK(zero.u.norm() == 0.0);
  CHECK(zero.steps == 0);

  BoundaryValueOptions few = bo;
  few.max_steps = 9;
  few.tol = 1e-300;
  CHECK_THROWS_AS(boundary_value(make, v, w, few, +1), ConvergenceError);
  CHECK_THROWS_AS(boundary_value(make, v, w, bo, 0), ParameterError);
}

TEST_CASE("box gate and parallel loop") {
  CHECK(box_stable(1.0, 1.04));
  CHECK_FALSE(box_stable(1.0, 1.06));
  CHECK(box_stable(0.0, 0.0));
  std::vector<int> out(37, 0);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
  CHECK_THROWS_AS(parallel_for(5, 3, [](std::size_t i) {
                    if (i == 3) throw DataError("x");
                  }),
                  DataError);
}
