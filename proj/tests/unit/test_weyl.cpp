// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "lapzero/weyl.hpp"

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

TEST_CASE("constant symbol quantizes to the identity") {
  const Grid1D g(10.0, 64);
  const auto W = weyl_quantize(symbol_constant(1.0), g);
  CHECK((W.mat - CMat::Identity(64, 64)).cwiseAbs().maxCoeff() <= 1e-13);
  CHECK_THROWS_AS(weyl_quantize(symbol_constant(1.0), Grid1D(10.0, 60, false)), ParameterError);
}

TEST_CASE("momentum symbol acts diagonally on plane waves") {
  const Grid1D g(10.0, 64);
  const auto P = weyl_quantize(symbol_xi(), g);
  for (int k : {-32, -5, 0, 1, 17, 31}) {
    const double xi = M_PI / g.L * k;
    CVec e(g.N);
    for (Index i = 0; i < g.N; ++i) e[i] = std::exp(I * xi * g.x[i]);
    CHECK((P.mat * e - xi * e).norm() <= 1e-11 * e.norm() * std::max(1.0, std::abs(xi)));
  }
}

TEST_CASE("real symbols give Hermitian matrices and quantization is linear") {
  const Grid1D g(12.0, 128);
  const auto a0 = symbol_a0(1.0, 1.0), b0 = symbol_b0(1.0, 1.0);
  const auto A = weyl_quantize(a0, g), B = weyl_quantize(b0, g);
  CHECK(A.hermitian_residual() <= 1e-10);
  CHECK(B.hermitian_residual() <= 1e-10);
  const Complex alpha(0.3, -1.2);
  const auto C = weyl_quantize(symbol_combine(a0, alpha, b0), g);
  CHECK((C.mat - A.mat - alpha * B.mat).cwiseAbs().maxCoeff() <= 1e-12 * A.mat.cwiseAbs().maxCoeff());
}

TEST_CASE("b0 squared is bounded by a0") {
  const auto a0 = symbol_a0(1.0, 1.0), b0 = symbol_b0(1.0, 1.0);
  for (double x = -50.0; x <= 50.0; x += 0.7)
    for (double xi = -3.0; xi <= 3.0; xi += 0.11) CHECK(std::norm(b0(x, xi)) <= a0(x, xi).real() * (1 + 1e-14));
}

TEST_CASE("matrix-free product matches the dense reference") {
  const Grid1D g(16.0, 256);
  const FilterSpec spec = default_filter(standard_model(1.0, 1.0, 1));
  const auto sym = filter_symbol(spec, FilterKind::outgoing, 1.0, 1.0);
  const CVec u = random_vec(g.N, 3);
  const CVec dense = weyl_quantize(sym, g).mat * u;
  CHECK((weyl_apply(sym, g, u) - dense).norm() <= 1e-11 * dense.norm());
  CHECK_THROWS_AS(weyl_apply(sym, g, CVec(CVec::Ones(10))), DimensionError);
}

TEST_CASE("cutoff partition of unity") {
  const Grid1D g(16.0, 128);
  FilterSpec spec = default_filter(standard_model(1.0, 1.0, 1));
  for (double t = -3.0; t < 10.0; t += 0.1) CHECK(spec.chi_minus(t) + spec.chi_plus(t) == doctest::Approx(1.0));
  const auto lo = weyl_quantize(filter_symbol(spec, FilterKind::low_energy, 1.0, 1.0), g);
  const auto hi = weyl_quantize(filter_symbol(spec, FilterKind::high_energy, 1.0, 1.0), g);
  CHECK((lo.mat + hi.mat - CMat::Identity(g.N, g.N)).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(spec.chi_minus(spec.plateau) == 1.0);
  CHECK(spec.chi_minus(spec.plateau + spec.ramp) == 0.0);
  CHECK(spec.chi_minus(-spec.ramp) == 0.0);
  for (double b = -5.0; b < 2.0; b += 0.05) {
    CHECK(spec.chi_tilde(b) >= 0.0);
    CHECK(spec.chi_tilde(b) <= 1.0);
    if (b >= spec.sigma) CHECK(spec.chi_tilde(b) == 0.0);
  }
  spec.sigma = 1.5;
  CHECK_THROWS_AS(filter_symbol(spec, FilterKind::outgoing, 1.0, 1.0), ParameterError);
  CHECK_NOTHROW(filter_symbol(spec, FilterKind::mirrored, 1.0, 1.0));
}

TEST_CASE("radiation filter defects") {
  const Grid1D g(64.0, 512);
  const auto model = standard_model(1.0, 1.0, 1);
  std::vector<double> ladder;
  for (double R = 4.0; R <= 64.0; R *= std::sqrt(2.0)) ladder.push_back(R);
  const CVec bump = g.x.unaryExpr([](double x) { return std::exp(-x * x); }).cast<Complex>();

  FilterSpec zero = default_filter(model);
  zero.tilde_zero = true;
  const auto z = radiation_filter(bump, zero, FilterKind::outgoing, model, g, ladder);
  CHECK(z.w.norm() == 0.0);
  CHECK(z.defect.ball_tail() == 0.0);

  const auto f = radiation_filter(bump, default_filter(model), FilterKind::high_energy, model, g, ladder);
  CHECK(f.defect.ball.back() < f.defect.ball[ladder.size() / 2]);
  CHECK(f.defect.ball_slope() < -0.2);
  CHECK(to_string(FilterKind::mirrored) == "mirrored");
}
