// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "lapzero/potential.hpp"

using namespace lapzero;

namespace {

const HypothesisResult& item(const ConditionReport& r, const std::string& id) {
  for (const auto& h : r.items)
    if (h.id == id) return h;
  FAIL("missing hypothesis " << id);
  return r.items.front();
}

}  // namespace

TEST_CASE("weight f") {
  CHECK(weight_f({0.0, 1.0, 1.0}, 0.0) == doctest::Approx(1.0));
  CHECK(weight_f({3.0, 1.0, 1.0}, 0.0) == doctest::Approx(2.0));
  const PotentialModel m = standard_model(1.0, 1.0, 1);
  CHECK(m.K() == doctest::Approx(1.0));
  for (double x : {0.0, 0.5, 3.0, 40.0}) {
    CHECK(weight_f({0.0, m.K(), 1.0}, x) == doctest::Approx(std::pow(japanese(x), -0.5)));
    const double lam = 0.3, f = weight_f({lam, 2.0, 0.7}, x);
    CHECK(f * f - lam == doctest::Approx(2.0 * std::pow(japanese(x), -0.7)).epsilon(1e-14));
    CHECK(f >= std::sqrt(lam));
  }
  CHECK(weight_f({0.1, 1.0, 1.0}, 2.0) <= weight_f({0.1, 1.0, 1.0}, 1.0));
  CHECK_THROWS_AS(weight_f({-1.0, 1.0, 1.0}, 0.0), ParameterError);
  CHECK_THROWS_AS(weight_f({0.0, 0.0, 1.0}, 0.0), ParameterError);
}

TEST_CASE("weight derivative bounds are uniform in lambda") {
  // |d/dx f^s| <= C f^s <x>^{-1} for s = +-1 with C independent of lambda
  double worst = 0.0;
  for (double lam : {0.0, 1e-4, 1e-2, 1.0})
    for (double s : {1.0, -1.0})
      for (double x = -200.0; x <= 200.0; x += 0.37) {
        const double d = 1e-5;
        auto fs = [&](double t) { return std::pow(weight_f({lam, 1.0, 1.0}, t), s); };
        const double der = (fs(x + d) - fs(x - d)) / (2 * d);
        worst = std::max(worst, std::abs(der) * japanese(x) / fs(x));
      }
  // closed form: |f^s'| <= (|s| mu / 2) f^s <x>^{-1}
  CHECK(worst <= 0.5 + 1e-6);
}

TEST_CASE("virial function") {
  const PotentialModel m = standard_model(1.0, 1.0, 1);
  CHECK(virial_W(m, 0.0) == doctest::Approx(2.0));
  for (double r : {0.1, 1.0, 7.0, 300.0}) {
    const double j = japanese(r);
    const double closed = (2.0 - r * r / (j * j)) / j;
    CHECK(virial_W(m, r) == doctest::Approx(closed).epsilon(1e-13));
    CHECK(virial_W(m, r) >= m.eps1 * m.eps1_tilde * std::pow(j, -m.mu) * (1 - 1e-14));
    CHECK(virial_W(standard_model(3.0, 1.0, 1), r) == doctest::Approx(3.0 * virial_W(m, r)));
  }
}

TEST_CASE("standard family certificates") {
  const PotentialModel m = standard_model(1.0, 1.0, 1);
  CHECK(m.eps1 == doctest::Approx(1.0));
  CHECK(m.eps1_tilde == doctest::Approx(1.0));
  CHECK(m.s0() == doctest::Approx(0.75));
  CHECK(standard_model(2.0, 1.0, 1).eps1 == doctest::Approx(2.0));
  for (double g : {0.5, 1.0, 2.0})
    for (double mu : {0.5, 1.0, 1.5})
      for (int d : {1, 3}) {
        const auto pm = standard_model(g, mu, d);
        CHECK(pm.eps1 == doctest::Approx(g));
        CHECK(pm.eps1_tilde == doctest::Approx(2.0 - mu));
        CHECK(check_condition(pm).pass());
      }
  CHECK_THROWS_AS(standard_model(1.0, 2.0, 1), ParameterError);
  CHECK_THROWS_AS(standard_model(0.0, 1.0, 1), ParameterError);
}

TEST_CASE("repulsive V1 fails the sign condition at the origin") {
  PotentialModel m = standard_model(1.0, 1.0, 1);
  m.V1 = [](double r) { return 1.0 / japanese(r); };
  m.dV1 = [](double r) { return -r / std::pow(japanese(r), 3); };
  m.d2V1 = [](double r) { return (2 * r * r - 1) / std::pow(japanese(r), 5); };
  const auto rep = check_condition(m);
  CHECK_FALSE(rep.pass());
  const auto& s = item(rep, "sign");
  CHECK_FALSE(s.pass);
  CHECK(s.witness == doctest::Approx(0.0).epsilon(1e-2));
}

TEST_CASE("coulomb split") {
  const PotentialModel c = coulomb_model(1.0, 3);
  CHECK(c.has_V2());
  const auto rep = check_condition(c);
  CHECK(rep.pass());
  CHECK(item(rep, "tail_decay").pass);
  CHECK(item(rep, "local_integrability").pass);
  // V = -1/r everywhere
  for (double r : {0.05, 0.5, 0.99, 2.0, 50.0}) CHECK(c.V(r) == doctest::Approx(-1.0 / r).epsilon(1e-12));
  CHECK_THROWS_AS(coulomb_model(1.0, 1), ParameterError);
}

TEST_CASE("free model") {
  const PotentialModel f = free_model(1.0, 1);
  CHECK(f.V(3.0) == 0.0);
  CHECK(virial_W(f, 2.0) == 0.0);
}

TEST_CASE("tabulated V2") {
  const std::string path = "lapzero_test_v2.txt";
  {
    std::ofstream os(path);
    os << "# r v\n0.5 -0.2\n1.0 -0.1\n2.0 0.0\n";
  }
  std::vector<double> r, v;
  load_radial_table(path, r, v);
  CHECK(r.size() == 3);
  CHECK(v[1] == doctest::Approx(-0.1));
  const auto m = with_tabulated_V2(standard_model(1.0, 1.0, 3), r, v, {0.25, 1.0, 2.0});
  CHECK(m.has_V2());
  CHECK(m.V2(0.75) == doctest::Approx(-0.15));
  {
    std::ofstream os(path);
    os << "0.5 abc\n";
  }
  CHECK_THROWS_AS(load_radial_table(path, r, v), DataError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_radial_table("no/such/file", r, v), IoError);
}
