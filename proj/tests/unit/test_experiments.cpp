// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "lapzero/experiments.hpp"

using namespace lapzero;

TEST_CASE("free kernel quadrature oracle converges with the grid") {
  const double e1 = free_kernel_error(512, 30.0, Complex(0.5, 0.5), 2);
  const double e2 = free_kernel_error(1024, 30.0, Complex(0.5, 0.5), 2);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(free_kernel_error(1024, 30.0, Complex(0.5, 0.5), 4) < e2);
}

TEST_CASE("radius ladder") {
  const auto r = radius_ladder(8.0, 4, {8.0, 12.0, 100.0});
  CHECK(r == std::vector<double>{8.0, 8.0 * std::pow(2.0, 0.25), 8.0 * std::sqrt(2.0), 12.0,
                                 8.0 * std::pow(2.0, 0.75), 16.0, 100.0});
}

TEST_CASE("setup geometry") {
  ExperimentConfig cfg;
  cfg.grid.L = 20.0;
  cfg.grid.N = 160;
  cfg.grid.cap_width = 10.0;
  const auto s = make_setup(cfg);
  CHECK(s.grid.N == 240);
  CHECK(s.physical.size() == 160);
  CHECK(s.grid.h == doctest::Approx(cfg.grid.h()));
  const auto s2 = make_setup(cfg, 2.0);
  CHECK(s2.grid.N == 480);
  CHECK(s2.physical.size() == 160);
}

TEST_CASE("self-test is deterministic and fails on an injected constant") {
  ExperimentConfig cfg;
  cfg.seed = 3;
  const auto a = run_besov_selftest(cfg);
  const auto b = run_besov_selftest(cfg);
  CHECK(a.report.pass());
  CHECK(a.report.to_json().dump() == b.report.to_json().dump());
  for (const auto& c : a.report.checks) CHECK(c.anchor == anchor_of(c.id));

  cfg.besov.inject_scaling = 1e-3;
  const auto bad = run_besov_selftest(cfg);
  CHECK_FALSE(bad.report.pass());
  const Check* c = bad.report.find("scaling.general");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->pass);
  CHECK(bad.report.data.contains("witnesses"));
}

TEST_CASE("potential check on the configured model") {
  ExperimentConfig cfg;
  const auto out = run_check_potential(cfg);
  CHECK(out.report.pass());
  CHECK(out.report.find("condition.family") != nullptr);
  cfg.model.family = "coulomb";
  cfg.model.dim = 3;
  CHECK(run_check_potential(cfg).report.pass());
  CHECK_THROWS_AS(run_experiment("nope", cfg), Error);
}

TEST_CASE("operator export") {
  ExperimentConfig cfg;
  cfg.grid.L = 4.0;
  cfg.grid.N = 16;
  cfg.grid.cap_width = 2.0;
  std::ostringstream os;
  export_operator(cfg, "H", os);
  CHECK(os.str().rfind("#", 0) == 0);
  std::ostringstream layer;
  export_operator(cfg, "layer", layer);
  CHECK(layer.str().size() > 10);
  std::ostringstream bad;
  CHECK_THROWS(export_operator(cfg, "B", bad));
}
