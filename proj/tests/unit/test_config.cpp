// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "lapzero/config.hpp"

using namespace lapzero;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string config_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("defaults and overrides") {
  const auto c = parse("[grid]\nL = 50\nN = 512\n[sector]\ntheta = 3pi/4\nmoduli = 0.1, 0.01\n[run]\nseed = 9\n");
  CHECK(c.grid.L == 50.0);
  CHECK(c.grid.N == 512);
  CHECK(c.grid.h() == doctest::Approx(100.0 / 512));
  CHECK(c.sector.theta == doctest::Approx(3 * M_PI / 4));
  CHECK(c.sector.moduli == std::vector<double>{0.1, 0.01});
  CHECK(c.seed == 9);
  CHECK(c.model.family == "standard");
  CHECK(c.ray_arg() == doctest::Approx(3 * M_PI / 8));
  CHECK(parse("").grid.N == 4096);
}

TEST_CASE("multiples of pi") {
  CHECK(parse("[sector]\ntheta = pi/2\n").sector.theta == doctest::Approx(M_PI / 2));
  CHECK(parse("[sector]\ntheta = 0.5*pi\n").sector.theta == doctest::Approx(M_PI / 2));
  CHECK(parse("[sector]\ntheta = 2.5\n").sector.theta == doctest::Approx(2.5));
  CHECK(parse("[sector]\ntheta = 3pi/4\n[radiation]\narg = pi/8\n").ray_arg() == doctest::Approx(M_PI / 8));
}

TEST_CASE("unknown keys list the valid ones") {
  const std::string msg = config_error("[grid]\nNN = 3\n");
  CHECK(msg.find("grid.NN") != std::string::npos);
  CHECK(msg.find("grid.cap_width") != std::string::npos);
  CHECK(msg.find("sector.moduli") != std::string::npos);
  CHECK(config_error("[nowhere]\nx = 1\n").find("nowhere.x") != std::string::npos);
}

TEST_CASE("malformed input") {
  CHECK(config_error("[grid\nL = 3\n").find("malformed") != std::string::npos);
  CHECK(config_error("[grid]\nL = abc\n").find("grid.L") != std::string::npos);
  CHECK(config_error("[grid]\nN = 12.5\n").find("grid.N") != std::string::npos);
  CHECK_FALSE(config_error("[grid]\norder = 3\n").empty());
  CHECK_FALSE(config_error("[model]\nmu = 2\n").empty());
  CHECK_FALSE(config_error("[model]\nfamily = yukawa\n").empty());
  CHECK_THROWS_AS(load_config("no/such/file.cfg"), IoError);
}

TEST_CASE("an empty sector grid is a config error") {
  CHECK(config_error("[sector]\nmoduli =\n").find("sector.moduli") != std::string::npos);
  CHECK_FALSE(config_error("[sector]\nmoduli = 0.1, 2\n").empty());
  CHECK_FALSE(config_error("[sector]\nargs = 3\n").empty());
}

TEST_CASE("resolved values round-trip") {
  const auto c = parse("[grid]\ncap_eta = 0.1\n[sector]\ntheta = 3pi/4\nmoduli = 0.1, 0.003\n[besov]\nbase = 3\n");
  const auto kv = c.resolved();
  CHECK(kv.size() == config_schema().size());
  CHECK(kv.at("grid.cap_eta") == "0.1");
  const auto back = config_from_map(kv);
  CHECK(back.resolved() == kv);
  CHECK(back.sector.theta == c.sector.theta);
  CHECK(back.sector.moduli == c.sector.moduli);
  CHECK(back.grid.cap_eta == c.grid.cap_eta);
  for (const auto& e : config_schema()) {
    CHECK_FALSE(e.doc.empty());
    CHECK(e.key.find('.') != std::string::npos);
  }
  CHECK(schema_text().find("radiation.rho") != std::string::npos);
}

TEST_CASE("model construction") {
  CHECK(parse("[model]\nfamily = free\n").build_model().V(2.0) == 0.0);
  CHECK(parse("[model]\nfamily = coulomb\ndim = 3\n").build_model().has_V2());
  CHECK(parse("[model]\ngamma = 2\n").build_model().eps1 == doctest::Approx(2.0));
}
