// SPDX-License-Identifier: Apache-2.0
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "lapzero/experiments.hpp"

namespace fs = std::filesystem;
using namespace lapzero;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out;
  bool timing = false;
  bool quiet = false;
};

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.threads) cfg.solver.threads = *c.threads;
  if (!c.out.empty()) cfg.output.dir = c.out;
  return cfg;
}

void print_checks(const Report& rep, std::ostream& os) {
  for (const auto& c : rep.checks)
    os << (c.pass ? "PASS " : "FAIL ") << c.id << " [" << c.anchor << "] " << format_double(c.measured)
       << (c.relation == Relation::at_most ? " <= " : " >= ") << format_double(c.threshold)
       << (c.note.empty() ? "" : "  (" + c.note + ")") << '\n';
  os << rep.experiment << ": " << (rep.pass() ? "pass" : "fail") << '\n';
}

int run(const std::string& id, const Common& c) {
  const ExperimentConfig cfg = load(c);
  ExperimentOutput out = run_experiment(id, cfg);
  if (!c.timing) out.report.runtime = -1.0;
  const fs::path dir(cfg.output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  const std::string base = (dir / (cfg.output.prefix + id)).string();
  {
    std::ofstream js(base + ".json");
    if (!js) throw IoError("cannot write '" + base + ".json'");
    js << out.report.to_json().dump(2) << '\n';
  }
  if (!out.sweep.empty()) {
    std::ofstream csv(base + ".csv");
    if (!csv) throw IoError("cannot write '" + base + ".csv'");
    write_sweep_csv(csv, out.sweep);
  }
  for (const auto& v : out.vectors) write_vector_dump(base + "_" + v.name, v.data, v.header);
  if (!c.quiet) print_checks(out.report, std::cout);
  return out.report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limiting absorption at zero energy: numerical checks"};
  Common common;
  bool schema = false;
  app.add_flag("--schema", schema, "print the configuration schema and exit");

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", common.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "override run.seed");
    sub->add_option("--threads", common.threads, "worker threads for z sweeps")->check(CLI::PositiveNumber);
    sub->add_option("-o,--out", common.out, "output directory (overrides output.dir)");
    sub->add_flag("--timing", common.timing, "record wall time in the report");
    sub->add_flag("-q,--quiet", common.quiet, "do not print the check table");
  };

  std::string chosen;
  for (const auto& id : experiment_ids()) {
    auto* sub = app.add_subcommand(id);
    add_common(sub);
    sub->callback([&chosen, id] { chosen = id; });
  }
  std::string which = "H";
  auto* exp = app.add_subcommand("export-operator", "write an operator as (row, col, re, im) triplets");
  add_common(exp);
  exp->add_option("--operator", which, "H, A, commutator or layer")
      ->check(CLI::IsMember({"H", "A", "commutator", "layer"}));
  exp->callback([&chosen] { chosen = "export-operator"; });

  app.require_subcommand(0, 1);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (schema) {
    std::cout << schema_text();
    return 0;
  }
  if (chosen.empty()) {
    std::cerr << app.help();
    return 2;
  }

  try {
    if (chosen == "export-operator") {
      const ExperimentConfig cfg = load(common);
      if (common.out.empty()) {
        export_operator(cfg, which, std::cout);
      } else {
        std::ofstream os(common.out);
        if (!os) throw IoError("cannot write '" + common.out + "'");
        export_operator(cfg, which, os);
      }
      return 0;
    }
    return run(chosen, common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 2;
}
