// SPDX-License-Identifier: Apache-2.0
//
// Runs every experiment on the standard configuration and grades the
// numbered acceptance criteria against the frozen expectations file.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include <CLI11.hpp>

#include "lapzero/experiments.hpp"

namespace fs = std::filesystem;
using namespace lapzero;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    pass = false;
    notes.push_back(why);
  }
};

bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

Verdict grade(const Json& crit, const std::map<std::string, ExperimentOutput>& runs) {
  Verdict v;
  for (const auto& [id, want] : crit.at("checks").items()) {
    const std::string exp = want.at("experiment");
    const Report& rep = runs.at(exp).report;
    int seen = 0;
    for (const auto& c : rep.checks) {
      if (c.id != id) continue;
      ++seen;
      if (!c.pass)
        v.fail(id + " = " + format_double(c.measured) + (c.relation == Relation::at_most ? " > " : " < ") +
               format_double(c.threshold));
      if (want.contains("threshold")) {
        const std::string rel = want.at("relation");
        if (!same(c.threshold, want.at("threshold").get<double>()) ||
            rel != (c.relation == Relation::at_most ? "<=" : ">="))
          v.fail(id + " threshold " + format_double(c.threshold) + " differs from the frozen " +
                 format_double(want.at("threshold").get<double>()));
      }
    }
    if (seen == 0) v.fail(id + " missing from " + exp);
    if (want.contains("calibration")) {
      const Check* c = rep.find(id);
      const double ref = want.at("calibration"), tol = want.value("drift", 0.05);
      if (c && std::abs(c->measured - ref) > tol * std::abs(ref))
        v.notes.push_back(id + " drifted from the calibration value " + format_double(ref) + " to " +
                          format_double(c->measured));
    }
  }
  if (crit.contains("max_runtime_s"))
    for (const auto& [exp, limit] : crit.at("max_runtime_s").items()) {
      const double t = runs.at(exp).report.runtime;
      if (t > limit.get<double>()) v.fail(exp + " took " + format_double(t) + " s");
    }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria on the standard configuration"};
  std::string expected = LAPZERO_EXPECTED, config = LAPZERO_CONFIG, out = "acceptance-out";
  int threads = 1;
  app.add_option("--expected", expected, "frozen expectations")->check(CLI::ExistingFile);
  app.add_option("-c,--config", config, "experiment configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out, "report directory");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    std::ifstream ein(expected);
    const Json exp = Json::parse(ein);
    ExperimentConfig cfg = load_config(config);
    cfg.solver.threads = threads;
    cfg.output.dir = out;
    fs::create_directories(out);

    std::set<std::string> needed;
    for (const auto& crit : exp.at("criteria"))
      for (const auto& [id, want] : crit.at("checks").items()) needed.insert(want.at("experiment").get<std::string>());

    std::map<std::string, ExperimentOutput> runs;
    for (const auto& id : experiment_ids()) {
      if (!needed.count(id)) continue;
      runs[id] = run_experiment(id, cfg);
      const Report& rep = runs[id].report;
      std::ofstream js(fs::path(out) / (id + ".json"));
      js << rep.to_json().dump(2) << '\n';
      if (!runs[id].sweep.empty()) {
        std::ofstream csv(fs::path(out) / (id + ".csv"));
        write_sweep_csv(csv, runs[id].sweep);
      }
      std::cout << "  ran " << id << " in " << format_double(rep.runtime) << " s: " << (rep.pass() ? "pass" : "fail")
                << std::endl;
    }

    bool all = true;
    for (const auto& crit : exp.at("criteria")) {
      const Verdict v = grade(crit, runs);
      all = all && v.pass;
      std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << crit.at("id").get<int>() << ": "
                << crit.at("title").get<std::string>() << '\n';
      for (const auto& n : v.notes) std::cout << "       " << n << '\n';
    }
    return all ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << '\n';
    return 2;
  }
}
