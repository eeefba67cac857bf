// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lapzero/core.hpp"

namespace lapzero {

using Json = nlohmann::ordered_json;

enum class Relation { at_most, at_least };

struct Check {
  std::string id;
  std::string anchor;
  double measured = 0.0;
  double threshold = 0.0;
  Relation relation = Relation::at_most;
  bool pass = false;
  std::string note;
};

/// Anchor text of a check id; throws if the id has none.
std::string anchor_of(const std::string& check_id);
std::vector<std::string> anchor_ids();

struct Report {
  std::string experiment;
  std::vector<Check> checks;
  Json data = Json::object();  // measured tables and witnesses
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  double runtime = -1.0;  // seconds; < 0 = not recorded
  bool degenerate = false;

  /// Adds a gated check; the anchor comes from the anchor table.
  Check& add(const std::string& id, double measured, Relation rel, double threshold, std::string note = {});
  bool pass() const;
  const Check* find(const std::string& id) const;
  Json to_json() const;
};

struct SweepRow {
  Complex z;
  std::string quantity;
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  double residual = 0.0;
  bool box_stable = true;
};

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Raw little-endian float64 (re, im) pairs plus a JSON sidecar header.
void write_vector_dump(const std::string& base_path, const CVec& u, const Json& header);
CVec read_vector_dump(const std::string& bin_path);

std::string format_double(double v);

}  // namespace lapzero
