// SPDX-License-Identifier: Apache-2.0
#include "lapzero/report.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>

#include "lapzero/anchors_data.hpp"

namespace lapzero {

namespace {

const Json& anchor_table() {
  static const Json table = Json::parse(detail::kAnchorTable);
  return table;
}

Json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string anchor_of(const std::string& check_id) {
  const Json& t = anchor_table();
  const auto it = t.find(check_id);
  if (it == t.end() || !it->is_string()) throw Error("check '" + check_id + "' has no anchor");
  return it->get<std::string>();
}

std::vector<std::string> anchor_ids() {
  std::vector<std::string> out;
  for (const auto& [k, v] : anchor_table().items()) out.push_back(k);
  return out;
}

Check& Report::add(const std::string& id, double measured, Relation rel, double threshold, std::string note) {
  Check c;
  c.id = id;
  c.anchor = anchor_of(id);
  c.measured = measured;
  c.threshold = threshold;
  c.relation = rel;
  c.pass = !std::isnan(measured) && (rel == Relation::at_most ? measured <= threshold : measured >= threshold);
  c.note = std::move(note);
  checks.push_back(std::move(c));
  return checks.back();
}

bool Report::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* Report::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

Json Report::to_json() const {
  Json j;
  j["experiment"] = experiment;
  j["status"] = pass() ? "pass" : "fail";
  j["degenerate"] = degenerate;
  j["seed"] = seed;
  if (runtime >= 0.0) j["runtime_s"] = runtime;
  Json cs = Json::array();
  for (const auto& c : checks) {
    Json e;
    e["id"] = c.id;
    e["anchor"] = c.anchor;
    e["measured"] = finite_or_null(c.measured);
    e["relation"] = c.relation == Relation::at_most ? "<=" : ">=";
    e["threshold"] = finite_or_null(c.threshold);
    e["pass"] = c.pass;
    if (!c.note.empty()) e["note"] = c.note;
    cs.push_back(std::move(e));
  }
  j["checks"] = std::move(cs);
  j["data"] = data;
  Json cfg = Json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = std::move(cfg);
  return j;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "re_z,im_z,abs_z,arg_z,quantity,lower,upper,residual,box_stable\n";
  for (const auto& r : rows)
    out << format_double(r.z.real()) << ',' << format_double(r.z.imag()) << ',' << format_double(std::abs(r.z)) << ','
        << format_double(std::arg(r.z)) << ',' << r.quantity << ',' << format_double(r.lower) << ','
        << format_double(r.upper) << ',' << format_double(r.residual) << ',' << (r.box_stable ? 1 : 0) << '\n';
}

void write_vector_dump(const std::string& base_path, const CVec& u, const Json& header) {
  std::ofstream bin(base_path + ".bin", std::ios::binary);
  if (!bin) throw IoError("cannot write '" + base_path + ".bin'");
  for (Index i = 0; i < u.size(); ++i) {
    for (double v : {u[i].real(), u[i].imag()}) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      bin.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  Json h = header;
  h["length"] = u.size();
  h["dtype"] = "float64";
  h["endianness"] = "little";
  h["layout"] = "re,im pairs";
  h["data"] = base_path.substr(base_path.find_last_of('/') + 1) + ".bin";
  std::ofstream js(base_path + ".json");
  if (!js) throw IoError("cannot write '" + base_path + ".json'");
  js << h.dump(2) << "\n";
}

CVec read_vector_dump(const std::string& bin_path) {
  std::ifstream in(bin_path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open '" + bin_path + "'");
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes % 16 != 0) throw DataError("vector dump length is not a multiple of 16 bytes");
  in.seekg(0);
  CVec u(static_cast<Index>(bytes / 16));
  for (Index i = 0; i < u.size(); ++i) {
    double v[2];
    for (double& x : v) {
      std::uint64_t bits;
      in.read(reinterpret_cast<char*>(&bits), sizeof bits);
      if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
      std::memcpy(&x, &bits, sizeof bits);
    }
    u[i] = Complex(v[0], v[1]);
  }
  return u;
}

}  // namespace lapzero
