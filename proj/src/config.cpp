// SPDX-License-Identifier: Apache-2.0
#include "lapzero/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace lapzero {

Grid1D GridSpec::total_grid(double scale) const {
  const double half = scale * (L + cap_width);
  return Grid1D::with_spacing(half, h(), false);
}

AbsorbingLayer GridSpec::layer(double scale) const {
  AbsorbingLayer a;
  a.start = scale * L;
  a.width = scale * cap_width;
  a.eta = cap_eta;
  a.degree = cap_degree;
  return a;
}

PotentialModel ExperimentConfig::build_model() const {
  PotentialModel m;
  if (model.family == "standard")
    m = standard_model(model.gamma, model.mu, model.dim);
  else if (model.family == "coulomb")
    m = coulomb_model(model.gamma, model.dim);
  else if (model.family == "free")
    m = free_model(model.mu, model.dim);
  else
    throw ConfigError("model.family must be one of standard, coulomb, free");
  if (!model.v2_file.empty()) {
    std::vector<double> r, v;
    load_radial_table(model.v2_file, r, v);
    const double edge = r.empty() ? 1.0 : r.back();  // V2 vanishes beyond the table
    m = with_tabulated_V2(std::move(m), std::move(r), std::move(v), TailParams{0.25, 0.0, edge});
    m.family = "custom";
  }
  return m;
}

namespace {

// shortest text that reads back to the same double
std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// plain reals plus multiples of pi: "2.35", "3pi/4", "3*pi/4", "pi"
double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  static const std::regex pi_form(R"(^([-+]?[0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(/\s*([0-9]*\.?[0-9]+))?$)");
  std::smatch m;
  if (std::regex_match(t, m, pi_form)) {
    double c = 1.0;
    const std::string coef = m[1].str();
    if (coef == "-") c = -1.0;
    else if (!coef.empty() && coef != "+") c = std::stod(coef);
    const double d = m[3].matched ? std::stod(m[3].str()) : 1.0;
    return c * M_PI / d;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size() || !std::isfinite(v))
    throw ConfigError(key + ": expected a real number, got '" + text + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) throw ConfigError(key + ": expected an integer, got '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_real(key, item));
  }
  return out;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + fmt(v[k]);
  return s;
}

struct Binding {
  SchemaEntry entry;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename Access>
Binding real(std::string key, std::string doc, Access acc) {
  Binding b;
  b.entry = {key, "real", "", std::move(doc)};
  b.set = [acc, key](ExperimentConfig& c, const std::string& v) { acc(c) = parse_real(key, v); };
  b.get = [acc](const ExperimentConfig& c) { return fmt(acc(const_cast<ExperimentConfig&>(c))); };
  return b;
}

template <typename Access>
Binding integer(std::string key, std::string doc, Access acc, long long lo) {
  Binding b;
  b.entry = {key, "integer >= " + std::to_string(lo), "", std::move(doc)};
  b.set = [acc, key, lo](ExperimentConfig& c, const std::string& v) {
    const long long n = parse_int(key, v);
    if (n < lo) throw ConfigError(key + ": must be >= " + std::to_string(lo));
    using T = std::remove_reference_t<decltype(acc(c))>;
    acc(c) = static_cast<T>(n);
  };
  b.get = [acc](const ExperimentConfig& c) {
    return std::to_string(static_cast<long long>(acc(const_cast<ExperimentConfig&>(c))));
  };
  return b;
}

template <typename Access>
Binding list(std::string key, std::string doc, Access acc) {
  Binding b;
  b.entry = {key, "comma-separated reals", "", std::move(doc)};
  b.set = [acc, key](ExperimentConfig& c, const std::string& v) { acc(c) = parse_list(key, v); };
  b.get = [acc](const ExperimentConfig& c) { return fmt_list(acc(const_cast<ExperimentConfig&>(c))); };
  return b;
}

template <typename Access>
Binding text(std::string key, std::string doc, Access acc) {
  Binding b;
  b.entry = {key, "string", "", std::move(doc)};
  b.set = [acc](ExperimentConfig& c, const std::string& v) { acc(c) = trim(v); };
  b.get = [acc](const ExperimentConfig& c) { return acc(const_cast<ExperimentConfig&>(c)); };
  return b;
}

#define LZ_AT(expr) [](ExperimentConfig& c) -> auto& { return c.expr; }

const std::vector<Binding>& bindings() {
  static const std::vector<Binding> table = [] {
    std::vector<Binding> t{
        text("model.family", "standard | coulomb | free", LZ_AT(model.family)),
        real("model.gamma", "coupling of V1 = -gamma <x>^{-mu}", LZ_AT(model.gamma)),
        real("model.mu", "decay exponent in (0,2)", LZ_AT(model.mu)),
        integer("model.dim", "space dimension", LZ_AT(model.dim), 1),
        integer("model.ell", "angular momentum for radial grids", LZ_AT(model.ell), 0),
        text("model.v2_file", "optional two-column radial table for V2", LZ_AT(model.v2_file)),

        real("grid.L", "physical half-width", LZ_AT(grid.L)),
        integer("grid.N", "nodes across the physical box", LZ_AT(grid.N), 8),
        real("grid.cap_width", "absorbing layer width outside the box", LZ_AT(grid.cap_width)),
        real("grid.cap_eta", "absorbing layer strength", LZ_AT(grid.cap_eta)),
        integer("grid.cap_degree", "smoothstep degree of the layer profile (3, 5, 7)", LZ_AT(grid.cap_degree), 3),
        integer("grid.order", "Laplacian stencil order (2 or 4)", LZ_AT(grid.order), 2),

        real("sector.theta", "sector opening angle", LZ_AT(sector.theta)),
        real("sector.lambda0", "sector radius", LZ_AT(sector.lambda0)),
        list("sector.args", "ray arguments; empty = theta/2", LZ_AT(sector.args)),
        list("sector.moduli", "|z| ladder", LZ_AT(sector.moduli)),

        real("solver.tol", "relative residual of each solve", LZ_AT(solver.tol)),
        integer("solver.refine", "iterative refinement steps", LZ_AT(solver.refine), 0),
        integer("solver.threads", "worker threads for sector sweeps", LZ_AT(solver.threads), 1),
        integer("solver.norm_iter", "Lanczos steps of the norm estimator", LZ_AT(solver.norm_iter), 2),
        real("solver.norm_tol", "relative stopping change of the norm estimator", LZ_AT(solver.norm_tol)),
        integer("solver.probes", "random B-normalised probes for the lower bound", LZ_AT(solver.probes), 0),

        integer("besov.size", "grid size of the self-test spectra", LZ_AT(besov.size), 8),
        integer("besov.samples", "random samples per check", LZ_AT(besov.samples), 1),
        real("besov.base", "second shell base", LZ_AT(besov.base)),
        list("besov.scaling", "scaling factors c", LZ_AT(besov.scaling)),
        list("besov.power", "power-map exponents s", LZ_AT(besov.power)),
        real("besov.inject_scaling", "replace the general scaling constant (0 = off)", LZ_AT(besov.inject_scaling)),
        integer("besov.dense_size", "size of the dense block-bound oracle", LZ_AT(besov.dense_size), 8),

        real("radiation.arg", "ray argument; negative = theta/2", LZ_AT(radiation.arg)),
        real("radiation.rho", "ray contraction", LZ_AT(radiation.rho)),
        integer("radiation.max_steps", "maximum ray steps", LZ_AT(radiation.max_steps), 2),
        integer("radiation.min_steps", "minimum ray steps", LZ_AT(radiation.min_steps), 2),
        integer("radiation.levels", "extrapolation columns", LZ_AT(radiation.levels), 1),
        real("radiation.tol", "relative change of the extrapolated value", LZ_AT(radiation.tol)),
        real("radiation.ladder_start", "first radius of the defect ladder", LZ_AT(radiation.ladder_start)),
        integer("radiation.ladder_steps", "quarter-octave steps of the defect ladder", LZ_AT(radiation.ladder_steps), 2),
        real("radiation.annulus", "inner ratio of the annulus defect", LZ_AT(radiation.annulus)),
        real("radiation.sigma", "upper cut of the b0 filter", LZ_AT(radiation.sigma)),
        real("radiation.source_width", "width of the Gaussian source", LZ_AT(radiation.source_width)),
        real("radiation.source_center", "centre of the Gaussian source", LZ_AT(radiation.source_center)),

        integer("hoelder.pairs", "sampled z pairs", LZ_AT(hoelder.pairs), 3),
        real("hoelder.zmin", "smallest |z| of the pairs", LZ_AT(hoelder.zmin)),
        real("hoelder.s_offset", "s - s0 of the weights", LZ_AT(hoelder.s_offset)),
        real("hoelder.L", "physical half-width of the coarse grid", LZ_AT(hoelder.L)),
        integer("hoelder.N", "nodes of the coarse physical box", LZ_AT(hoelder.N), 8),
        real("hoelder.cap_width", "absorbing layer width", LZ_AT(hoelder.cap_width)),
        integer("hoelder.refinements", "h-halvings", LZ_AT(hoelder.refinements), 1),

        integer("quadratic.N", "nodes of the Dirichlet box", LZ_AT(quadratic.N), 8),
        real("quadratic.L", "half-width of the Dirichlet box", LZ_AT(quadratic.L)),
        list("quadratic.moduli", "|z| values", LZ_AT(quadratic.moduli)),
        list("quadratic.eps", "regularisation parameters", LZ_AT(quadratic.eps)),
        real("quadratic.s_offset", "s - s0 in the weight probe", LZ_AT(quadratic.s_offset)),

        real("thresholds.box", "box-stability tolerance", LZ_AT(thresholds.box)),
        real("thresholds.unweighted_exponent", "max growth exponent of |R(z)|", LZ_AT(thresholds.unweighted_exponent)),
        real("thresholds.besov_exponent", "min growth exponent of the Besov bounds", LZ_AT(thresholds.besov_exponent)),
        real("thresholds.decreasing", "slope at or below which a ladder decreases", LZ_AT(thresholds.decreasing)),
        real("thresholds.flat", "slope at or above which a ladder does not decrease", LZ_AT(thresholds.flat)),
        real("thresholds.defect_ratio", "defect(L/2) / defect(32) bound", LZ_AT(thresholds.defect_ratio)),
        real("thresholds.conjugation", "relative conjugation mismatch", LZ_AT(thresholds.conjugation)),
        real("thresholds.ladder_ratio", "max boundary-value ladder ratio", LZ_AT(thresholds.ladder_ratio)),
        real("thresholds.hoelder_spread", "max/min sup quotient across refinements", LZ_AT(thresholds.hoelder_spread)),
        real("thresholds.null_residual", "interior residual of w relative to |w|", LZ_AT(thresholds.null_residual)),
        real("thresholds.null_norm", "min |w| / |u+|", LZ_AT(thresholds.null_norm)),
        real("thresholds.quadratic_spread", "max/min quadratic constant across |z|", LZ_AT(thresholds.quadratic_spread)),
        real("thresholds.commutator_order", "min observed commutator order", LZ_AT(thresholds.commutator_order)),
        real("thresholds.free_kernel", "free-kernel relative error", LZ_AT(thresholds.free_kernel)),

        text("output.dir", "directory for reports", LZ_AT(output.dir)),
        text("output.prefix", "file name prefix", LZ_AT(output.prefix)),
        integer("run.seed", "random seed", LZ_AT(seed), 0),
    };
    const ExperimentConfig defaults;
    for (auto& b : t) b.entry.fallback = b.get(defaults);
    return t;
  }();
  return table;
}

#undef LZ_AT

const Binding* find_binding(const std::string& key) {
  for (const auto& b : bindings())
    if (b.entry.key == key) return &b;
  return nullptr;
}

void validate(const ExperimentConfig& c) {
  auto need = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(c.model.family == "standard" || c.model.family == "coulomb" || c.model.family == "free",
       "model.family must be one of standard, coulomb, free");
  need(c.model.mu > 0.0 && c.model.mu < 2.0, "model.mu must lie in (0,2)");
  need(c.model.gamma > 0.0 || c.model.family == "free", "model.gamma must be positive");
  need(c.grid.L > 0.0 && c.grid.cap_width >= 0.0 && c.grid.cap_eta >= 0.0, "grid: need L > 0, cap_width >= 0, cap_eta >= 0");
  need(c.grid.order == 2 || c.grid.order == 4, "grid.order must be 2 or 4");
  need(c.grid.cap_degree == 3 || c.grid.cap_degree == 5 || c.grid.cap_degree == 7, "grid.cap_degree must be 3, 5 or 7");
  need(c.sector.theta > 0.0 && c.sector.theta < M_PI, "sector.theta must lie in (0, pi)");
  need(c.sector.lambda0 > 0.0, "sector.lambda0 must be positive");
  need(!c.sector.moduli.empty(), "sector.moduli is empty: the sector grid has no points");
  for (double m : c.sector.moduli) need(m > 0.0 && m <= c.sector.lambda0, "sector.moduli must lie in (0, lambda0]");
  for (double a : c.sector.args) need(a > 0.0 && a < c.sector.theta, "sector.args must lie in (0, theta)");
  need(c.solver.tol > 0.0 && c.solver.norm_tol > 0.0, "solver tolerances must be positive");
  need(c.besov.base > 1.0, "besov.base must exceed 1");
  for (double s : c.besov.power) need(s > -1.0, "besov.power exponents must exceed -1");
  for (double s : c.besov.scaling) need(s != 0.0, "besov.scaling factors must be non-zero");
  need(c.radiation.rho > 0.0 && c.radiation.rho < 1.0, "radiation.rho must lie in (0,1)");
  need(c.radiation.min_steps > c.radiation.levels && c.radiation.max_steps >= c.radiation.min_steps,
       "radiation: need levels < min_steps <= max_steps");
  need(c.radiation.annulus > 0.0 && c.radiation.annulus < 1.0, "radiation.annulus must lie in (0,1)");
  need(c.radiation.ladder_start > 0.0 && c.radiation.source_width > 0.0, "radiation: ladder start and width must be positive");
  need(c.radiation.sigma <= 1.0, "radiation.sigma must not exceed 1");
  need(c.hoelder.zmin > 0.0 && c.hoelder.zmin < c.sector.lambda0, "hoelder.zmin must lie in (0, lambda0)");
  need(!c.quadratic.moduli.empty() && !c.quadratic.eps.empty(), "quadratic: moduli and eps must be non-empty");
  for (double e : c.quadratic.eps) need(e > 0.0, "quadratic.eps must be positive");
}

}  // namespace

const std::vector<SchemaEntry>& config_schema() {
  static const std::vector<SchemaEntry> s = [] {
    std::vector<SchemaEntry> out;
    for (const auto& b : bindings()) out.push_back(b.entry);
    return out;
  }();
  return s;
}

std::string schema_text() {
  std::ostringstream os;
  for (const auto& e : config_schema())
    os << "  " << e.key << " (" << e.type << ", default " << (e.fallback.empty() ? "\"\"" : e.fallback) << "): "
       << e.doc << "\n";
  return os.str();
}

std::map<std::string, std::string> ExperimentConfig::resolved() const {
  std::map<std::string, std::string> out;
  for (const auto& b : bindings()) out[b.entry.key] = b.get(*this);
  return out;
}

ExperimentConfig config_from_map(const std::map<std::string, std::string>& kv) {
  ExperimentConfig c;
  for (const auto& [k, v] : kv) {
    const Binding* b = find_binding(k);
    if (!b) throw ConfigError("unknown key '" + k + "'; valid keys:\n" + schema_text());
    b->set(c, v);
  }
  validate(c);
  return c;
}

ExperimentConfig parse_config(std::istream& in) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("malformed config (line " + std::to_string(e.line()) + "): " + e.message() +
                      "\nexpected [section] headers and key = value lines; valid keys:\n" + schema_text());
  }
  std::map<std::string, std::string> kv;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' outside any section; valid keys:\n" + schema_text());
    for (const auto& [key, value] : body) kv[section + "." + key] = value.data();
  }
  return config_from_map(kv);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace lapzero
