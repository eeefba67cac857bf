// SPDX-License-Identifier: Apache-2.0
#include "lapzero/potential.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

namespace lapzero {

PotentialModel standard_model(double gamma, double mu, int dim) {
  if (!(gamma > 0.0)) throw ParameterError("standard_model: gamma must be positive");
  if (!(mu > 0.0 && mu < 2.0)) throw ParameterError("standard_model: mu must lie in (0,2)");
  if (dim < 1) throw ParameterError("standard_model: dimension must be >= 1");
  PotentialModel m;
  m.family = "standard";
  m.gamma = gamma;
  m.mu = mu;
  m.dim = dim;
  m.eps1 = gamma;
  m.eps1_tilde = 2.0 - mu;
  m.C = {gamma, gamma * mu, gamma * mu * std::max(1.0, mu + 1.0)};
  m.V1 = [=](double r) { return -gamma * std::pow(japanese(r), -mu); };
  m.dV1 = [=](double r) { return gamma * mu * r * std::pow(japanese(r), -mu - 2.0); };
  m.d2V1 = [=](double r) {
    return gamma * mu * std::pow(japanese(r), -mu - 4.0) * (1.0 - (mu + 1.0) * r * r);
  };
  return m;
}

PotentialModel free_model(double mu, int dim) {
  if (!(mu > 0.0 && mu < 2.0)) throw ParameterError("free_model: mu must lie in (0,2)");
  if (dim < 1) throw ParameterError("free_model: dimension must be >= 1");
  PotentialModel m;
  m.family = "free";
  m.gamma = 0.0;
  m.mu = mu;
  m.dim = dim;
  m.eps1 = 0.0;
  m.eps1_tilde = 2.0 - mu;
  m.V1 = [](double) { return 0.0; };
  m.dV1 = [](double) { return 0.0; };
  m.d2V1 = [](double) { return 0.0; };
  return m;
}

PotentialModel coulomb_model(double gamma, int dim) {
  if (dim < 3) throw ParameterError("coulomb_model: dimension must be >= 3");
  PotentialModel m = standard_model(gamma, 1.0, dim);
  m.family = "coulomb";
  m.V2 = [=](double r) { return gamma * (1.0 / japanese(r) - 1.0 / r); };
  // |V2| = γ / (r<r>(<r>+r)) <= (γ/2) r^{-3}
  m.tail = {0.25, gamma / 2.0, 1.0};
  return m;
}

PotentialModel with_tabulated_V2(PotentialModel m, std::vector<double> r, std::vector<double> v, TailParams tail) {
  if (r.size() != v.size() || r.size() < 2) throw DataError("radial table needs at least two rows of equal length");
  for (std::size_t k = 1; k < r.size(); ++k)
    if (!(r[k] > r[k - 1])) throw DataError("radial table radii must increase");
  auto rr = std::make_shared<const std::vector<double>>(std::move(r));
  auto vv = std::make_shared<const std::vector<double>>(std::move(v));
  m.V2 = [rr, vv](double x) {
    const auto& R = *rr;
    const auto& V = *vv;
    if (x <= R.front()) return V.front();
    if (x > R.back()) return 0.0;
    const auto it = std::upper_bound(R.begin(), R.end(), x);
    const auto k = static_cast<std::size_t>(it - R.begin());
    const double t = (x - R[k - 1]) / (R[k] - R[k - 1]);
    return (1.0 - t) * V[k - 1] + t * V[k];
  };
  m.tail = tail;
  return m;
}

void load_radial_table(const std::string& path, std::vector<double>& r, std::vector<double>& v) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open radial table '" + path + "'");
  r.clear();
  v.clear();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a)) continue;
    if (!(ls >> b) || !std::isfinite(a) || !std::isfinite(b))
      throw DataError(path + ":" + std::to_string(lineno) + ": expected two numeric columns");
    r.push_back(a);
    v.push_back(b);
  }
}

double weight_f(const WeightParams& p, double x) {
  if (p.lambda < 0.0 || !(p.K > 0.0)) throw ParameterError("weight_f: need lambda >= 0 and K > 0");
  return std::sqrt(p.lambda + p.K * std::pow(japanese(x), -p.mu));
}

RVec weight_f(const WeightParams& p, const RVec& x) {
  if (p.lambda < 0.0 || !(p.K > 0.0)) throw ParameterError("weight_f: need lambda >= 0 and K > 0");
  return x.unaryExpr([&](double t) { return std::sqrt(p.lambda + p.K * std::pow(japanese(t), -p.mu)); });
}

double virial_W(const PotentialModel& m, double r) {
  if (!m.V1 || !m.dV1) throw ParameterError("virial_W: model has no V1 gradient");
  return -2.0 * m.V1(r) - r * m.dV1(r);
}

bool ConditionReport::pass() const {
  return std::all_of(items.begin(), items.end(), [](const HypothesisResult& h) { return h.pass; });
}

std::vector<double> sample_radii(double r_max, std::size_t count, double r_min) {
  std::vector<double> out{0.0};
  const double a = std::log(r_min), b = std::log(r_max);
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1)));
  return out;
}

namespace {

struct Tracker {
  HypothesisResult res;
  bool first = true;
  explicit Tracker(std::string id) { res.id = std::move(id); }
  void add(double slack, double r) {
    if (first || slack < res.worst) {
      res.worst = slack;
      res.witness = r;
      first = false;
    }
  }
  HypothesisResult done(double tol = 1e-12) {
    res.tolerance = tol;
    res.pass = !first && res.worst >= -tol;
    if (first) res.detail = "no sample points";
    return res;
  }
};

// ∫_rho^R |g(r)|^p r^{d-1} dr on a log grid (composite Simpson in t = ln r)
double radial_lp(const RadialFn& g, double p, int d, double rho, double R) {
  const int n = 4000;
  const double a = std::log(rho), b = std::log(R), h = (b - a) / n;
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double r = std::exp(a + k * h);
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    s += w * std::pow(std::abs(g(r)), p) * std::pow(r, d);  // r^{d-1} dr = r^d dt
  }
  return s * h / 3.0;
}

}  // namespace

ConditionReport check_condition(const PotentialModel& m, const std::vector<double>& radii) {
  ConditionReport rep;
  rep.sample_radii = radii;
  if (!m.V1 || !m.dV1 || !m.d2V1) {
    HypothesisResult h{"model", false, -1.0, 0.0, "V1 and its first two derivatives are required"};
    rep.items.push_back(h);
    return rep;
  }
  const double mu = m.mu;
  Tracker sign("sign"), b0("symbol0"), b1("symbol1"), b2("symbol2"), vir("virial_condition"), wlb("virial_bound");
  for (double r : radii) {
    const double j = japanese(r);
    const double v = m.V1(r), dv = m.dV1(r), d2v = m.d2V1(r);
    sign.add(-v * std::pow(j, mu) - m.eps1, r);
    b0.add(m.C[0] - std::pow(j, mu) * std::abs(v), r);
    b1.add(m.C[1] - std::pow(j, mu + 1.0) * std::abs(dv), r);
    double second = std::abs(d2v);
    if (m.dim >= 2) second = std::max(second, r > 0.0 ? std::abs(dv / r) : std::abs(d2v));
    b2.add(m.C[2] - std::pow(j, mu + 2.0) * second, r);
    const double W = virial_W(m, r);
    // -|x|^{-2} x·∇(|x|² V1) = W, compared with -ε̃1 V1
    vir.add((W + m.eps1_tilde * v) * std::pow(j, mu), r);
    wlb.add(W * std::pow(j, mu) - m.eps1 * m.eps1_tilde, r);
  }
  const double scale = std::max({1.0, m.C[0], m.C[1], m.C[2]});
  rep.items.push_back(sign.done(1e-12 * scale));
  rep.items.push_back(b0.done(1e-12 * scale));
  rep.items.push_back(b1.done(1e-12 * scale));
  rep.items.push_back(b2.done(1e-12 * scale));
  rep.items.push_back(vir.done(1e-12 * scale));
  rep.items.push_back(wlb.done(1e-12 * scale));

  Tracker tail("tail_decay");
  HypothesisResult local{"local_integrability", true, 0.0, 0.0, "V2 = 0"};
  if (!m.has_V2()) {
    tail.add(0.0, 0.0);
    tail.res.detail = "V2 = 0";
  } else {
    const auto& t = m.tail;
    if (!(t.delta > 0.0 && t.C > 0.0 && t.R > 0.0)) {
      tail.add(-1.0, 0.0);
      tail.res.detail = "tail parameters must be positive";
    } else {
      const double e = 2.0 * m.s0() + t.delta;
      double rmax = t.R;
      for (double r : radii) rmax = std::max(rmax, r);
      std::vector<double> probe;
      for (double r : radii)
        if (r > t.R) probe.push_back(r);
      for (int k = 1; k <= 200; ++k) probe.push_back(t.R * std::pow(10.0 * rmax / t.R, k / 200.0));
      for (double r : probe) tail.add(t.C - std::abs(m.V2(r)) * std::pow(r, e), r);
      if (tail.first) tail.add(0.0, t.R);
    }
    const double p = m.dim <= 3 ? 2.0 : (m.dim == 4 ? 3.0 : m.dim / 2.0);
    const double R = std::max(1.0, t.R);
    const double i1 = radial_lp(m.V2, p, m.dim, 1e-6, R), i2 = radial_lp(m.V2, p, m.dim, 1e-12, R);
    local.worst = std::isfinite(i2) ? -std::abs(i2 - i1) / std::max(i2, 1e-300) : -1.0;
    local.pass = std::isfinite(i1) && std::isfinite(i2) && std::abs(i2 - i1) <= 1e-3 * std::max(i2, 1e-12);
    local.witness = 1e-12;
    local.tolerance = 1e-3;
    std::ostringstream os;
    os << "L^" << p << " integral on (0," << R << "): " << i1 << " -> " << i2 << " as the cutoff shrinks";
    local.detail = os.str();
  }
  rep.items.push_back(tail.done(1e-12 * std::max(1.0, m.tail.C)));
  rep.items.push_back(local);
  return rep;
}

ConditionReport check_condition(const PotentialModel& m) { return check_condition(m, sample_radii(1e4, 400)); }

}  // namespace lapzero
