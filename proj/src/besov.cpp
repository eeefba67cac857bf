// SPDX-License-Identifier: Apache-2.0
#include "lapzero/besov.hpp"

#include <map>
#include <memory>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace lapzero {

double loglog_slope(const std::vector<double>& radii, const std::vector<double>& values) {
  if (radii.size() != values.size()) throw DimensionError("loglog_slope: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(values[k] > 0.0) || !(radii[k] > 0.0)) continue;
    const double x = std::log(radii[k]), y = std::log(values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) {
    // a ladder that has vanished identically decays as fast as anything can
    return (!values.empty() && values.back() == 0.0) ? -std::numeric_limits<double>::infinity()
                                                     : std::numeric_limits<double>::quiet_NaN();
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? std::numeric_limits<double>::quiet_NaN() : (n * sxy - sx * sy) / den;
}

// ---------------------------------------------------------------------------

ShellScheme::ShellScheme(double p, double max_abs) : p_(p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("shell base must be > 1");
  if (!std::isfinite(max_abs)) throw DataError("shell scheme: non-finite spectral bound");
  r_ = {0.0, 1.0};
  while (r_.back() <= max_abs) r_.push_back(std::pow(p_, static_cast<double>(r_.size() - 1)));
}

int ShellScheme::shell_of(double a) const {
  const double x = std::abs(a);
  const int J = count();
  if (x < 1.0) return 1;
  if (x >= r_.back()) throw DataError("spectral value outside the shell scheme");
  int j = static_cast<int>(std::floor(std::log(x) / std::log(p_))) + 2;
  j = std::clamp(j, 2, J);
  while (j < J && x >= r_[static_cast<std::size_t>(j)]) ++j;
  while (j > 2 && x < r_[static_cast<std::size_t>(j - 1)]) --j;
  return j;
}

WeightSpectrum::WeightSpectrum(RVec v, std::string name) : values(std::move(v)), label(std::move(name)) {
  if (!values.allFinite()) throw DataError("weight spectrum has non-finite entries");
}

WeightSpectrum WeightSpectrum::scaled(double c) const { return WeightSpectrum(c * values, label); }

WeightSpectrum WeightSpectrum::power(double e) const {
  if ((values.array() <= 0.0).any()) throw ParameterError("power of a non-positive spectrum");
  return WeightSpectrum(values.array().pow(e).matrix(), label);
}

double ShellProfile::besov() const {
  double s = 0.0;
  for (std::size_t j = 0; j < norms.size(); ++j) s += std::sqrt(radii[j + 1]) * norms[j];
  return s;
}

double ShellProfile::dual() const {
  double s = 0.0;
  for (std::size_t j = 0; j < norms.size(); ++j) s = std::max(s, norms[j] / std::sqrt(radii[j + 1]));
  return s;
}

double ShellProfile::total() const {
  double s = 0.0;
  for (double n : norms) s += n * n;
  return std::sqrt(s);
}

namespace detail {
void check_sizes(Index u, Index a) {
  if (u != a) throw DimensionError("vector length " + std::to_string(u) + " != spectrum length " + std::to_string(a));
}
void check_finite(bool finite) {
  if (!finite) throw DataError("vector has non-finite entries");
}
std::vector<int> shell_index(const WeightSpectrum& a, const ShellScheme& s) {
  std::vector<int> out(static_cast<std::size_t>(a.size()));
  for (Index i = 0; i < a.size(); ++i) out[static_cast<std::size_t>(i)] = s.shell_of(a.values[i]);
  return out;
}
}  // namespace detail

std::size_t top_half_start(std::size_t n) { return n / 2; }

namespace {
double tail_max(const std::vector<double>& v) {
  double m = 0.0;
  for (std::size_t k = top_half_start(v.size()); k < v.size(); ++k) m = std::max(m, v[k]);
  return m;
}
double tail_slope(const std::vector<double>& r, const std::vector<double>& v) {
  const auto k0 = static_cast<std::ptrdiff_t>(top_half_start(v.size()));
  return loglog_slope({r.begin() + k0, r.end()}, {v.begin() + k0, v.end()});
}
std::size_t ladder_slot(const std::vector<double>& r, double R) {
  for (std::size_t k = 0; k < r.size(); ++k)
    if (std::abs(r[k] - R) <= 1e-12 * std::max(1.0, R)) return k;
  throw ParameterError("radius " + std::to_string(R) + " is not on the ladder");
}
}  // namespace

double DefectLadder::ball_tail() const { return tail_max(ball); }
double DefectLadder::annulus_tail() const { return tail_max(annulus); }
double DefectLadder::ball_slope() const { return tail_slope(radii, ball); }
double DefectLadder::annulus_slope() const { return tail_slope(radii, annulus); }
double DefectLadder::ball_at(double R) const { return ball[ladder_slot(radii, R)]; }
double DefectLadder::annulus_at(double R) const { return annulus[ladder_slot(radii, R)]; }

// ---------------------------------------------------------------------------

SampleBank make_samples(const WeightSpectrum& a, std::size_t random_count, std::uint64_t seed,
                        const std::vector<double>& bases) {
  SampleBank bank;
  bank.seed = seed;
  bank.random_count = random_count;
  const Index n = a.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  const double envelopes[] = {0.0, 0.5, 1.0};
  for (std::size_t k = 0; k < random_count; ++k) {
    CVec u(n);
    const double t = envelopes[k % 3];
    for (Index i = 0; i < n; ++i) u[i] = Complex(g(rng), g(rng)) * std::pow(japanese(a.values[i]), -t);
    bank.vectors.push_back(std::move(u));
  }
  std::set<Index> edges;
  for (double p : bases) {
    const ShellScheme s(p, a.max_abs());
    const auto idx = detail::shell_index(a, s);
    for (int j = 1; j <= s.count(); ++j) {
      CVec u = CVec::Zero(n);
      bool any = false;
      for (Index i = 0; i < n; ++i)
        if (idx[static_cast<std::size_t>(i)] == j) {
          u[i] = Complex(g(rng), g(rng));
          any = true;
        }
      if (any) bank.vectors.push_back(std::move(u));
    }
    for (int j = 1; j <= s.count(); ++j) {
      const double R = s.radius(j);
      Index below = -1, above = -1;
      for (Index i = 0; i < n; ++i) {
        const double x = std::abs(a.values[i]);
        if (x < R && (below < 0 || x > std::abs(a.values[below]))) below = i;
        if (x >= R && (above < 0 || x < std::abs(a.values[above]))) above = i;
      }
      if (below >= 0) edges.insert(below);
      if (above >= 0) edges.insert(above);
    }
  }
  for (Index i : edges) {
    CVec u = CVec::Zero(n);
    u[i] = 1.0;
    bank.vectors.push_back(std::move(u));
  }
  return bank;
}

namespace {
struct Worst {
  double ratio = 0.0;
  Index at = -1;
  std::size_t count = 0;
  void add(double r, Index k) {
    ++count;
    if (r > ratio) {
      ratio = r;
      at = k;
    }
  }
  LemmaCheck check(std::string id, double constant) const {
    LemmaCheck c;
    c.id = std::move(id);
    c.constant = constant;
    c.worst = ratio;
    c.samples = count;
    c.witness = at;
    c.pass = ratio <= constant * (1.0 + 1e-12);
    return c;
  }
};
}  // namespace

LemmaReport verify_base_equivalence(const SampleBank& samples, const WeightSpectrum& a, double p) {
  if (!(p > 1.0)) throw ParameterError("base equivalence needs p > 1");
  const ShellScheme s2(2.0, a.max_abs()), sp(p, a.max_abs());
  Worst fwd, bwd;
  for (std::size_t k = 0; k < samples.vectors.size(); ++k) {
    const auto& u = samples.vectors[k];
    const double b2 = shell_decompose(u, a, s2).besov();
    const double bp = shell_decompose(u, a, sp).besov();
    if (b2 == 0.0 && bp == 0.0) continue;
    fwd.add(bp / b2, static_cast<Index>(k));
    bwd.add(b2 / bp, static_cast<Index>(k));
  }
  LemmaReport r;
  r.lemma = "base_equivalence";
  r.seed = samples.seed;
  r.checks.push_back(fwd.check("base.forward", base_constant_forward(p)));
  r.checks.push_back(bwd.check("base.backward", base_constant_backward(p)));
  return r;
}

LemmaReport verify_scaling(const SampleBank& samples, const WeightSpectrum& a, double c,
                           const ScalingOptions& opt) {
  if (c == 0.0 || !std::isfinite(c)) throw ParameterError("scaling factor must be finite and nonzero");
  const bool contracted = std::abs(c) <= 1.0;
  const WeightSpectrum ca = a.scaled(c);
  Worst gen, con;
  for (std::size_t k = 0; k < samples.vectors.size(); ++k) {
    CVec u = samples.vectors[k];
    if (contracted) {
      for (Index i = 0; i < u.size(); ++i) {
        if (std::abs(ca.values[i]) >= 1.0 || u[i] == 0.0) continue;
        if (!opt.project) throw ParameterError("scaling with |c| <= 1 needs u = F(|cA| >= 1)u");
        u[i] = 0.0;
      }
    }
    const double b = besov_norm(u, a);
    if (b == 0.0) continue;
    const double r = besov_norm(u, ca) / b;
    gen.add(r, static_cast<Index>(k));
    if (contracted) con.add(r, static_cast<Index>(k));
  }
  LemmaReport r;
  r.lemma = "scaling";
  r.seed = samples.seed;
  r.checks.push_back(gen.check("scaling.general", opt.general * std::sqrt(std::abs(c))));
  if (contracted) r.checks.push_back(con.check("scaling.contracted", opt.contracted * std::sqrt(std::abs(c))));
  return r;
}

double power_map_constant(double s) {
  if (!(s > -1.0)) throw ParameterError("power map needs s > -1");
  const double p = std::pow(2.0, 1.0 / (1.0 + s));
  return std::pow(2.0, std::max(s / 2.0, 0.0) / (1.0 + s)) * base_constant_forward(p);
}

LemmaReport verify_power_map(const SampleBank& samples, const WeightSpectrum& a, double s) {
  if (!(s > -1.0)) throw ParameterError("power map needs s > -1");
  if ((a.values.array() < 1.0).any()) throw ParameterError("power map needs a spectrum >= 1");
  const WeightSpectrum lifted = a.power(1.0 + s);
  const RVec down = a.values.array().pow(-s / 2.0);
  const RVec up = a.values.array().pow(s / 2.0);
  const double sb = -s / (1.0 + s);
  Worst fwd, bwd;
  for (std::size_t k = 0; k < samples.vectors.size(); ++k) {
    const auto& u = samples.vectors[k];
    const double b = besov_norm(u, a);
    const double bl = besov_norm(u, lifted);
    if (b == 0.0) continue;
    fwd.add(besov_norm(CVec(down.cwiseProduct(u)), lifted) / b, static_cast<Index>(k));
    bwd.add(besov_norm(CVec(up.cwiseProduct(u)), a) / bl, static_cast<Index>(k));
  }
  LemmaReport r;
  r.lemma = "power_map";
  r.seed = samples.seed;
  r.checks.push_back(fwd.check("power.forward", power_map_constant(s)));
  r.checks.push_back(bwd.check("power.backward", power_map_constant(sb)));
  return r;
}

EmbeddingConstants embedding_constants(double s) {
  if (!(s > 0.5)) throw ParameterError("embedding constants need s > 1/2");
  double sum = 0.0, Rprev = 0.0, R = 1.0;
  for (int j = 1; j < 100000; ++j) {
    const double term = R * std::pow(japanese(Rprev), -2.0 * s);
    sum += term;
    if (term < 1e-17 * sum) break;
    Rprev = R;
    R *= 2.0;
  }
  const double q = std::pow(2.0, 0.25);
  return {std::sqrt(sum), q, q, std::sqrt(sum)};
}

LemmaReport verify_embeddings(const SampleBank& samples, const WeightSpectrum& a, double s) {
  const auto c = embedding_constants(s);
  const RVec jp = a.values.unaryExpr([](double x) { return japanese(x); });
  const RVec ws = jp.array().pow(s), wh = jp.array().sqrt(), wmh = jp.array().pow(-0.5),
             wms = jp.array().pow(-s);
  Worst w2b, b2h, h2n, n2b, n2m, m2d, d2w;
  for (std::size_t k = 0; k < samples.vectors.size(); ++k) {
    const auto& u = samples.vectors[k];
    const auto prof = shell_decompose(u, a, ShellScheme(2.0, a.max_abs()));
    const double n = u.norm(), b = prof.besov(), d = prof.dual();
    if (n == 0.0) continue;
    const double ls = ws.cwiseProduct(u).norm(), lh = wh.cwiseProduct(u).norm();
    const double lmh = wmh.cwiseProduct(u).norm(), lms = wms.cwiseProduct(u).norm();
    const auto id = static_cast<Index>(k);
    w2b.add(b / ls, id);
    b2h.add(lh / b, id);
    h2n.add(n / lh, id);
    n2b.add(n / b, id);
    n2m.add(lmh / n, id);
    m2d.add(d / lmh, id);
    d2w.add(lms / d, id);
  }
  LemmaReport r;
  r.lemma = "embeddings";
  r.seed = samples.seed;
  r.checks.push_back(w2b.check("embed.weighted_to_besov", c.weighted_to_besov));
  r.checks.push_back(b2h.check("embed.besov_to_half", c.besov_to_half));
  r.checks.push_back(h2n.check("embed.half_to_hilbert", 1.0));
  r.checks.push_back(n2b.check("embed.hilbert_by_besov", 1.0));
  r.checks.push_back(n2m.check("embed.hilbert_to_minus_half", 1.0));
  r.checks.push_back(m2d.check("embed.minus_half_to_dual", c.minus_half_to_dual));
  r.checks.push_back(d2w.check("embed.dual_to_weighted", c.dual_to_weighted));
  return r;
}

LemmaReport verify_duality(const SampleBank& samples, const WeightSpectrum& a) {
  Worst lo, hi;
  for (std::size_t k = 0; k < samples.vectors.size(); ++k) {
    const auto& u = samples.vectors[k];
    const double d = dual_norm(u, a);
    if (d == 0.0) continue;
    const double b = ball_sup(u, a);
    lo.add(d / b, static_cast<Index>(k));
    hi.add(b / d, static_cast<Index>(k));
  }
  LemmaReport r;
  r.lemma = "duality";
  r.seed = samples.seed;
  r.checks.push_back(lo.check("duality.lower", 1.0));
  r.checks.push_back(hi.check("duality.upper", 2.0));
  return r;
}

// ---------------------------------------------------------------------------

CMat LinearMap::column_block(const std::vector<Index>& idx) const {
  if (columns) return columns(idx);
  CMat out(rows, static_cast<Index>(idx.size()));
  CVec e = CVec::Zero(cols);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    e[idx[k]] = 1.0;
    out.col(static_cast<Index>(k)) = apply(e);
    e[idx[k]] = 0.0;
  }
  return out;
}

LinearMap as_map(const CMat& T) {
  auto M = std::make_shared<const CMat>(T);
  LinearMap m;
  m.rows = T.rows();
  m.cols = T.cols();
  m.apply = [M](const CVec& x) -> CVec { return *M * x; };
  m.adjoint = [M](const CVec& y) -> CVec { return M->adjoint() * y; };
  m.columns = [M](const std::vector<Index>& idx) -> CMat { return (*M)(Eigen::all, idx); };
  return m;
}

namespace {
std::vector<Index> resolve_subset(const std::vector<Index>& subset, Index n) {
  if (!subset.empty()) return subset;
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  return all;
}

template <typename KeyFn>
BlockPartition partition_by(const std::vector<Index>& nodes, KeyFn key) {
  std::map<long, std::vector<Index>> groups;
  for (Index i : nodes) groups[key(i)].push_back(i);
  BlockPartition p;
  for (auto& [k, v] : groups) {
    p.keys.push_back(k);
    p.members.push_back(std::move(v));
  }
  return p;
}
}  // namespace

BlockPartition unit_blocks(const WeightSpectrum& a, const std::vector<Index>& subset) {
  return partition_by(resolve_subset(subset, a.size()),
                      [&](Index i) { return static_cast<long>(std::floor(a.values[i])); });
}

BlockPartition shell_blocks(const WeightSpectrum& a, const ShellScheme& scheme, const std::vector<Index>& subset) {
  return partition_by(resolve_subset(subset, a.size()), [&](Index i) { return static_cast<long>(scheme.shell_of(a.values[i])); });
}

double block_norm(const CMat& B) {
  if (B.size() == 0) return 0.0;
  const CMat G = B.cols() <= B.rows() ? CMat(B.adjoint() * B) : CMat(B * B.adjoint());
  if (G.rows() == 1) return std::sqrt(std::max(0.0, G(0, 0).real()));
  Eigen::SelfAdjointEigenSolver<CMat> es(G, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double spectral_norm(const CMat& T) {
  if (T.size() == 0) return 0.0;
  if (std::min(T.rows(), T.cols()) <= 48) return block_norm(T);
  Eigen::BDCSVD<CMat> svd(T);
  return svd.singularValues()(0);
}

namespace {

CVec masked(const CVec& v, const std::vector<Index>& idx) {
  if (idx.empty()) return v;
  CVec out = CVec::Zero(v.size());
  for (Index i : idx) out[i] = v[i];
  return out;
}

CVec random_on(Index n, const std::vector<Index>& idx, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CVec x = CVec::Zero(n);
  if (idx.empty())
    for (Index i = 0; i < n; ++i) x[i] = Complex(g(rng), g(rng));
  else
    for (Index i : idx) x[i] = Complex(g(rng), g(rng));
  return x / x.norm();
}

PowerResult power_norm(const LinearMap& T, const std::vector<Index>& rows, const std::vector<Index>& cols,
                       const NormOptions& opt) {
  PowerResult res;
  std::mt19937_64 rng(opt.seed);
  CVec x = random_on(T.cols, cols, rng);
  double prev = 0.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const CVec y = masked(T.apply(x), rows);
    const double val = y.norm();
    res.iterations = it;
    res.value = std::max(res.value, val);
    if (val == 0.0 || std::abs(val - prev) <= opt.tol * val) {
      res.converged = true;
      break;
    }
    prev = val;
    const CVec z = masked(T.adjoint(y), cols);
    const double zn = z.norm();
    if (zn == 0.0) break;
    x = z / zn;
  }
  return res;
}

// Lanczos on (PTP)*(PTP) with full reorthogonalisation; Ritz values bound the
// top eigenvalue from below.
PowerResult lanczos_norm(const LinearMap& T, const std::vector<Index>& rows, const std::vector<Index>& cols,
                         const NormOptions& opt) {
  PowerResult res;
  std::mt19937_64 rng(opt.seed);
  std::vector<CVec> Q{random_on(T.cols, cols, rng)};
  std::vector<double> alpha, beta;
  double prev = 0.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const CVec& q = Q.back();
    CVec w = masked(T.adjoint(masked(T.apply(q), rows)), cols);
    alpha.push_back(q.dot(w).real());
    for (int pass = 0; pass < 2; ++pass)
      for (const CVec& v : Q) w -= v.dot(w) * v;
    res.iterations = it;
    const Index k = static_cast<Index>(alpha.size());
    double top;
    if (k == 1) {
      top = alpha[0];
    } else {
      Eigen::SelfAdjointEigenSolver<RMat> es;
      es.computeFromTridiagonal(Eigen::Map<const RVec>(alpha.data(), k),
                                Eigen::Map<const RVec>(beta.data(), k - 1), Eigen::EigenvaluesOnly);
      top = es.eigenvalues().maxCoeff();
    }
    res.value = std::max(res.value, std::sqrt(std::max(0.0, top)));
    const double b = w.norm();
    if (b <= 1e-14 * std::sqrt(std::max(top, 1e-300)) || std::abs(top - prev) <= opt.tol * std::abs(top)) {
      res.converged = true;
      break;
    }
    prev = top;
    beta.push_back(b);
    Q.push_back(w / b);
  }
  return res;
}

}  // namespace

PowerResult estimate_norm(const LinearMap& T, const std::vector<Index>& rows, const std::vector<Index>& cols,
                          const NormOptions& opt) {
  if (T.rows == 0 || T.cols == 0) return {0.0, 0, true};
  return opt.method == NormMethod::power ? power_norm(T, rows, cols, opt) : lanczos_norm(T, rows, cols, opt);
}

SchurBound schur_block_bound(const LinearMap& T, const WeightSpectrum& a1, const WeightSpectrum& a2,
                             const SchurOptions& opt) {
  if (T.cols != a1.size() || T.rows != a2.size())
    throw DimensionError("schur_block_bound: operator shape does not match the spectra");
  if (!opt.window.empty() && T.rows != T.cols)
    throw DimensionError("schur_block_bound: a node window needs a square operator");
  const auto cols = resolve_subset(opt.window, T.cols);
  const auto rows = resolve_subset(opt.window, T.rows);
  SchurBound out;

  const auto cb = unit_blocks(a1, cols);
  const auto rb = unit_blocks(a2, rows);
  for (std::size_t n = 0; n < cb.members.size(); ++n) {
    const CMat Y = T.column_block(cb.members[n]);
    for (std::size_t m = 0; m < rb.members.size(); ++m) {
      const CMat B = Y(rb.members[m], Eigen::all);
      if (B.norm() <= out.block_sup) continue;  // Frobenius dominates the spectral norm
      const double v = block_norm(B);
      if (v > out.block_sup) {
        out.block_sup = v;
        out.arg_row = rb.keys[m];
        out.arg_col = cb.keys[n];
      }
    }
  }
  out.upper = 2.0 * out.block_sup;

  const ShellScheme s1(2.0, a1.max_abs()), s2(2.0, a2.max_abs());
  const auto sh1 = shell_blocks(a1, s1, cols);
  const auto sh2 = shell_blocks(a2, s2, rows);
  NormOptions no = opt.norm;
  for (std::size_t j = 0; j < sh1.members.size(); ++j) {
    const double Rj = s1.radius(static_cast<int>(sh1.keys[j]));
    for (std::size_t k = 0; k < sh2.members.size(); ++k) {
      const double Rk = s2.radius(static_cast<int>(sh2.keys[k]));
      ++no.seed;
      const auto pw = estimate_norm(T, sh2.members[k], sh1.members[j], no);
      out.lower = std::max(out.lower, pw.value / std::sqrt(Rj * Rk));
    }
  }
  std::mt19937_64 rng(opt.norm.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> g;
  for (std::size_t k = 0; k < opt.random_probes; ++k) {
    CVec u = CVec::Zero(T.cols), w = CVec::Zero(T.rows);
    for (Index j : cols) u[j] = Complex(g(rng), g(rng));
    for (Index i : rows) w[i] = Complex(g(rng), g(rng));
    const double den = besov_norm(u, a1) * besov_norm(w, a2);
    if (den > 0.0) out.lower = std::max(out.lower, std::abs(w.dot(T.apply(u))) / den);
  }
  return out;
}

SchurBound schur_block_bound(const CMat& T, const WeightSpectrum& a1, const WeightSpectrum& a2,
                             const SchurOptions& opt) {
  return schur_block_bound(as_map(T), a1, a2, opt);
}

AccretiveConstants accretive_constants(const CMat& T, const WeightSpectrum& a) {
  if (T.rows() != a.size() || T.cols() != a.size()) throw DimensionError("accretive_constants: shape mismatch");
  AccretiveConstants c;
  const auto blocks = unit_blocks(a);
  for (std::size_t n = 0; n < blocks.members.size(); ++n) {
    const long key = blocks.keys[n];
    const auto& bn = blocks.members[n];
    std::vector<Index> below, above;
    for (Index i = 0; i < a.size(); ++i) (a.values[i] < static_cast<double>(key) ? below : above).push_back(i);
    c.c1 = std::max(c.c1, block_norm(T(bn, bn)));
    if (!below.empty()) c.c2 = std::max(c.c2, spectral_norm(T(below, bn)));
    c.c3 = std::max(c.c3, spectral_norm(T(bn, above)));
    for (const auto& bm : blocks.members) c.block_sup = std::max(c.block_sup, block_norm(T(bm, bn)));
  }
  c.combined = 2.0 * c.c1 + c.c2 + c.c3;
  Eigen::SelfAdjointEigenSolver<CMat> es(T + T.adjoint(), Eigen::EigenvaluesOnly);
  c.accretivity = es.eigenvalues().minCoeff();
  return c;
}

InterpolationReport verify_interpolation(const CMat& T, const WeightSpectrum& a1, const WeightSpectrum& a2,
                                         double s) {
  if (!(s > 0.5)) throw ParameterError("interpolation check needs s > 1/2");
  if (T.cols() != a1.size() || T.rows() != a2.size()) throw DimensionError("verify_interpolation: shape mismatch");
  InterpolationReport r;
  r.s = s;
  const ShellScheme s1(2.0, a1.max_abs()), s2(2.0, a2.max_abs());
  const auto sh1 = shell_blocks(a1, s1), sh2 = shell_blocks(a2, s2);
  for (std::size_t j = 0; j < sh1.members.size(); ++j) {
    const double Rj = s1.radius(static_cast<int>(sh1.keys[j]));
    const CMat Tj = T(Eigen::all, sh1.members[j]);
    double sum = 0.0;
    for (std::size_t k = 0; k < sh2.members.size(); ++k) {
      const double Rk = s2.radius(static_cast<int>(sh2.keys[k]));
      const CMat B = Tj(sh2.members[k], Eigen::all);
      sum += std::sqrt(Rk / Rj) * spectral_norm(B);
      if (B.size() == 0) continue;
      // the top right singular vector of each block is a single-shell probe
      Eigen::JacobiSVD<CMat> svd(B, Eigen::ComputeThinV);
      CVec u = CVec::Zero(T.cols());
      const CVec v = svd.matrixV().col(0);
      for (std::size_t q = 0; q < sh1.members[j].size(); ++q) u[sh1.members[j][q]] = v[static_cast<Index>(q)];
      r.bb_lower = std::max(r.bb_lower, besov_norm(CVec(T * u), a2) / besov_norm(u, a1));
    }
    r.bb_upper = std::max(r.bb_upper, sum);
  }
  r.hilbert_norm = spectral_norm(T);
  const RVec l = a2.values.unaryExpr([s](double x) { return std::pow(japanese(x), s); });
  const RVec rr = a1.values.unaryExpr([s](double x) { return std::pow(japanese(x), -s); });
  r.weighted_norm = spectral_norm(l.asDiagonal() * T * rr.asDiagonal());
  r.ratio = r.bb_upper / (r.hilbert_norm + r.weighted_norm);
  return r;
}

}  // namespace lapzero
