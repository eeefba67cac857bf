// SPDX-License-Identifier: Apache-2.0
#include "lapzero/weyl.hpp"

#include <algorithm>

#include <unsupported/Eigen/FFT>

namespace lapzero {

Complex SymbolFn::operator()(double x, double xi) const {
  RVec k(1);
  k[0] = xi;
  CVec out(1);
  row(x, k, out);
  return out[0];
}

SymbolFn make_symbol(std::function<Complex(double, double)> c, std::string label, bool real) {
  SymbolFn s;
  s.label = std::move(label);
  s.real = real;
  s.row = [c = std::move(c)](double x, const RVec& xi, CVec& out) {
    for (Index k = 0; k < xi.size(); ++k) out[k] = c(x, xi[k]);
  };
  return s;
}

SymbolFn symbol_constant(Complex c) {
  SymbolFn s;
  s.label = "const";
  s.real = c.imag() == 0.0;
  s.row = [c](double, const RVec& xi, CVec& out) { out.setConstant(xi.size(), c); };
  return s;
}

SymbolFn symbol_xi() {
  SymbolFn s;
  s.label = "xi";
  s.row = [](double, const RVec& xi, CVec& out) { out = xi.cast<Complex>(); };
  return s;
}

SymbolFn symbol_a0(double K, double mu) {
  SymbolFn s;
  s.label = "a0";
  s.K = K;
  s.mu = mu;
  s.row = [K, mu](double x, const RVec& xi, CVec& out) {
    const double f2 = K * std::pow(japanese(x), -mu);
    out = (xi.array().square() / f2).matrix().cast<Complex>();
  };
  return s;
}

SymbolFn symbol_b0(double K, double mu) {
  SymbolFn s;
  s.label = "b0";
  s.K = K;
  s.mu = mu;
  s.row = [K, mu](double x, const RVec& xi, CVec& out) {
    const double j = japanese(x);
    const double c = x / (j * std::sqrt(K * std::pow(j, -mu)));
    out = (c * xi).cast<Complex>();
  };
  return s;
}

SymbolFn symbol_combine(const SymbolFn& c1, Complex alpha, const SymbolFn& c2) {
  SymbolFn s;
  s.label = c1.label + "+a*" + c2.label;
  s.real = c1.real && c2.real && alpha.imag() == 0.0;
  s.K = c1.K;
  s.mu = c1.mu;
  s.row = [c1, alpha, c2](double x, const RVec& xi, CVec& out) {
    CVec tmp(xi.size());
    c1.row(x, xi, out);
    c2.row(x, xi, tmp);
    out += alpha * tmp;
  };
  return s;
}

RVec frequency_ladder(const Grid1D& g) {
  const Index N = g.N;
  return RVec::NullaryExpr(N, [&](Index k) {
    const Index m = k < N / 2 ? k : k - N;
    return M_PI / g.L * static_cast<double>(m);
  });
}

double WeylOperator::hermitian_residual() const {
  const double den = mat.cwiseAbs().maxCoeff();
  return den > 0.0 ? (mat - mat.adjoint()).cwiseAbs().maxCoeff() / den : 0.0;
}

namespace {

// Calls sink(s, g_s) for every midpoint index s = i + j, g_s(d) = (1/N) Σ_k c(m_s, ξ_k) e^{2πikd/N}.
template <typename Sink>
void midpoint_kernels(const SymbolFn& c, const Grid1D& g, Sink&& sink) {
  if (!is_power_of_two(g.N)) throw ParameterError("Weyl quantization needs a power-of-two grid");
  const Index N = g.N;
  const RVec xi = frequency_ladder(g);
  Eigen::FFT<double> fft;
  CVec vals(N);
  std::vector<Complex> in(static_cast<std::size_t>(N)), out(static_cast<std::size_t>(N));
  for (Index s = 0; s <= 2 * N - 2; ++s) {
    const double m = -g.L + (0.5 * static_cast<double>(s) + 0.5) * g.h;
    c.row(m, xi, vals);
    std::copy(vals.data(), vals.data() + N, in.begin());
    fft.inv(out, in);  // scaled by 1/N
    sink(s, out);
  }
}

}  // namespace

WeylOperator weyl_quantize(const SymbolFn& c, const Grid1D& g) {
  const Index N = g.N;
  WeylOperator W;
  W.mat.resize(N, N);
  W.label = "Op^w(" + c.label + ")";
  midpoint_kernels(c, g, [&](Index s, const std::vector<Complex>& k) {
    const Index lo = std::max<Index>(0, s - (N - 1)), hi = std::min<Index>(N - 1, s);
    for (Index i = lo; i <= hi; ++i) {
      const Index j = s - i;
      W.mat(i, j) = k[static_cast<std::size_t>(((i - j) % N + N) % N)];
    }
  });
  W.hermitian = c.real;
  return W;
}

CVec weyl_apply(const SymbolFn& c, const Grid1D& g, const CVec& u) {
  const Index N = g.N;
  if (u.size() != N) throw DimensionError("weyl_apply: vector length does not match the grid");
  CVec out = CVec::Zero(N);
  midpoint_kernels(c, g, [&](Index s, const std::vector<Complex>& k) {
    const Index lo = std::max<Index>(0, s - (N - 1)), hi = std::min<Index>(N - 1, s);
    for (Index i = lo; i <= hi; ++i) {
      const Index j = s - i;
      out[i] += k[static_cast<std::size_t>(((i - j) % N + N) % N)] * u[j];
    }
  });
  return out;
}

// ---------------------------------------------------------------------------

double FilterSpec::chi_minus(double t) const {
  if (t < -ramp || t >= plateau + ramp) return 0.0;
  if (t < 0.0) return smoothstep((t + ramp) / ramp, degree);
  if (t <= plateau) return 1.0;
  return 1.0 - smoothstep((t - plateau) / ramp, degree);
}

double FilterSpec::chi_tilde(double b) const {
  if (tilde_zero || b <= tilde_floor || b >= sigma) return 0.0;
  return smoothstep(b - tilde_floor, degree) * (1.0 - smoothstep((b - tilde_lo) / (sigma - tilde_lo), degree));
}

void FilterSpec::validate(FilterKind kind) const {
  if (!(ramp > 0.0) || plateau < 0.0) throw ParameterError("filter: need ramp > 0 and plateau >= 0");
  if (!(sigma > tilde_lo) || tilde_floor + 1.0 > tilde_lo)
    throw ParameterError("filter: need floor + 1 <= tilde_lo < sigma");
  if (kind == FilterKind::outgoing && sigma > 1.0)
    throw ParameterError("outgoing filter needs its cut at or below 1");
}

FilterSpec default_filter(const PotentialModel& model) {
  FilterSpec f;
  f.plateau = model.C0_prime() + 1.0;
  return f;
}

SymbolFn filter_symbol(const FilterSpec& spec, FilterKind kind, double K, double mu) {
  spec.validate(kind);
  SymbolFn s;
  s.label = to_string(kind);
  s.K = K;
  s.mu = mu;
  s.row = [spec, kind, K, mu](double x, const RVec& xi, CVec& out) {
    const double j = japanese(x);
    const double f2 = K * std::pow(j, -mu);
    const double bc = x / (j * std::sqrt(f2));
    for (Index k = 0; k < xi.size(); ++k) {
      const double a = xi[k] * xi[k] / f2;
      double v = 0.0;
      switch (kind) {
        case FilterKind::outgoing:
          v = spec.chi_minus(a) * spec.chi_tilde(bc * xi[k]);
          break;
        case FilterKind::mirrored:
          v = spec.chi_minus(a) * spec.chi_tilde(-bc * xi[k]);
          break;
        case FilterKind::high_energy:
          v = spec.chi_plus(a);
          break;
        case FilterKind::low_energy:
          v = spec.chi_minus(a);
          break;
      }
      out[k] = v;
    }
  };
  return s;
}

FilterResult radiation_filter(const CVec& u, const FilterSpec& spec, FilterKind kind, const PotentialModel& model,
                              const Grid1D& g, const std::vector<double>& ladder, double eps) {
  const SymbolFn c = filter_symbol(spec, kind, model.K(), model.mu);
  FilterResult r;
  const bool zero = spec.tilde_zero && (kind == FilterKind::outgoing || kind == FilterKind::mirrored);
  r.w = zero ? CVec::Zero(g.N) : weyl_apply(c, g, u);
  const WeightSpectrum absx(g.x.cwiseAbs(), "|x|");
  r.profile = shell_decompose(r.w, absx, ShellScheme(2.0, absx.max_abs()));
  r.defect = bstar0_defect(r.w, absx, ladder, model.s0(), eps);
  return r;
}

std::string to_string(FilterKind k) {
  switch (k) {
    case FilterKind::outgoing:
      return "outgoing";
    case FilterKind::mirrored:
      return "mirrored";
    case FilterKind::high_energy:
      return "high_energy";
    case FilterKind::low_energy:
      return "low_energy";
  }
  return "?";
}

}  // namespace lapzero
