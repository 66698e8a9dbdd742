#include <algorithm>
#include <cmath>
#include <mutex>

#include <fftw3.h>

#include "series.hpp"
#include "skatepark/errors.hpp"
#include "skatepark/wigner.hpp"

namespace skatepark {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

bool power_of_two(int n) { return n >= 4 && (n & (n - 1)) == 0; }

// Keys cubic convolution weights, a = -1/2.
inline void cubic_weights(double t, double w[4]) {
  double t2 = t * t, t3 = t2 * t;
  w[0] = -0.5 * t3 + t2 - 0.5 * t;
  w[1] = 1.5 * t3 - 2.5 * t2 + 1;
  w[2] = -1.5 * t3 + 2 * t2 + 0.5 * t;
  w[3] = 0.5 * t3 - 0.5 * t2;
}

}  // namespace

void WignerGridParams::validate() const {
  std::vector<std::string> bad;
  if (!power_of_two(n_x) || !power_of_two(n_p)) bad.push_back("grid sizes must be powers of two >= 4");
  if (!(x_extent > 0) || !(p_extent > 0)) bad.push_back("grid extents must be positive");
  if (!bad.empty()) throw ValidationError("invalid Wigner grid", bad);
}

double WignerGrid::integral() const {
  double s = 0;
  for (double v : values) s += v;
  return s * dx() * dp();
}

double WignerGrid::interpolate(double x, double p) const {
  const int nx = params.n_x, np = params.n_p;
  double fx = x / dx() + nx / 2, fp = p / dp() + np / 2;
  if (!(fx >= 0) || !(fp >= 0) || fx > nx - 1 || fp > np - 1) return 0;
  int ix = std::min(int(fx), nx - 2), ip = std::min(int(fp), np - 2);
  double wx[4], wp[4];
  cubic_weights(fx - ix, wx);
  cubic_weights(fp - ip, wp);
  double s = 0;
  for (int a = 0; a < 4; ++a) {
    int i = std::clamp(ix - 1 + a, 0, nx - 1);
    const double* row = &values[std::size_t(i) * np];
    double r = 0;
    for (int b = 0; b < 4; ++b) r += wp[b] * row[std::clamp(ip - 1 + b, 0, np - 1)];
    s += wx[a] * r;
  }
  return s;
}

PhaseMoments moments(const WignerGrid& g) {
  PhaseMoments m;
  const int nx = g.params.n_x, np = g.params.n_p;
  double s0 = 0, sx = 0, sp = 0, sxx = 0, spp = 0, sxp = 0;
  for (int i = 0; i < nx; ++i) {
    double x = g.x(i);
    for (int j = 0; j < np; ++j) {
      double w = g.at(i, j), p = g.p(j);
      s0 += w;
      sx += w * x;
      sp += w * p;
      sxx += w * x * x;
      spp += w * p * p;
      sxp += w * x * p;
    }
  }
  double a = g.dx() * g.dp();
  m.norm = s0 * a;
  m.mean_x = sx / s0;
  m.mean_p = sp / s0;
  m.v_x = sxx / s0 - m.mean_x * m.mean_x;
  m.v_p = spp / s0 - m.mean_p * m.mean_p;
  m.c = sxp / s0 - m.mean_x * m.mean_p;
  return m;
}

WignerGrid wigner_from_density(const DensityFunction& rho, const WignerGridParams& P,
                               const PhysicalConstants& k) {
  P.validate();
  WignerGrid g;
  g.params = P;
  const int nx = P.n_x, n = P.n_p;
  g.values.assign(std::size_t(nx) * n, 0.0);
  const double dy = pi * k.hbar / P.p_extent;
  const double scale = dy / (2 * pi * k.hbar);
  const double sign_half = (n / 2) % 2 ? -1.0 : 1.0;

  const int chunk = std::min(nx, 64);
  fftw_complex* buf = fftw_alloc_complex(std::size_t(chunk) * n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    int dims[1] = {n};
    plan = fftw_plan_many_dft(1, dims, chunk, buf, nullptr, 1, n, buf, nullptr, 1, n, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  double max_re = 0, max_im = 0;
  for (int i0 = 0; i0 < nx; i0 += chunk) {
    for (int r = 0; r < chunk; ++r) {
      int i = i0 + r;
      double x = g.x(std::min(i, nx - 1));
      for (int j = 0; j < n; ++j) {
        double y = (j - n / 2) * dy;
        std::complex<double> v = i < nx ? rho(x + y / 2, x - y / 2) : 0.0;
        if (j % 2) v = -v;
        buf[std::size_t(r) * n + j][0] = v.real();
        buf[std::size_t(r) * n + j][1] = v.imag();
      }
    }
    fftw_execute(plan);
    for (int r = 0; r < chunk && i0 + r < nx; ++r) {
      double* out = &g.values[std::size_t(i0 + r) * n];
      for (int j = 0; j < n; ++j) {
        double s = (j % 2 ? -1.0 : 1.0) * sign_half * scale;
        double re = buf[std::size_t(r) * n + j][0] * s, im = buf[std::size_t(r) * n + j][1] * s;
        out[j] = re;
        max_re = std::max(max_re, std::abs(re));
        max_im = std::max(max_im, std::abs(im));
      }
    }
  }
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);

  g.max_imag = max_re > 0 ? max_im / max_re : 0;
  // aliasing: energy in the outer 5% of the momentum band
  double total = 0, outer = 0;
  const int band = std::max(1, n / 20);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < n; ++j) {
      double v = g.at(i, j), e = v * v;
      total += e;
      if (j < band || j >= n - band) outer += e;
    }
  if (!(total > 0)) throw PhysicsError("Wigner function vanishes on the grid");
  if (outer / total > 1e-4) throw PhysicsError("Wigner transform aliased: momentum band too narrow");
  double I = g.integral();
  g.norm_drift = std::abs(I - 1);
  for (auto& v : g.values) v /= I;
  return g;
}

SymplecticMap rotation_map(double w, double t, double M) {
  if (!(w > 0) || !(t >= 0) || !(M > 0)) throw ValidationError("rotation needs positive parameters");
  double c = std::cos(w * t), s = std::sin(w * t);
  return {c, s / (M * w), -M * w * s, c, MapKind::rotation};
}

SymplecticMap inflation_map(double w, double t, double M) {
  if (!(w > 0) || !(t >= 0) || !(M > 0)) throw ValidationError("inflation needs positive parameters");
  double c = std::cosh(w * t), s = std::sinh(w * t);
  return {c, s / (M * w), M * w * s, c, MapKind::inflation};
}

SymplecticMap compose(const SymplecticMap& B, const SymplecticMap& A) {
  SymplecticMap r{B.a * A.a + B.b * A.g, B.a * A.b + B.b * A.d, B.g * A.a + B.d * A.g, B.g * A.b + B.d * A.d,
                  MapKind::general};
  double aa = std::abs(B.a * A.a) + std::abs(B.b * A.g), bb = std::abs(B.a * A.b) + std::abs(B.b * A.d);
  double gg = std::abs(B.g * A.a) + std::abs(B.d * A.g), dd = std::abs(B.g * A.b) + std::abs(B.d * A.d);
  r.cancel_scale = std::max({aa * dd + bb * gg, A.cancel_scale, B.cancel_scale});
  return r;
}

double solve_t5(double w5, double w6) {
  if (!(w5 > 0) || !(w6 > 0)) throw ValidationError("t5 needs positive frequencies");
  return std::atan(w6 / w5) / w5;
}

WignerGrid transport(const WignerGrid& src, const SymplecticMap& map, const WignerGridParams& target) {
  target.validate();
  if (!map.symplectic()) throw ValidationError("map is not symplectic");
  const auto inv = map.inverse();
  WignerGrid out;
  out.params = target;
  out.values.assign(std::size_t(target.n_x) * target.n_p, 0.0);
  for (int i = 0; i < target.n_x; ++i) {
    double x = out.x(i);
    for (int j = 0; j < target.n_p; ++j) {
      double p = out.p(j);
      out.values[std::size_t(i) * target.n_p + j] = src.interpolate(inv.a * x + inv.b * p, inv.g * x + inv.d * p);
    }
  }
  double I = out.integral(), I0 = src.integral();
  out.norm_drift = std::abs(I - I0);
  if (!(out.norm_drift < 1e-4)) throw PhysicsError("transport lost support: target grid too small");
  for (auto& v : out.values) v *= I0 / I;
  return out;
}

double kernel_B(double kx, double kp, double tbar, double ratio) {
  double phi = std::atan2(ratio * kp, kx);
  return 2 * tbar + std::sin(2 * phi) - std::sin(2 * tbar + 2 * phi);
}

double kernel_log(double kx, double kp, double t, double lambda, double w, double M,
                  const PhysicalConstants& k) {
  double phi = std::atan2(M * w * kp, kx);
  double g = (kx * kx + kp * kp * M * M * w * w) * (-2 * t * w - std::sin(2 * phi) + std::sin(2 * t * w + 2 * phi));
  return k.hbar * k.hbar * lambda / (4 * M * M * w * w * w) * g;
}

KernelDiagnostics kernel_diagnostics(double lambda5, double w5, double t5, double M, double d,
                                     double sigma_d, const PhysicalConstants& k) {
  if (!(w5 > 0) || !(M > 0) || !(d > 0) || !(sigma_d > 0) || !(lambda5 >= 0) || !(t5 >= 0))
    throw ValidationError("kernel diagnostics need positive inputs");
  KernelDiagnostics r;
  r.sigma_x_ref = d;
  r.sigma_p_ref = k.hbar / sigma_d;
  const double h2L = k.hbar * k.hbar * lambda5;
  r.A1 = h2L / (4 * M * M * w5 * w5 * w5 * d * d);
  r.A2 = h2L / (4 * w5 * r.sigma_p_ref * r.sigma_p_ref);
  const double ratio = M * w5 * r.sigma_x_ref / r.sigma_p_ref, tb = w5 * t5;
  const int n = 65;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double kx = -1 + 2.0 * i / (n - 1), kp = -1 + 2.0 * j / (n - 1);
      if (kx == 0 && kp == 0) continue;
      r.B_max = std::max(r.B_max, std::abs(kernel_B(kx, kp, tb, ratio)));
    }
  r.negligible = r.A1 * r.B_max < 1e-2 && r.A2 * r.B_max < 1e-2;
  return r;
}

double blurring_width(double lambda6, double w6, double t6, double M, const PhysicalConstants& k) {
  if (!(w6 > 0) || !(M > 0) || !(t6 >= 0) || !(lambda6 >= 0)) throw ValidationError("blurring needs positive inputs");
  if (lambda6 == 0 || t6 == 0) return 0;
  const double pre = k.hbar * k.hbar * lambda6 / (M * M * w6 * w6 * w6);
  const double x = 2 * t6 * w6;
  if (x > 700) return std::exp(0.5 * (std::log(pre) + x - std::log(2.0)));
  return std::sqrt(pre * detail::sinh_minus_x(x));
}

double Pattern::second_moment() const {
  double s0 = 0, s2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s0 += density[i];
    s2 += density[i] * x[i] * x[i];
  }
  return s2 / s0;
}

std::vector<double> blur(const std::vector<double>& p, double dx, double sl) {
  const int n = int(p.size());
  std::vector<double> out(p);
  if (!(sl > 1e-3 * dx)) return out;
  const int half = int(std::ceil(8 * sl / dx));
  std::vector<double> ker(2 * half + 1);
  double ks = 0;
  for (int m = -half; m <= half; ++m) {
    double y = m * dx;
    ker[m + half] = std::exp(-y * y / (sl * sl));
    ks += ker[m + half];
  }
  for (auto& v : ker) v /= ks;
  for (int i = 0; i < n; ++i) {
    double s = 0;
    int lo = std::max(0, i - half), hi = std::min(n - 1, i + half);
    for (int j = lo; j <= hi; ++j) s += p[j] * ker[i - j + half];
    out[i] = s;
  }
  return out;
}

Pattern final_pattern(const WignerGrid& w4, const SymplecticMap& S, double sigma_lambda,
                      const PatternGridParams& out, std::optional<double> expected_fringe) {
  if (out.n < 16 || !(out.half_width > 0)) throw ValidationError("invalid output pattern grid");
  if (!S.symplectic()) throw ValidationError("map is not symplectic");
  if (!(sigma_lambda >= 0)) throw ValidationError("blur width must be >= 0");
  Pattern P;
  P.x.resize(out.n);
  P.unblurred.assign(out.n, 0.0);
  const double dxo = 2 * out.half_width / out.n;
  for (int i = 0; i < out.n; ++i) P.x[i] = (i - out.n / 2) * dxo;
  if (expected_fringe && *expected_fringe < 4 * dxo)
    throw ValidationError("output grid undersamples the fringes (fewer than 4 cells per fringe)");

  // P0(x) = int dp W4(S^-1 (x, p)); walk the source line along whichever source axis it
  // crosses more cells of.
  const double dxs = w4.dx(), dps = w4.dp();
  const bool along_x = std::abs(S.b) / dxs >= std::abs(S.a) / dps;
  const int nx = w4.params.n_x, np = w4.params.n_p;
  for (int i = 0; i < out.n; ++i) {
    const double x = P.x[i];
    double s = 0;
    if (along_x) {
      for (int m = 0; m < nx; ++m) {
        double x4 = w4.x(m);
        s += w4.interpolate(x4, (x - S.a * x4) / S.b);
      }
      s *= dxs / std::abs(S.b);
    } else {
      for (int m = 0; m < np; ++m) {
        double p4 = w4.p(m);
        s += w4.interpolate((x - S.b * p4) / S.a, p4);
      }
      s *= dps / std::abs(S.a);
    }
    P.unblurred[i] = s;
  }
  double I = 0;
  for (double v : P.unblurred) I += v;
  I *= dxo;
  if (!(I > 0)) throw PhysicsError("final pattern vanishes on the output window");
  for (auto& v : P.unblurred) v /= I;
  P.density = blur(P.unblurred, dxo, sigma_lambda);
  if (sigma_lambda == 0) return P;
  double J = 0;
  for (double v : P.density) J += v;
  J *= dxo;
  for (auto& v : P.density) v /= J;
  return P;
}

FringeMetrics fringe_metrics(const std::vector<double>& x, const std::vector<double>& P,
                             std::optional<double> expected_fringe, int n_maxima) {
  FringeMetrics m;
  m.x_f = NAN;
  const int n = int(P.size());
  if (n < 5 || x.size() != P.size()) return m;
  const double dx = x[1] - x[0];
  const double pmax = *std::max_element(P.begin(), P.end());
  struct Ext {
    double x, v;
    bool max;
  };
  std::vector<Ext> ext;
  for (int i = 1; i + 1 < n; ++i) {
    bool mx = P[i] > P[i - 1] && P[i] >= P[i + 1];
    bool mn = P[i] < P[i - 1] && P[i] <= P[i + 1];
    if (!mx && !mn) continue;
    if (mx && P[i] < 1e-6 * pmax) continue;
    double a = P[i - 1], b = P[i], c = P[i + 1];
    double den = a - 2 * b + c;
    double off = den != 0 ? 0.5 * (a - c) / den : 0;
    ext.push_back({x[i] + off * dx, b - 0.25 * (a - c) * off, mx});
  }
  m.extrema = int(ext.size());
  if (ext.size() >= 3) {
    std::vector<Ext> maxima;
    for (auto& e : ext)
      if (e.max) maxima.push_back(e);
    if (maxima.size() >= 2) {
      std::sort(maxima.begin(), maxima.end(), [](const Ext& a, const Ext& b) { return std::abs(a.x) < std::abs(b.x); });
      maxima.resize(std::min<std::size_t>(maxima.size(), n_maxima));
      std::sort(maxima.begin(), maxima.end(), [](const Ext& a, const Ext& b) { return a.x < b.x; });
      m.x_f = (maxima.back().x - maxima.front().x) / (maxima.size() - 1);
      m.envelope_only = false;
      // central fringe pair: maximum nearest the centre and its nearest minimum
      std::size_t c = 0;
      for (std::size_t i = 1; i < ext.size(); ++i)
        if (ext[i].max && (!ext[c].max || std::abs(ext[i].x) < std::abs(ext[c].x))) c = i;
      const Ext* mn = nullptr;
      for (std::size_t i : {c - 1, c + 1})
        if (i < ext.size() && !ext[i].max && (!mn || ext[i].v < mn->v)) mn = &ext[i];
      if (mn) m.visibility = (ext[c].v - mn->v) / (ext[c].v + mn->v);
    }
  }
  if (expected_fringe && *expected_fringe > 0) {
    // fringe amplitude from the Fourier component at the fringe period, searched over +-5%
    double s0 = 0;
    for (double v : P) s0 += v;
    double best = 0, best_k = 0;
    for (int q = -200; q <= 200; ++q) {
      double kf = 2 * pi / *expected_fringe * (1 + 0.05 * q / 200.0);
      double re = 0, im = 0;
      for (int i = 0; i < n; ++i) {
        re += P[i] * std::cos(kf * x[i]);
        im += P[i] * std::sin(kf * x[i]);
      }
      double a = 2 * std::hypot(re, im) / s0;
      if (a > best) {
        best = a;
        best_k = kf;
      }
    }
    m.spectral_visibility = best;
    m.spectral_period = best_k > 0 ? 2 * pi / best_k : 0;
  }
  return m;
}

}  // namespace skatepark
