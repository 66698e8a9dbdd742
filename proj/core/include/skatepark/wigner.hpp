#pragma once
#include <algorithm>
#include <cmath>

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "skatepark/constants.hpp"

namespace skatepark {

// Nodes at (i - n/2) * step, i = 0..n-1, step = 2 half / n.
struct WignerGridParams {
  int n_x = 0, n_p = 0;
  double x_extent = 0, p_extent = 0;  // half-widths, m and kg m/s

  void validate() const;
};

struct WignerGrid {
  WignerGridParams params;
  std::vector<double> values;  // row-major, index i * n_p + j (x_i, p_j)
  double norm_drift = 0;       // |integral - 1| before renormalisation
  double max_imag = 0;         // largest imaginary residue relative to max |W|

  double dx() const { return 2 * params.x_extent / params.n_x; }
  double dp() const { return 2 * params.p_extent / params.n_p; }
  double x(int i) const { return (i - params.n_x / 2) * dx(); }
  double p(int j) const { return (j - params.n_p / 2) * dp(); }
  double at(int i, int j) const { return values[std::size_t(i) * params.n_p + j]; }
  double integral() const;
  // Bicubic (Keys) interpolation; reads 0 outside the node range.
  double interpolate(double x, double p) const;
};

struct PhaseMoments {
  double norm = 0, mean_x = 0, mean_p = 0, v_x = 0, v_p = 0, c = 0;
};
PhaseMoments moments(const WignerGrid& g);

using DensityFunction = std::function<std::complex<double>(double, double)>;

// W(x,p) = (1/2 pi hbar) int dy e^{-i p y / hbar} rho(x + y/2, x - y/2), by FFT along y.
WignerGrid wigner_from_density(const DensityFunction& rho, const WignerGridParams& params,
                               const PhysicalConstants& k = {});

enum class MapKind { rotation, inflation, general };

// x' = a x + b p, p' = g x + d p
struct SymplecticMap {
  double a = 1, b = 0, g = 0, d = 1;
  MapKind kind = MapKind::general;
  // size of the terms that cancel in entries built by compose; 0 for primitive maps
  double cancel_scale = 0;

  double det() const { return a * d - b * g; }
  SymplecticMap inverse() const { return {d, -b, -g, a, kind, cancel_scale}; }
  bool symplectic(double tol = 1e-9) const {
    double sc = std::max({1.0, std::abs(a * d) + std::abs(b * g), cancel_scale});
    return std::abs(det() - 1) <= tol * sc;
  }
};

SymplecticMap rotation_map(double omega5, double t5, double mass);
SymplecticMap inflation_map(double omega6, double t6, double mass);
// second after first
SymplecticMap compose(const SymplecticMap& second, const SymplecticMap& first);
// Root of cos(w5 t) = (w5/w6) sin(w5 t) in (0, pi/(2 w5)).
double solve_t5(double omega5, double omega6);

WignerGrid transport(const WignerGrid& src, const SymplecticMap& map, const WignerGridParams& target);

struct KernelDiagnostics {
  double A1 = 0, A2 = 0;
  double B_max = 0;
  double sigma_x_ref = 0, sigma_p_ref = 0;
  bool negligible = false;  // A1, A2 << 1
};

KernelDiagnostics kernel_diagnostics(double lambda5, double omega5, double t5, double mass, double d,
                                     double sigma_d, const PhysicalConstants& k = {});
// B(kx, kp, tbar) on dimensionless wavenumbers.
double kernel_B(double kx, double kp, double tbar, double ratio);
// log of the kernel at physical wavenumbers kx (1/m) and kp (s/(kg m)).
double kernel_log(double kx, double kp, double t, double lambda, double omega, double mass,
                  const PhysicalConstants& k = {});

double blurring_width(double lambda6, double omega6, double t6, double mass,
                      const PhysicalConstants& k = {});

struct Pattern {
  std::vector<double> x;
  std::vector<double> unblurred;  // P0
  std::vector<double> density;    // after the decoherence blur
  double dx() const { return x.size() > 1 ? x[1] - x[0] : 0; }
  double second_moment() const;
};

struct PatternGridParams {
  int n = 0;
  double half_width = 0;  // m
};

// Marginal of W4 pulled back through the map, blurred by exp(-y^2/sigma^2)/(sqrt(pi) sigma).
Pattern final_pattern(const WignerGrid& w4, const SymplecticMap& map, double sigma_lambda,
                      const PatternGridParams& out, std::optional<double> expected_fringe = std::nullopt);

// Convolution with the blur kernel on a uniform grid; renormalised.
std::vector<double> blur(const std::vector<double>& p, double dx, double sigma_lambda);

struct FringeMetrics {
  double x_f = 0;  // NaN for envelope-only patterns
  double visibility = 0;
  int extrema = 0;
  bool envelope_only = true;
  double spectral_visibility = 0;  // fringe amplitude at the expected period
  double spectral_period = 0;
};

FringeMetrics fringe_metrics(const std::vector<double>& x, const std::vector<double>& P,
                             std::optional<double> expected_fringe = std::nullopt, int n_maxima = 10);

}  // namespace skatepark
