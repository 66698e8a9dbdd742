#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "skatepark/errors.hpp"
#include "skatepark/magnetomechanics.hpp"

namespace skatepark {

namespace {

using GL = boost::math::quadrature::gauss<double, 20>;

// Fixed composite Gauss-Legendre: the node set does not depend on the integrand, so
// flux differences between nearby sphere positions stay smooth.
template <class F>
double composite(F&& f, double a, double b, int panels) {
  double sum = 0, h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) sum += GL::integrate(f, a + i * h, a + (i + 1) * h);
  return sum;
}

int panel_count(double length, double scale) {
  return std::clamp(int(std::ceil(4 * length / scale)), 2, 400);
}

}  // namespace

void CoilSpec::validate(const WireConfig& w) const {
  std::vector<std::string> bad;
  if (!(l_x > 0) || !(l_y > 0)) bad.push_back("coil extents must be positive");
  if (!(std::abs(x_c) + l_x / 2 < w.d_i / 2)) bad.push_back("coil must lie between the inner wires");
  if (!bad.empty()) throw ValidationError("invalid coil", bad);
}

double wire_flux_analytic(const WireConfig& w, const CoilSpec& coil, const PhysicalConstants& k) {
  // At z = 0 a wire at x_w gives B_z = -mu0 I / (2 pi (x - x_w)).
  const double x1 = coil.x_c - coil.l_x / 2, x2 = coil.x_c + coil.l_x / 2;
  const std::array<std::pair<double, double>, 4> ws{
      {{-w.d_i / 2, w.I_i}, {w.d_i / 2, -w.I_i}, {-w.d_o / 2, -w.I_o}, {w.d_o / 2, w.I_o}}};
  double sum = 0;
  for (auto [xw, I] : ws) sum += -k.mu0 * I / (2 * pi) * std::log(std::abs(x2 - xw) / std::abs(x1 - xw));
  return sum * coil.l_y;
}

FluxParts flux(const WireConfig& w, const SphereSpec& s, const CoilSpec& coil, double x_s, double z_t,
               const PhysicalConstants& k) {
  w.validate();
  coil.validate(w);
  if (!(z_t > s.radius)) throw ValidationError("sphere must sit above the chip (z_t > R)");
  FluxParts out;
  const double x1 = coil.x_c - coil.l_x / 2, x2 = coil.x_c + coil.l_x / 2;

  auto bz_chip = [&](double x) { return field(w, x, 0, k)[2]; };
  double err = 0;
  out.wires = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(bz_chip, x1, x2, 10, 1e-12, &err) *
              coil.l_y;

  const Vec3 Bs = field(w, x_s, z_t, k);
  const double mcoef = -3 * s.volume / (2 * k.mu0);
  const double mx = mcoef * Bs[0], mz = mcoef * Bs[2];
  const double pre = k.mu0 / (4 * pi);
  auto bz_dip = [&](double x, double y) {
    double rx = x - x_s, ry = y, rz = -z_t;
    double r2 = rx * rx + ry * ry + rz * rz, r = std::sqrt(r2);
    double mr = mx * rx + mz * rz;
    return pre * (3 * rz * mr / (r2 * r2 * r) - mz / (r2 * r));
  };
  const int nx = panel_count(coil.l_x, z_t), ny = panel_count(coil.l_y, z_t);
  out.dipole = composite(
      [&](double x) { return composite([&](double y) { return bz_dip(x, y); }, -coil.l_y / 2, coil.l_y / 2, ny); },
      x1, x2, nx);
  if (!std::isfinite(out.dipole) || !std::isfinite(out.wires)) throw PhysicsError("flux quadrature failed");
  return out;
}

CouplingCoefficients coupling_coefficients(const WireConfig& w, const SphereSpec& s,
                                           const CoilSpec& coil, double z_t, double sigma,
                                           const PhysicalConstants& k) {
  if (!(sigma > 0)) throw ValidationError("coupling length scale must be positive");
  CouplingCoefficients c;
  c.sigma = sigma;
  c.flux0 = flux(w, s, coil, 0, z_t, k);
  const double phase = pi * c.flux0.total() / k.Phi0;
  c.s0 = std::sin(phase);
  c.c0 = std::cos(phase);

  // The wire part does not move with the sphere, so only the dipole part is differenced.
  const double h = 1e-3 * s.radius;
  auto F = [&](double x) { return flux(w, s, coil, x, z_t, k).dipole; };
  const double f0 = c.flux0.dipole;
  const double fp = F(h), fm = F(-h), fp2 = F(h / 2), fm2 = F(-h / 2);
  const double d1h = (fp - fm) / (2 * h), d1h2 = (fp2 - fm2) / h;
  const double d2h = (fp - 2 * f0 + fm) / (h * h), d2h2 = (fp2 - 2 * f0 + fm2) / (h * h / 4);
  c.dflux_dx = (4 * d1h2 - d1h) / 3;
  c.d2flux_dx2 = (4 * d2h2 - d2h) / 3;
  c.eta_l = sigma / k.Phi0 * c.dflux_dx;
  c.eta_q = sigma * sigma / k.Phi0 * c.d2flux_dx2;
  return c;
}

void CavitySpec::validate() const {
  std::vector<std::string> bad;
  if (!(omega_c > 0)) bad.push_back("cavity frequency must be positive");
  if (!(kappa > 0)) bad.push_back("cavity decay must be positive");
  if (!(alpha_mag >= 0)) bad.push_back("cavity amplitude must be >= 0");
  if (!(E_C_ratio >= 0)) bad.push_back("E_C ratio must be >= 0");
  if (!bad.empty()) throw ValidationError("invalid cavity", bad);
}

double CavitySpec::omega_0(double c0) const {
  if (convention == Omega0Convention::cavity_frequency) return omega_c;
  return omega_c * (1 + E_C_ratio) / std::sqrt(2 * c0);
}

CouplingResult couplings_at(double eta_l, double eta_q, double s0, const CavitySpec& cav) {
  cav.validate();
  if (!(std::abs(s0) <= 1)) throw ValidationError("s0 must lie in [-1, 1]");
  double c0 = std::sqrt(1 - s0 * s0);
  if (!(c0 > 0)) throw PhysicsError("flux bias at half a quantum (c0 = 0)");
  CouplingResult r;
  r.s0 = s0;
  r.c0 = c0;
  r.eta_l = eta_l;
  r.eta_q = eta_q;
  r.omega_0 = cav.omega_0(c0);
  const double sgn = 1;  // c0 > 0
  const double rc = std::sqrt(2 * c0);
  r.g_l = -pi * r.omega_0 * s0 * sgn / rc * eta_l;
  r.g_q = -r.omega_0 * sgn / 2 *
          (pi * pi * (1 + c0 * c0) / (rc * rc * rc) * eta_l * eta_l + pi * s0 / rc * eta_q);
  return r;
}

CouplingResult couplings(const CouplingCoefficients& c, const CavitySpec& cav) {
  if (!(c.c0 > 0)) throw PhysicsError("flux bias past half a quantum (c0 <= 0)");
  return couplings_at(c.eta_l, c.eta_q, c.s0, cav);
}

MeasurementStrength measurement_strength(double g_q, double alpha_mag, double kappa, double t) {
  if (!(kappa > 0) || !(t >= 0)) throw ValidationError("measurement strength needs kappa > 0, t >= 0");
  MeasurementStrength m;
  m.chi = std::abs(g_q) * alpha_mag * std::sqrt(2 * t / kappa);
  m.bound = 2 * std::sqrt(t * kappa);
  m.adiabaticity = std::abs(g_q) * alpha_mag / (2 * kappa);
  return m;
}

CoilOptimum optimize_linear_coil(const WireConfig& w, const SphereSpec& s, double z_t, double l_y,
                                 const CoilBounds& b, const PhysicalConstants& k) {
  if (!(b.step > 0) || !(b.x_c_max >= b.x_c_min) || !(b.l_x_max >= b.l_x_min) || !(b.l_x_min > 0))
    throw ValidationError("invalid coil search bounds");
  auto fits = [&](double xc, double lx) { return std::abs(xc) + lx / 2 <= w.d_i / 2 - b.margin; };
  auto objective = [&](double xc, double lx, double ly) {
    CoilSpec c{xc, lx, ly};
    return std::abs(coupling_coefficients(w, s, c, z_t, 1.0, k).dflux_dx);
  };

  double best = -1, bx = 0, bl = 0;
  auto scan = [&](double x0, double x1, double l0, double l1, double step) {
    for (double xc = x0; xc <= x1 + 1e-9 * step; xc += step)
      for (double lx = l0; lx <= l1 + 1e-9 * step; lx += step) {
        if (lx < b.l_x_min || !fits(xc, lx)) continue;
        double v = objective(xc, lx, l_y);
        if (v > best) {
          best = v;
          bx = xc;
          bl = lx;
        }
      }
  };
  scan(b.x_c_min, b.x_c_max, b.l_x_min, b.l_x_max, b.step);
  if (best < 0) throw ValidationError("no admissible coil inside the bounds");
  double step = b.step;
  for (int r = 0; r < 3; ++r) {
    double x0 = std::max(b.x_c_min, bx - step), x1 = std::min(b.x_c_max, bx + step);
    double l0 = std::max(b.l_x_min, bl - step), l1 = std::min(b.l_x_max, bl + step);
    step /= 4;
    scan(x0, x1, l0, l1, step);
  }

  CoilOptimum out;
  out.coil = {bx, bl, l_y};
  out.dflux_dx = best;
  const double tol = 1e-6 * b.step;
  out.on_boundary = bx <= b.x_c_min + tol || bx >= b.x_c_max - tol || bl <= b.l_x_min + tol ||
                    bl >= b.l_x_max - tol || !fits(bx + b.step / 4, bl + b.step / 4);
  for (double ly : b.l_y_values) out.ly_curve.push_back({ly, objective(bx, bl, ly)});
  return out;
}

}  // namespace skatepark
