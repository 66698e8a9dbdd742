#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "skatepark/errors.hpp"
#include "skatepark/magnetostatics.hpp"

namespace skatepark {

namespace {

struct Wire {
  double x, I;
};

std::array<Wire, 4> wires(const WireConfig& w) {
  return {{{-w.d_i / 2, w.I_i}, {w.d_i / 2, -w.I_i}, {-w.d_o / 2, -w.I_o}, {w.d_o / 2, w.I_o}}};
}

void check_off_wire(double dx, double dz, double scale) {
  if (dx * dx + dz * dz < 1e-24 * scale * scale) throw ValidationError("field evaluated on a wire");
}

// U = chi |B|^2 and its analytic gradient.
std::array<double, 2> energy_gradient(const WireConfig& w, const SphereSpec& s, double x, double z,
                                      const PhysicalConstants& k) {
  auto J = field_jacobian(w, x, z, k);
  double gx = 0, gz = 0;
  for (int i = 0; i < 3; ++i) {
    gx += J.B[i] * J.dB_dx[i];
    gz += J.B[i] * J.dB_dz[i];
  }
  return {2 * s.chi * gx, 2 * s.chi * gz};
}

double richardson_curvature(const std::function<double(double)>& grad, double x0, double h) {
  auto d = [&](double hh) { return (grad(x0 + hh) - grad(x0 - hh)) / (2 * hh); };
  return (4 * d(h / 2) - d(h)) / 3;
}

}  // namespace

void WireConfig::validate() const {
  std::vector<std::string> bad;
  if (!(d_i > 0)) bad.push_back("d_i must be positive");
  if (!(d_o > d_i)) bad.push_back("d_o must exceed d_i");
  if (!(I_i > 0) || !(I_o > 0)) bad.push_back("wire currents must be positive");
  if (!bad.empty()) throw ValidationError("invalid wire configuration", bad);
}

double WireConfig::B0(const PhysicalConstants& k) const { return k.mu0 * 2 * I_i / (pi * d_i); }

Vec3 field(const WireConfig& w, double x, double z, const PhysicalConstants& k) {
  return field_jacobian(w, x, z, k).B;
}

FieldJacobian field_jacobian(const WireConfig& w, double x, double z, const PhysicalConstants& k) {
  FieldJacobian J{};
  for (const auto& wi : wires(w)) {
    double dx = x - wi.x, dz = z;
    check_off_wire(dx, dz, w.d_i);
    double r2 = dx * dx + dz * dz, r4 = r2 * r2;
    double K = k.mu0 * wi.I / (2 * pi);
    J.B[0] += K * dz / r2;
    J.B[2] += -K * dx / r2;
    double sym = K * (dx * dx - dz * dz) / r4, cross = 2 * K * dx * dz / r4;
    J.dB_dx[0] += -cross;
    J.dB_dx[2] += sym;
    J.dB_dz[0] += sym;
    J.dB_dz[2] += cross;
  }
  return J;
}

double potential(const WireConfig& w, const SphereSpec& s, double x, double z,
                 const PhysicalConstants& k) {
  auto B = field(w, x, z, k);
  return s.chi * (B[0] * B[0] + B[1] * B[1] + B[2] * B[2]) + s.mass * k.g_eff * z;
}

double zeta_parameter(const WireConfig& w, const SphereSpec& s, const PhysicalConstants& k) {
  double B0 = w.B0(k);
  return 4 * k.mu0 * s.density * k.g_eff * s.radius / (3 * B0 * B0);
}

double normalized_potential(const WireConfig& w, const SphereSpec& s, double x, double z,
                            const PhysicalConstants& k) {
  auto B = field(w, x, z, k);
  double B0 = w.B0(k);
  return (B[0] * B[0] + B[1] * B[1] + B[2] * B[2]) / (B0 * B0) + zeta_parameter(w, s, k) * z / s.radius;
}

double zero_field_height(const WireConfig& w) {
  w.validate();
  double r = w.I_o / w.I_i;
  double num = w.d_o / w.d_i - r, den = r - w.d_i / w.d_o;
  if (!(num / den > 0)) throw PhysicsError("wire configuration has no field zero above the chip");
  return w.d_i / 2 * std::sqrt(num / den);
}

double zero_field_height_numeric(const WireConfig& w, const PhysicalConstants& k) {
  w.validate();
  // On the axis only B_z survives; it changes sign once at the zero.
  auto f = [&](double z) { return field(w, 0, z, k)[2]; };
  double lo = 1e-3 * w.d_i, hi = 1e3 * w.d_o;
  const int n = 4000;
  double prev = f(lo), zl = lo;
  for (int i = 1; i <= n; ++i) {
    double z = lo * std::pow(hi / lo, double(i) / n);
    double v = f(z);
    if ((prev < 0) != (v < 0)) {
      boost::uintmax_t it = 200;
      auto r = boost::math::tools::toms748_solve(f, zl, z, prev, v,
                                                 boost::math::tools::eps_tolerance<double>(52), it);
      return 0.5 * (r.first + r.second);
    }
    prev = v;
    zl = z;
  }
  throw PhysicsError("no field zero found on the axis");
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::attractive: return "attractive";
    case Regime::inverted: return "inverted";
    case Regime::flat: return "flat";
  }
  return "?";
}

TrapCharacterization characterize_trap(const WireConfig& w, const SphereSpec& s,
                                       const PhysicalConstants& k, const TrapSearch& opt) {
  w.validate();
  const double R = s.radius;
  double zlo = std::max(1.01 * R, 0.02 * w.d_i), zhi = 20 * w.d_o;
  if (opt.z_window) std::tie(zlo, zhi) = *opt.z_window;
  if (!(zhi > zlo) || !(zlo > 0)) throw ValidationError("invalid trap search window");

  auto dVdz = [&](double z) { return energy_gradient(w, s, 0, z, k)[1] + s.mass * k.g_eff; };
  auto V = [&](double z) { return potential(w, s, 0, z, k); };

  const int n = std::max(opt.samples, 16);
  double best_z = NAN, best_V = INFINITY;
  double zp = zlo, gp = dVdz(zlo);
  for (int i = 1; i <= n; ++i) {
    double z = zlo * std::pow(zhi / zlo, double(i) / n);
    double g = dVdz(z);
    if (gp < 0 && g >= 0) {
      double root;
      if (g == 0) {
        root = z;
      } else {
        boost::uintmax_t it = 200;
        auto r = boost::math::tools::toms748_solve(dVdz, zp, z, gp, g,
                                                   boost::math::tools::eps_tolerance<double>(52), it);
        root = 0.5 * (r.first + r.second);
      }
      double v = V(root);
      if (v < best_V) {
        best_V = v;
        best_z = root;
      }
    }
    zp = z;
    gp = g;
  }
  if (!std::isfinite(best_z)) throw PhysicsError("no levitation minimum in the search window");

  TrapCharacterization t;
  t.z_t = best_z;
  t.V_min = best_V;
  const double h = 1e-4 * R;
  double Uxx = richardson_curvature([&](double x) { return energy_gradient(w, s, x, best_z, k)[0]; }, 0, h);
  double Uzz = richardson_curvature([&](double z) { return energy_gradient(w, s, 0, z, k)[1]; }, best_z, h);
  if (!(Uzz > 0)) throw PhysicsError("levitation is unstable along z");
  t.omega_z = std::sqrt(Uzz / s.mass);
  t.omega_x = std::copysign(std::sqrt(std::abs(Uxx) / s.mass), Uxx);
  auto J = field_jacobian(w, 0, best_z, k);
  t.B_at_trap = J.B;
  t.dB_dx = J.dB_dx;
  if (std::abs(t.omega_x) / (2 * pi) < opt.flat_threshold_hz)
    t.regime = Regime::flat;
  else
    t.regime = t.omega_x > 0 ? Regime::attractive : Regime::inverted;
  return t;
}

double find_do_for_regime(WireConfig w, const SphereSpec& s, const RegimeTarget& target,
                          const PhysicalConstants& k, std::optional<std::pair<double, double>> bracket,
                          const TrapSearch& opt) {
  if (target.regime != Regime::flat && !(target.omega > 0))
    throw ValidationError("frequency target must be positive");
  double lo = 1.02 * w.d_i, hi = 4 * w.d_i;
  if (bracket) std::tie(lo, hi) = *bracket;
  if (!(hi > lo) || !(lo > w.d_i)) throw ValidationError("d_o bracket must lie above d_i");

  // Signed residual: x-curvature for flat, omega_x -/+ target otherwise.
  auto f = [&](double d_o) -> double {
    w.d_o = d_o;
    auto t = characterize_trap(w, s, k, opt);
    if (target.regime == Regime::flat) return t.omega_x * std::abs(t.omega_x);
    double sign = target.regime == Regime::attractive ? 1 : -1;
    return t.omega_x - sign * target.omega;
  };
  auto safe = [&](double d_o) -> double {
    try {
      return f(d_o);
    } catch (const PhysicsError&) {
      return NAN;
    }
  };

  const int n = 240;
  double xp = lo, fp = safe(lo);
  for (int i = 1; i <= n; ++i) {
    double x = lo + (hi - lo) * i / n;
    double fx = safe(x);
    if (std::isfinite(fp) && std::isfinite(fx) && (fp < 0) != (fx < 0)) {
      double a = xp, b = x, fa = fp;
      for (int it = 0; it < 200 && (b - a) > 1e-13 * b; ++it) {
        double m = 0.5 * (a + b), fm = f(m);
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      return 0.5 * (a + b);
    }
    xp = x;
    fp = fx;
  }
  throw PhysicsError(std::string("no d_o gives the requested ") + to_string(target.regime) + " trap");
}

CriticalFieldReport critical_field_check(const WireConfig& w, const SphereSpec& s, double z_t,
                                         const PhysicalConstants& k, int n_points) {
  CriticalFieldReport r;
  for (int i = 0; i < n_points; ++i) {
    double a = 2 * pi * i / n_points;
    auto B = field(w, s.radius * std::cos(a), z_t + s.radius * std::sin(a), k);
    r.max_field = std::max(r.max_field, std::sqrt(B[0] * B[0] + B[1] * B[1] + B[2] * B[2]));
  }
  r.ratio = s.Bc1 > 0 ? r.max_field / s.Bc1 : (r.max_field > 0 ? INFINITY : 0);
  r.exceeded = r.ratio >= 1;
  return r;
}

}  // namespace skatepark
