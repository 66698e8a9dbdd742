#include <cmath>

#include <boost/math/special_functions/zeta.hpp>

#include "skatepark/decoherence.hpp"
#include "skatepark/errors.hpp"

namespace skatepark {

double lambda_gravity(const SphereSpec& s, const PhysicalConstants& k) {
  validate(s);
  return k.G * s.mass * s.mass / (2 * s.radius * s.radius * s.radius * k.hbar);
}

double gamma_gas(const SphereSpec& s, const EnvironmentSpec& e, const PhysicalConstants& k) {
  validate(e);
  if (!(e.T_env > 0)) throw ValidationError("gas collision rate needs T_env > 0");
  return 16 * pi * std::sqrt(2 * pi) / std::sqrt(3.0) * e.pressure * s.radius * s.radius /
         std::sqrt(3 * e.gas_molecule_mass * k.kB * e.T_env);
}

BlackbodyRates lambda_blackbody(const SphereSpec& s, const EnvironmentSpec& e,
                                const PhysicalConstants& k) {
  validate(e);
  const double R = s.radius;
  auto kt = [&](double T) { return k.kB * T / (k.hbar * k.c); };
  const double zeta9 = boost::math::zeta(9.0);
  BlackbodyRates r;
  r.scatter = 40320.0 * 8 * zeta9 / (9 * pi) * k.c * std::pow(R, 6) * std::pow(kt(e.T_env), 9) *
              e.eps_re_factor * e.eps_re_factor;
  const double pre = 16 * std::pow(pi, 5) / 189 * k.c * R * R * R * e.eps_im_factor;
  r.emit = pre * std::pow(kt(e.T_internal), 6);
  r.absorb = pre * std::pow(kt(e.T_env), 6);
  return r;
}

double lambda_vibration(const SphereSpec& s, const EnvironmentSpec& e, double omega,
                        const PhysicalConstants& k) {
  if (!(omega >= 0)) throw ValidationError("trap frequency must be >= 0");
  if (omega == 0) return 0;
  double w2 = omega * omega;
  return s.mass * s.mass * w2 * w2 * e.vib_psd.S(omega) / (2 * k.hbar * k.hbar);
}

SurfaceTerm lambda_surface(const SphereSpec& s, const EnvironmentSpec& e, const SurfaceSpec& surf,
                           double z_t, double omega, const Vec3& B, const Vec3& dB,
                           const PhysicalConstants& k) {
  validate(surf);
  if (!(z_t > 0)) throw ValidationError("surface distance must be positive");
  if (!(omega >= 0)) throw ValidationError("trap frequency must be >= 0");
  const double T = e.T_env;
  if (!(T > 0)) throw ValidationError("surface noise needs T_env > 0");
  SurfaceTerm out;
  const double chi2 = s.chi * s.chi;
  const double B2 = B[0] * B[0] + B[1] * B[1] + B[2] * B[2];

  if (surf.kind == SurfaceKind::normal_metal) {
    // mu0 chi^2 kB T |B|^2 / (hbar^2 omega z^3 delta^2) with delta^2 = 2/(omega mu0 sigma),
    // so omega cancels.
    out.skin_depth = omega > 0 ? std::sqrt(2 / (omega * k.mu0 * surf.sigma_metal)) : INFINITY;
    out.lambda = k.mu0 * chi2 * k.kB * T * B2 * k.mu0 * surf.sigma_metal /
                 (2 * k.hbar * k.hbar * z_t * z_t * z_t);
    if (omega > 0 && !(z_t < out.skin_depth)) out.warnings.push_back("metal surface: z_t not below skin depth");
    return out;
  }

  if (!(T < surf.Tc_surface)) throw PhysicsError("surface is not superconducting at T_env");
  const double tr = std::pow(T / surf.Tc_surface, 4);
  const double ns = 1 - tr, nn = tr;
  out.london_length = surf.lambda_L0 / std::sqrt(ns);
  // coth(hbar w / 2kT) / delta^2 = coth(x) * w mu0 sigma nn / 2; finite as w -> 0.
  double coth_over_d2;
  if (omega > 0) {
    double x = k.hbar * omega / (2 * k.kB * T);
    coth_over_d2 = omega * k.mu0 * surf.sigma_metal * nn / (2 * std::tanh(x));
    out.skin_depth = std::sqrt(2 / (omega * k.mu0 * surf.sigma_metal * nn));
    if (!(out.london_length < out.skin_depth)) out.warnings.push_back("surface: London length not below skin depth");
    if (!(z_t < k.c / omega)) out.warnings.push_back("surface: z_t not below trap wavelength");
  } else {
    coth_over_d2 = k.kB * T * k.mu0 * surf.sigma_metal * nn / k.hbar;
    out.skin_depth = INFINITY;
  }
  const double l3 = std::pow(out.london_length, 3);
  const double bracket = dB[0] * dB[0] + dB[1] * dB[1] + 2 * dB[2] * dB[2] +
                         5 / (z_t * z_t) * (0.75 * B[0] * B[0] + 0.25 * B[1] * B[1] + B[2] * B[2]);
  out.lambda = 3 * k.mu0 * chi2 / (64 * pi * k.hbar) * coth_over_d2 * l3 / std::pow(z_t, 4) * bracket;
  return out;
}

LocalizationBudget make_budget(const SphereSpec& s, const EnvironmentSpec& e, double omega,
                               bool include_gravity, double lambda_surf,
                               const PhysicalConstants& k) {
  LocalizationBudget b;
  b.lambda_G = lambda_gravity(s, k);
  auto bb = lambda_blackbody(s, e, k);
  b.bb_scatter = bb.scatter;
  b.bb_emit = bb.emit;
  b.bb_absorb = bb.absorb;
  b.lambda_vib = lambda_vibration(s, e, omega, k);
  b.lambda_surface = lambda_surf;
  b.gamma_gas = e.T_env > 0 ? gamma_gas(s, e, k) : 0;
  b.include_gravity = include_gravity;
  b.omega = omega;
  return b;
}

double step_budget(const LocalizationBudget& b) {
  double t = b.bb_scatter + b.bb_emit + b.bb_absorb + b.lambda_vib + b.lambda_surface;
  if (b.include_gravity) t += b.lambda_G;
  return t;
}

}  // namespace skatepark
