#include <array>
#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "skatepark/cooling.hpp"
#include "skatepark/errors.hpp"

namespace skatepark {

void CoolingSetup::validate() const {
  std::vector<std::string> bad;
  if (!(omega_1 > 0)) bad.push_back("omega_1 must be positive");
  if (!(kappa_1 > 0)) bad.push_back("kappa_1 must be positive");
  if (!std::isfinite(g_l)) bad.push_back("g_l must be finite");
  if (!(alpha_1 >= 0)) bad.push_back("alpha_1 must be >= 0");
  if (!(n0 >= 0)) bad.push_back("n0 must be >= 0");
  if (!(t1 >= 0)) bad.push_back("t1 must be >= 0");
  if (!(gamma_heat >= 0)) bad.push_back("gamma_heat must be >= 0");
  if (!bad.empty()) throw ValidationError("invalid cooling setup", bad);
}

SidebandRates sideband_rates(const CoolingSetup& s) {
  s.validate();
  const double G2 = 2 * s.g_l * s.g_l * s.alpha_1 * s.alpha_1 * s.kappa_1;
  const double k2 = s.kappa_1 * s.kappa_1;
  auto lor = [&](double x) { return G2 / (x * x + k2); };
  return {lor(s.detuning + s.omega_1), lor(s.detuning - s.omega_1) + s.gamma_heat};
}

double steady_state_phonons(const CoolingSetup& s) {
  auto r = sideband_rates(s);
  if (!r.cooling()) throw PhysicsError("sideband rates give no net cooling");
  return r.A_plus / (r.A_minus - r.A_plus);
}

double phonon_number(const CoolingSetup& s, double t) {
  if (!(t >= 0)) throw ValidationError("time must be >= 0");
  auto r = sideband_rates(s);
  if (!r.cooling()) throw PhysicsError("sideband rates give no net cooling");
  double nss = r.A_plus / (r.A_minus - r.A_plus);
  return nss + (s.n0 - nss) * std::exp(-(r.A_minus - r.A_plus) * t);
}

GaussianState initial_state(const CoolingSetup& s, const SphereSpec& sphere,
                            const PhysicalConstants& k) {
  double n = phonon_number(s, s.t1);
  double sigma = std::sqrt(k.hbar / (2 * sphere.mass * s.omega_1));
  return GaussianState::thermal(sigma, n, k);
}

MeanFieldSolution mean_fields(const MeanFieldInput& in) {
  if (!(in.omega_1 > 0) || !(in.kappa_1 > 0)) throw ValidationError("mean fields need omega_1, kappa_1 > 0");
  // n = |alpha|^2 solves h(n) = n ((D' + s n)^2 + kappa^2) - E^2 = 0, s = 2 g^2 / omega.
  // h is a cubic; between its critical points it is monotone, so the lowest root is bracketed
  // by the first candidate where h turns non-negative (the branch reached by ramping the drive).
  const double sh = 2 * in.g_l * in.g_l / in.omega_1;
  const double D0 = in.bare_detuning, E2 = in.drive * in.drive, k2 = in.kappa_1 * in.kappa_1;
  auto h = [&](double n) {
    double D = D0 + sh * n;
    return n * (D * D + k2) - E2;
  };
  const double n_hi = E2 / k2;
  std::vector<double> cand;
  if (sh != 0) {
    // h'(n) = 3 s^2 n^2 + 4 D' s n + D'^2 + kappa^2
    double A = 3 * sh * sh, B = 4 * D0 * sh, C = D0 * D0 + k2, disc = B * B - 4 * A * C;
    if (disc > 0) {
      double r = std::sqrt(disc);
      for (double c : {(-B - r) / (2 * A), (-B + r) / (2 * A)})
        if (c > 0 && c < n_hi) cand.push_back(c);
      std::sort(cand.begin(), cand.end());
    }
  }
  cand.push_back(n_hi);
  MeanFieldSolution s;
  double n = 0;
  if (E2 > 0) {
    double lo = 0;
    for (double c : cand) {
      if (h(c) >= 0) {
        std::uintmax_t it = 10000;
        auto tol = boost::math::tools::eps_tolerance<double>(52);
        auto r = boost::math::tools::toms748_solve(h, lo, c, h(lo), h(c), tol, it);
        if (it >= 10000) throw PhysicsError("mean-field iteration did not converge");
        n = 0.5 * (r.first + r.second);
        s.iterations = int(it);
        break;
      }
      lo = c;
    }
  }
  s.detuning = D0 + sh * n;
  s.alpha = std::complex<double>(0, in.drive) / std::complex<double>(s.detuning, in.kappa_1);
  s.beta = -in.g_l * std::norm(s.alpha) / in.omega_1;
  return s;
}

std::array<double, 2> mean_field_residuals(const MeanFieldInput& in, const MeanFieldSolution& s) {
  using C = std::complex<double>;
  C r1 = C(0, in.drive) - C(in.bare_detuning, in.kappa_1) * s.alpha + in.g_l * s.alpha * (2 * s.beta);
  double r2 = in.omega_1 * s.beta + in.g_l * std::norm(s.alpha);
  double scale1 = std::max(std::abs(in.drive), 1e-300);
  double scale2 = std::max(in.g_l * std::norm(s.alpha), 1e-300);
  return {std::abs(r1) / scale1, std::abs(r2) / scale2};
}

MeanFieldInput back_solve_drive(double omega_1, double kappa_1, double g_l, double alpha_mag,
                                double shifted_detuning) {
  MeanFieldInput in;
  in.omega_1 = omega_1;
  in.kappa_1 = kappa_1;
  in.g_l = g_l;
  in.bare_detuning = shifted_detuning - 2 * g_l * g_l * alpha_mag * alpha_mag / omega_1;
  in.drive = alpha_mag * std::hypot(shifted_detuning, kappa_1);
  return in;
}

}  // namespace skatepark
