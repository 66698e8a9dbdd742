#include <cmath>

#include "skatepark/errors.hpp"
#include "skatepark/gqr.hpp"

namespace skatepark {

double tau_G(const SphereSpec& s, const PhysicalConstants& k) {
  validate(s);
  return 2 * s.radius * k.h / (k.G * s.mass * s.mass);
}

std::vector<GqrRow> gqr_curve(double density, double mass_min, double mass_max, int n_points,
                              const PhysicalConstants& k) {
  if (!(mass_min > 0) || !(mass_max > mass_min)) throw ValidationError("mass range must be positive and increasing");
  if (n_points < 2) throw ValidationError("gqr curve needs at least two points");
  if (!(density > 0)) throw ValidationError("density must be positive");
  std::vector<GqrRow> rows;
  rows.reserve(n_points);
  double l0 = std::log(mass_min), l1 = std::log(mass_max);
  for (int i = 0; i < n_points; ++i) {
    double m = i == n_points - 1 ? mass_max : std::exp(l0 + (l1 - l0) * i / (n_points - 1));
    if (i == 0) m = mass_min;
    auto s = sphere_from_mass(m, density, k);
    rows.push_back({s.mass, s.radius, tau_G(s, k)});
  }
  return rows;
}

double mass_for_tau(double density, double tau, const PhysicalConstants& k) {
  if (!(density > 0) || !(tau > 0)) throw ValidationError("density and tau must be positive");
  double a = 2 * k.h / k.G * std::cbrt(3 / (4 * pi * density));
  return std::pow(a / tau, 0.6);
}

}  // namespace skatepark
