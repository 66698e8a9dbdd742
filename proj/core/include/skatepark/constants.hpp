#pragma once

#include <numbers>

namespace skatepark {

inline constexpr double pi = std::numbers::pi;
inline constexpr double amu = 1.66053906660e-27;
inline constexpr double helium_mass = 4.002602 * amu;
inline constexpr double pa_per_mbar = 100.0;

// CODATA 2018.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;
  double h = 6.62607015e-34;
  double G = 6.67430e-11;
  double mu0 = 1.25663706212e-6;
  double kB = 1.380649e-23;
  double c = 299792458.0;
  double g_eff = 9.81;  // already multiplied by the chip inclination factor
  double e_charge = 1.602176634e-19;
  double m_electron = 9.1093837015e-31;
  double Phi0 = 2.067833848e-15;

  void validate() const;
};

}  // namespace skatepark
