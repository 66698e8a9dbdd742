#pragma once

#include <array>
#include <utility>
#include <vector>

#include "skatepark/constants.hpp"

namespace skatepark {

using Vec3 = std::array<double, 3>;

struct SphereSpec {
  double radius = 0;   // m
  double density = 0;  // kg/m^3
  double mass = 0;     // kg
  double volume = 0;   // m^3
  double chi = 0;      // J/T^2, 3V/(4 mu0)
  double Bc1 = 0;      // T
  double Tc = 0;       // K
};

SphereSpec make_sphere(double radius, double density, double Bc1, double Tc,
                       const PhysicalConstants& k = {});
// Sphere of a given mass; radius follows from the density.
SphereSpec sphere_from_mass(double mass, double density, const PhysicalConstants& k = {});

// Displacement noise spectrum from (frequency, sqrt(S)) anchors.
// Interpolated linearly in log-log; held constant outside the table.
class VibrationPsd {
 public:
  VibrationPsd() = default;
  VibrationPsd(std::vector<double> freq_hz, std::vector<double> sqrt_s);

  // S_xx in m^2/Hz at angular frequency omega.
  double S(double omega) const;
  bool empty() const { return f_.empty(); }
  const std::vector<double>& freq_hz() const { return f_; }
  const std::vector<double>& sqrt_s() const { return a_; }
  VibrationPsd scaled(double amplitude_factor) const;

 private:
  std::vector<double> f_, a_;
};

struct EnvironmentSpec {
  double T_env = 0;       // K
  double T_internal = 0;  // K
  double pressure = 0;    // Pa
  double gas_molecule_mass = helium_mass;
  VibrationPsd vib_psd;
  double eps_re_factor = 1;
  double eps_im_factor = 1;
};

enum class SurfaceKind { superconductor, normal_metal };

struct SurfaceSpec {
  SurfaceKind kind = SurfaceKind::superconductor;
  double lambda_L0 = 0;    // m
  double sigma_metal = 0;  // S/m
  double Tc_surface = 0;   // K
};

void validate(const SphereSpec&);
void validate(const EnvironmentSpec&);
void validate(const SurfaceSpec&);

}  // namespace skatepark
