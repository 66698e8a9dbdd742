#pragma once

#include <array>
#include <string>
#include <vector>

#include "skatepark/specs.hpp"

namespace skatepark {

double lambda_gravity(const SphereSpec& s, const PhysicalConstants& k = {});

// Short-wavelength gas collision rate (1/s).
double gamma_gas(const SphereSpec& s, const EnvironmentSpec& e, const PhysicalConstants& k = {});

struct BlackbodyRates {
  double scatter = 0, emit = 0, absorb = 0;
  double sum() const { return scatter + emit + absorb; }
};
BlackbodyRates lambda_blackbody(const SphereSpec& s, const EnvironmentSpec& e,
                                const PhysicalConstants& k = {});

// Trap vibrations; exactly 0 for omega == 0.
double lambda_vibration(const SphereSpec& s, const EnvironmentSpec& e, double omega,
                        const PhysicalConstants& k = {});

struct SurfaceTerm {
  double lambda = 0;
  double london_length = 0;  // m, superconductor only
  double skin_depth = 0;     // m
  std::vector<std::string> warnings;
};

// Field fluctuations of a nearby surface. B and dB_dx are the applied field and its x
// derivative at the sphere centre. omega == 0 uses the quasi-static limit of coth/skin depth.
SurfaceTerm lambda_surface(const SphereSpec& s, const EnvironmentSpec& e, const SurfaceSpec& surf,
                           double z_t, double omega, const Vec3& B, const Vec3& dB_dx,
                           const PhysicalConstants& k = {});

struct LocalizationBudget {
  double lambda_G = 0;
  double bb_scatter = 0, bb_emit = 0, bb_absorb = 0;
  double lambda_vib = 0;
  double lambda_surface = 0;
  double gamma_gas = 0;  // reported separately, never added to the total
  bool include_gravity = false;
  double omega = 0;
};

LocalizationBudget make_budget(const SphereSpec& s, const EnvironmentSpec& e, double omega,
                               bool include_gravity, double lambda_surface = 0,
                               const PhysicalConstants& k = {});

double step_budget(const LocalizationBudget& b);

}  // namespace skatepark
