#pragma once

#include <vector>

#include "skatepark/specs.hpp"

namespace skatepark {

// Time for gravity-induced decoherence of a superposition of size R.
double tau_G(const SphereSpec& s, const PhysicalConstants& k = {});

struct GqrRow {
  double mass;    // kg
  double radius;  // m
  double tau;     // s
};

// Log-spaced masses in [mass_min, mass_max] (kg) at fixed density.
std::vector<GqrRow> gqr_curve(double density, double mass_min, double mass_max, int n_points,
                              const PhysicalConstants& k = {});

// Mass where tau_G equals the given time, at fixed density.
double mass_for_tau(double density, double tau, const PhysicalConstants& k = {});

}  // namespace skatepark
