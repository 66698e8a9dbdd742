#pragma once

#include <optional>
#include <utility>

#include "skatepark/specs.hpp"

namespace skatepark {

// Four infinite wires along y in the plane z = 0. Inner pair: +I_i at x = -d_i/2,
// -I_i at +d_i/2. Outer pair with the opposite sense: -I_o at -d_o/2, +I_o at +d_o/2.
struct WireConfig {
  double d_i = 0, d_o = 0;  // m
  double I_i = 0, I_o = 0;  // A

  void validate() const;
  double B0(const PhysicalConstants& k = {}) const;
};

Vec3 field(const WireConfig& w, double x, double z, const PhysicalConstants& k = {});

struct FieldJacobian {
  Vec3 B, dB_dx, dB_dz;
};
FieldJacobian field_jacobian(const WireConfig& w, double x, double z, const PhysicalConstants& k = {});

double potential(const WireConfig& w, const SphereSpec& s, double x, double z,
                 const PhysicalConstants& k = {});
// V / (chi B0^2) = |B/B0|^2 + zeta z/R
double normalized_potential(const WireConfig& w, const SphereSpec& s, double x, double z,
                            const PhysicalConstants& k = {});
double zeta_parameter(const WireConfig& w, const SphereSpec& s, const PhysicalConstants& k = {});

// Height of the field zero above the centre, closed form and by root finding.
double zero_field_height(const WireConfig& w);
double zero_field_height_numeric(const WireConfig& w, const PhysicalConstants& k = {});

enum class Regime { attractive, inverted, flat };
const char* to_string(Regime r);

struct TrapSearch {
  double flat_threshold_hz = 0.5;
  int samples = 1500;
  std::optional<std::pair<double, double>> z_window;  // m
};

struct TrapCharacterization {
  double z_t = 0;
  double omega_x = 0;  // signed, negative for an inverted potential
  double omega_z = 0;
  double V_min = 0;
  Vec3 B_at_trap{};
  Vec3 dB_dx{};
  Regime regime = Regime::flat;
};

TrapCharacterization characterize_trap(const WireConfig& w, const SphereSpec& s,
                                       const PhysicalConstants& k = {}, const TrapSearch& opt = {});

struct RegimeTarget {
  Regime regime = Regime::flat;
  double omega = 0;  // magnitude, ignored for flat
};

double find_do_for_regime(WireConfig tmpl, const SphereSpec& s, const RegimeTarget& target,
                          const PhysicalConstants& k = {},
                          std::optional<std::pair<double, double>> bracket = std::nullopt,
                          const TrapSearch& opt = {});

struct CriticalFieldReport {
  double max_field = 0;  // T
  double ratio = 0;      // max_field / Bc1
  bool exceeded = false;
};

CriticalFieldReport critical_field_check(const WireConfig& w, const SphereSpec& s, double z_t,
                                         const PhysicalConstants& k = {}, int n_points = 64);

}  // namespace skatepark
