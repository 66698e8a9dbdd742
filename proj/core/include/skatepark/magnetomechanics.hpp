#pragma once

#include <optional>
#include <string>
#include <vector>

#include "skatepark/magnetostatics.hpp"

namespace skatepark {

// Rectangular pick-up loop in the chip plane z = 0.
struct CoilSpec {
  double x_c = 0;  // m
  double l_x = 0;  // m
  double l_y = 0;  // m

  void validate(const WireConfig& w) const;
};

struct FluxParts {
  double wires = 0;   // Wb
  double dipole = 0;  // Wb
  double total() const { return wires + dipole; }
};

// Flux with the sphere centre at (x_s, z_t). The sphere is a point dipole
// m = -(3V/2 mu0) B_wires(sphere).
FluxParts flux(const WireConfig& w, const SphereSpec& s, const CoilSpec& coil, double x_s, double z_t,
               const PhysicalConstants& k = {});

// Closed form of the wire flux, l_y * int B_z(x, 0) dx.
double wire_flux_analytic(const WireConfig& w, const CoilSpec& coil, const PhysicalConstants& k = {});

struct CouplingCoefficients {
  double eta_l = 0, eta_q = 0;
  double s0 = 0, c0 = 0;
  double sigma = 0;
  FluxParts flux0;
  double dflux_dx = 0, d2flux_dx2 = 0;  // Wb/m, Wb/m^2
};

CouplingCoefficients coupling_coefficients(const WireConfig& w, const SphereSpec& s,
                                           const CoilSpec& coil, double z_t, double sigma,
                                           const PhysicalConstants& k = {});

enum class Omega0Convention {
  cavity_frequency,  // omega_0 is the listed cavity frequency
  dressed            // hbar omega_c = hbar omega_0 sqrt(2 c0) - E_C
};

struct CavitySpec {
  double omega_c = 0;     // rad/s
  double kappa = 0;       // rad/s
  double alpha_mag = 0;   // |alpha|
  double E_C_ratio = 0;   // E_C / (hbar omega_c)
  Omega0Convention convention = Omega0Convention::cavity_frequency;

  void validate() const;
  double omega_0(double c0) const;
};

struct CouplingResult {
  double s0 = 0, c0 = 0;
  double eta_l = 0, eta_q = 0;
  double omega_0 = 0;
  double g_l = 0, g_q = 0;  // rad/s
};

// s0/c0 taken from the coefficients.
CouplingResult couplings(const CouplingCoefficients& c, const CavitySpec& cav);
// Same with the flux phase pinned to an operating point s0 (c0 = +sqrt(1 - s0^2)).
CouplingResult couplings_at(double eta_l, double eta_q, double s0, const CavitySpec& cav);

struct MeasurementStrength {
  double chi = 0;
  double bound = 0;         // 2 sqrt(t kappa)
  double adiabaticity = 0;  // g |alpha| / (2 kappa)
};
MeasurementStrength measurement_strength(double g_q, double alpha_mag, double kappa, double t);

struct CoilOptimum {
  CoilSpec coil;
  double dflux_dx = 0;  // Wb/m at the optimum
  bool on_boundary = false;
  std::vector<std::pair<double, double>> ly_curve;  // (l_y, |dPhi/dx|)
};

struct CoilBounds {
  double x_c_min = 0, x_c_max = 0;
  double l_x_min = 0, l_x_max = 0;
  double step = 0;            // m, coarse grid spacing
  double margin = 0;          // minimum clearance to the inner wires
  std::vector<double> l_y_values;  // saturation curve sample points
};

CoilOptimum optimize_linear_coil(const WireConfig& w, const SphereSpec& s, double z_t, double l_y,
                                 const CoilBounds& b, const PhysicalConstants& k = {});

}  // namespace skatepark
