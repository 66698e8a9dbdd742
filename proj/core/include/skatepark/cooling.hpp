#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "skatepark/gaussian_state.hpp"
#include "skatepark/specs.hpp"

namespace skatepark {

struct CoolingSetup {
  double omega_1 = 0;    // trap frequency, rad/s
  double kappa_1 = 0;    // cavity decay, rad/s
  double g_l = 0;        // linear single-photon coupling, rad/s
  double alpha_1 = 0;    // |alpha|
  double detuning = 0;   // shifted detuning, rad/s
  double n0 = 0;         // initial phonons
  double t1 = 0;         // s
  double gamma_heat = 0; // extra heating, 1/s

  void validate() const;
  double adiabaticity() const { return g_l * alpha_1 / (2 * kappa_1); }
};

struct SidebandRates {
  double A_minus = 0, A_plus = 0;
  bool cooling() const { return A_minus > A_plus; }
};

SidebandRates sideband_rates(const CoolingSetup& s);
double phonon_number(const CoolingSetup& s, double t);
double steady_state_phonons(const CoolingSetup& s);
GaussianState initial_state(const CoolingSetup& s, const SphereSpec& sphere,
                            const PhysicalConstants& k = {});

// Mean-field problem before the shift: drive E, bare detuning.
struct MeanFieldInput {
  double omega_1 = 0, kappa_1 = 0, g_l = 0;
  double drive = 0;          // E_1, 1/s
  double bare_detuning = 0;  // rad/s
};

struct MeanFieldSolution {
  std::complex<double> alpha;
  double beta = 0;
  double detuning = 0;  // shifted
  int iterations = 0;
};

// Steady state of  iE - (D' + i kappa) a + g a (b + b*) = 0,  omega b + g |a|^2 = 0.
MeanFieldSolution mean_fields(const MeanFieldInput& in);
// Residuals of both equations, relative to the drive (first) and to omega |b| (second).
std::array<double, 2> mean_field_residuals(const MeanFieldInput& in, const MeanFieldSolution& s);
// Drive and bare detuning that give the requested |alpha| and shifted detuning.
MeanFieldInput back_solve_drive(double omega_1, double kappa_1, double g_l, double alpha_mag,
                                double shifted_detuning);

}  // namespace skatepark
