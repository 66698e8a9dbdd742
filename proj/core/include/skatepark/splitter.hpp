#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "skatepark/gaussian_state.hpp"

namespace skatepark {

// Phase coefficient of the measurement step, F(0) = Theta.
double phase_evolution(double Theta, double omega_g, double omega_sigma, double t);
// Smallest t > t_min with F(t) = 0, i.e. tan(omega_g t) = 4 Theta omega_sigma / omega_g.
double phase_root(double Theta, double omega_g, double omega_sigma, double t_min = 0);

double induced_frequency(double g_q, double alpha_mag, double mass, double sigma4,
                         const PhysicalConstants& k = {});
double omega_sigma(double mass, double sigma4, const PhysicalConstants& k = {});

struct ThetaValues {
  double printed = 0;  // c / (2 hbar)
  double scaled = 0;   // c sigma4^2 / (2 hbar v_x), the chirp in units of sigma4
};
ThetaValues theta_values(const GaussianState& s, double sigma4, const PhysicalConstants& k = {});

struct SlitGeometry {
  double d = 0;
  double sigma_d = 0;            // std of the position density of one peak
  double sigma_d_amplitude = 0;  // std of the amplitude, sqrt(2) wider
  bool resolved = false;
};

SlitGeometry slit_geometry(double chi, double p_L, double sigma4, double purity_in);
double outcome_for_separation(double d, double chi, double sigma4, double purity_in);

// Diagonal of the amplitude of a Gaussian state with the phase dropped:
// A(x, x') = exp(-(x + x')^2 / (8 v_x) - (x - x')^2 / xi^2) / sqrt(2 pi v_x).
struct GaussianAmplitude {
  double v_x = 0;
  double xi = 0;

  static GaussianAmplitude from_state(const GaussianState& s, const PhysicalConstants& k = {});
  double operator()(double x, double xp) const;
};

// Distribution of the homodyne outcome p_L for a diagonal density given in units of sigma4.
class OutcomeDistribution {
 public:
  // rho_diag(x~) normalised on the line; scale is its rough width (used to place breakpoints).
  OutcomeDistribution(std::function<double(double)> rho_diag, double scale, double chi,
                      int table_points = 16384);

  double density(double p_L) const;
  double cdf(double p_L) const;           // from the table
  double quantile(double u) const;        // inverse of the table CDF
  double mean() const { return mean_; }
  double normalization() const { return norm_; }
  double chi() const { return chi_; }
  double p_min() const { return p_.front(); }
  double p_max() const { return p_.back(); }

 private:
  std::function<double(double)> rho_;
  double scale_, chi_;
  std::vector<double> p_, pdf_, cdf_;
  double mean_ = 0, norm_ = 0;
};

double slit_density(const OutcomeDistribution& P, double d, double sigma4, double purity_in);

struct PostSelection {
  double d_min_over_sigma_d = 5;
  double d_max = 0;  // m; 0 disables the upper cut
  int max_draws = 100000;
};

// Probability that a draw lands in the post-selection window.
double range_probability(const OutcomeDistribution& P, double sigma4, double purity_in,
                         const PostSelection& w);
// Same for a fixed d interval [d_lo, d_hi].
double separation_probability(const OutcomeDistribution& P, double sigma4, double purity_in,
                              double d_lo, double d_hi);

struct SplitOutcome {
  double p_L = 0;
  SlitGeometry geometry;
  int draws = 0;
};

bool accepted(const SlitGeometry& g, const PostSelection& w);

SplitOutcome sample_outcome(const OutcomeDistribution& P, double sigma4, double purity_in,
                            const PostSelection& w, std::uint64_t seed);

// Position-basis amplitude in SI units, symmetric and real.
using Amplitude = std::function<double(double, double)>;

// Post-measurement density in SI positions, normalised to unit trace.
class SplitDensity {
 public:
  // amplitude_width: rough std of the input diagonal (m).
  SplitDensity(Amplitude A, double amplitude_width, double sigma4, double chi, double p_L,
               double decay_coeff);

  std::complex<double> operator()(double x, double xp) const;
  double trace_factor() const { return z_; }  // probability density of the outcome
  double sigma4() const { return sigma4_; }

 private:
  Amplitude A_;
  double sigma4_, chi_, pL_, decay_, z_;
};

// decay_coeff = Lambda * t, applied as exp(-decay (x - x')^2).
SplitDensity apply_split(Amplitude A, double amplitude_width, double sigma4, double chi, double p_L,
                         double decay_coeff = 0);
SplitDensity apply_split(const GaussianAmplitude& A, double sigma4, double chi, double p_L,
                         double decay_coeff = 0);

struct ResolutionBound {
  double delta_x = 0;  // sigma7 / sqrt(2 chi7)
  double weaker = 0;   // sigma7 / (2 (t7 kappa7)^(1/4))
};
ResolutionBound resolution_bound(double sigma7, double chi7, double t7, double kappa7);

}  // namespace skatepark
