#pragma once

#include <string>
#include <vector>

#include "skatepark/constants.hpp"

namespace skatepark {

// Centre-of-mass Gaussian state by its second moments. det = v_x v_p - c^2 is carried
// alongside because after a boost and a long free flight the direct product cancels
// to nothing in double precision; it is updated through d(det)/dt = 2 hbar^2 Lambda v_x.
struct GaussianState {
  double v_x = 0;  // m^2
  double v_p = 0;  // (kg m/s)^2
  double c = 0;    // kg m^2/s, symmetrised <xp + px>/2
  double det = 0;

  static GaussianState from_moments(double v_x, double v_p, double c);
  static GaussianState from_moments(double v_x, double v_p, double c, double det);
  static GaussianState ground(double mass, double omega, const PhysicalConstants& k = {});
  // v_x = sigma^2 (2n+1), v_p = hbar^2/(4 sigma^2) (2n+1)
  static GaussianState thermal(double sigma, double nbar, const PhysicalConstants& k = {});
};

enum class SegmentKind { harmonic, inverted, free };

struct QuadraticSegment {
  SegmentKind kind = SegmentKind::free;
  double omega = 0;     // rad/s
  double duration = 0;  // s
  double lambda_total = 0;

  void validate() const;
};

enum class HeisenbergPolicy { error, warn };

inline constexpr double heisenberg_slack = 1e-9;

// Throws on det below hbar^2/4 beyond the slack.
void check_heisenberg(const GaussianState& s, const PhysicalConstants& k = {});

double purity(const GaussianState& s, const PhysicalConstants& k = {});
double coherence_length(const GaussianState& s, const PhysicalConstants& k = {});
double coherence_growth_speed(const GaussianState& s, double mass, const PhysicalConstants& k = {});
double ballistic_fringe_speed(double mass, double d, const PhysicalConstants& k = {});

// Phase-space map of a segment, x(t) = a x0 + b p0, p(t) = g x0 + d p0.
struct Map2 {
  double a = 1, b = 0, g = 0, d = 1;
  double det() const { return a * d - b * g; }
};
Map2 segment_map(const QuadraticSegment& seg, double mass);

GaussianState evolve_segment(const GaussianState& s, const QuadraticSegment& seg, double mass,
                             const PhysicalConstants& k = {},
                             HeisenbergPolicy policy = HeisenbergPolicy::error,
                             std::vector<std::string>* warnings = nullptr);

// Adaptive Dormand-Prince integration of the moment equations. Test reference only.
GaussianState evolve_ode_oracle(const GaussianState& s, const QuadraticSegment& seg, double mass,
                                double rtol, const PhysicalConstants& k = {});

}  // namespace skatepark
