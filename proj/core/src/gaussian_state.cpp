#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "skatepark/errors.hpp"
#include "skatepark/gaussian_state.hpp"
#include "series.hpp"

namespace skatepark {

namespace {

using detail::sinh_minus_x;
using detail::x_minus_sin;

// Integrals over [0, t] of the map entries that feed the noise and determinant terms.
struct NoiseIntegrals {
  double aa = 0, ab = 0, bb = 0, bd = 0, dd = 0;
  double tbb = 0;  // int (t-u) b(u)^2 du
};

NoiseIntegrals noise_integrals(const QuadraticSegment& seg, double M) {
  NoiseIntegrals I;
  const double t = seg.duration;
  if (seg.kind == SegmentKind::free || seg.omega == 0) {
    I.aa = I.dd = t;
    I.ab = I.bd = t * t / (2 * M);
    I.bb = t * t * t / (3 * M * M);
    I.tbb = t * t * t * t / (12 * M * M);
    return I;
  }
  const double w = seg.omega, th = w * t;
  if (seg.kind == SegmentKind::harmonic) {
    double s = std::sin(th);
    I.aa = I.dd = (2 * th + std::sin(2 * th)) / (4 * w);
    I.ab = I.bd = s * s / (2 * M * w * w);
    I.bb = x_minus_sin(2 * th) / (4 * M * M * w * w * w);
    I.tbb = x_minus_sin(th) * (th + s) / (4 * M * M * w * w * w * w);
  } else {
    double s = std::sinh(th);
    I.aa = I.dd = (2 * th + std::sinh(2 * th)) / (4 * w);
    I.ab = I.bd = s * s / (2 * M * w * w);
    I.bb = sinh_minus_x(2 * th) / (4 * M * M * w * w * w);
    I.tbb = sinh_minus_x(th) * (s + th) / (4 * M * M * w * w * w * w);
  }
  return I;
}

}  // namespace

GaussianState GaussianState::from_moments(double v_x, double v_p, double c) {
  return from_moments(v_x, v_p, c, v_x * v_p - c * c);
}

GaussianState GaussianState::from_moments(double v_x, double v_p, double c, double det) {
  if (!(v_x > 0) || !(v_p > 0)) throw ValidationError("Gaussian variances must be positive");
  if (!std::isfinite(c) || !std::isfinite(det)) throw ValidationError("Gaussian moments must be finite");
  return {v_x, v_p, c, det};
}

GaussianState GaussianState::ground(double mass, double omega, const PhysicalConstants& k) {
  if (!(mass > 0) || !(omega > 0)) throw ValidationError("ground state needs positive mass and frequency");
  double vx = k.hbar / (2 * mass * omega), vp = k.hbar * mass * omega / 2;
  return {vx, vp, 0, k.hbar * k.hbar / 4};
}

GaussianState GaussianState::thermal(double sigma, double nbar, const PhysicalConstants& k) {
  if (!(sigma > 0) || !(nbar >= 0)) throw ValidationError("thermal state needs sigma > 0 and nbar >= 0");
  double f = 2 * nbar + 1;
  double vx = sigma * sigma * f, vp = k.hbar * k.hbar / (4 * sigma * sigma) * f;
  return {vx, vp, 0, k.hbar * k.hbar / 4 * f * f};
}

void QuadraticSegment::validate() const {
  if (!(duration >= 0)) throw ValidationError("segment duration must be >= 0");
  if (!(omega >= 0)) throw ValidationError("segment frequency must be >= 0");
  if (!(lambda_total >= 0)) throw ValidationError("localization parameter must be >= 0");
  if (kind == SegmentKind::free && omega != 0) throw ValidationError("free segment must have omega = 0");
}

void check_heisenberg(const GaussianState& s, const PhysicalConstants& k) {
  double bound = k.hbar * k.hbar / 4;
  if (!(s.det >= bound * (1 - heisenberg_slack)))
    throw PhysicsError("Gaussian state violates the Heisenberg bound (det/(hbar^2/4) = " +
                       std::to_string(s.det / bound) + ")");
}

double purity(const GaussianState& s, const PhysicalConstants& k) {
  check_heisenberg(s, k);
  return std::min(1.0, k.hbar / (2 * std::sqrt(s.det)));
}

double coherence_length(const GaussianState& s, const PhysicalConstants& k) {
  return purity(s, k) * std::sqrt(8 * s.v_x);
}

double coherence_growth_speed(const GaussianState& s, double mass, const PhysicalConstants& k) {
  return purity(s, k) * std::sqrt(8 * s.v_p) / mass;
}

double ballistic_fringe_speed(double mass, double d, const PhysicalConstants& k) {
  if (!(d > 0) || !(mass > 0)) throw ValidationError("fringe speed needs positive mass and separation");
  return 2 * pi * k.hbar / (mass * d);
}

Map2 segment_map(const QuadraticSegment& seg, double M) {
  const double t = seg.duration;
  if (seg.kind == SegmentKind::free || seg.omega == 0) return {1, t / M, 0, 1};
  const double w = seg.omega, th = w * t;
  if (seg.kind == SegmentKind::harmonic) {
    double c = std::cos(th), s = std::sin(th);
    return {c, s / (M * w), -M * w * s, c};
  }
  double c = std::cosh(th), s = std::sinh(th);
  return {c, s / (M * w), M * w * s, c};
}

GaussianState evolve_segment(const GaussianState& s, const QuadraticSegment& seg, double M,
                             const PhysicalConstants& k, HeisenbergPolicy policy,
                             std::vector<std::string>* warnings) {
  seg.validate();
  if (!(M > 0)) throw ValidationError("mass must be positive");
  const Map2 S = segment_map(seg, M);
  const NoiseIntegrals I = noise_integrals(seg, M);
  const double q = 2 * k.hbar * k.hbar * seg.lambda_total;

  GaussianState o;
  o.v_x = S.a * S.a * s.v_x + 2 * S.a * S.b * s.c + S.b * S.b * s.v_p + q * I.bb;
  o.c = S.a * S.g * s.v_x + (S.a * S.d + S.b * S.g) * s.c + S.b * S.d * s.v_p + q * I.bd;
  o.v_p = S.g * S.g * s.v_x + 2 * S.g * S.d * s.c + S.d * S.d * s.v_p + q * I.dd;
  o.det = s.det + q * (s.v_x * I.aa + 2 * s.c * I.ab + s.v_p * I.bb + q * I.tbb);

  if (!std::isfinite(o.v_x) || !std::isfinite(o.v_p) || !std::isfinite(o.c) || !std::isfinite(o.det))
    throw PhysicsError("segment evolution overflowed");
  try {
    check_heisenberg(o, k);
  } catch (const PhysicsError& e) {
    if (policy == HeisenbergPolicy::error) throw;
    if (warnings) warnings->push_back(e.what());
  }
  return o;
}

GaussianState evolve_ode_oracle(const GaussianState& s, const QuadraticSegment& seg, double M,
                                double rtol, const PhysicalConstants& k) {
  seg.validate();
  if (!(rtol > 0) || rtol > 1e-4) throw ValidationError("oracle rtol must lie in (0, 1e-4]");
  using State = std::array<double, 4>;
  namespace ode = boost::numeric::odeint;

  // Moments scaled by their initial sizes so everything starts at order one.
  const double Lx = std::sqrt(s.v_x), Lp = std::sqrt(s.v_p), LxLp = Lx * Lp;
  double kappa = 0;
  if (seg.kind == SegmentKind::harmonic) kappa = seg.omega * seg.omega;
  if (seg.kind == SegmentKind::inverted) kappa = -seg.omega * seg.omega;
  const double q = 2 * k.hbar * k.hbar * seg.lambda_total;

  auto rhs = [&](const State& y, State& dy, double) {
    dy[0] = 2 * y[2] * Lp / (M * Lx);
    dy[1] = (-2 * M * kappa * y[2] * LxLp + q) / (Lp * Lp);
    dy[2] = (y[1] * Lp * Lp / M - M * kappa * y[0] * Lx * Lx) / LxLp;
    dy[3] = q * y[0] * Lx * Lx / (LxLp * LxLp);
  };
  State y{1.0, 1.0, s.c / LxLp, s.det / (LxLp * LxLp)};
  const double T = seg.duration;
  if (T > 0) {
    double rate = std::max(seg.omega, 1 / T);
    double dt0 = std::min(T, 1e-3 / rate);
    auto stepper = ode::make_controlled(rtol * 1e-6, rtol, ode::runge_kutta_dopri5<State>());
    std::size_t steps = ode::integrate_adaptive(stepper, rhs, y, 0.0, T, dt0);
    if (steps > 500000000) throw PhysicsError("oracle step budget exhausted");
  }
  for (double v : y)
    if (!std::isfinite(v)) throw PhysicsError("oracle integration diverged");
  return {y[0] * Lx * Lx, y[1] * Lp * Lp, y[2] * LxLp, y[3] * LxLp * LxLp};
}

}  // namespace skatepark
