#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "skatepark/errors.hpp"
#include "skatepark/rng.hpp"
#include "skatepark/splitter.hpp"

namespace skatepark {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
using GL = boost::math::quadrature::gauss<double, 20>;

// sqrt(2/pi) int e^{-2 (chi x^2 - p)^2} rho(x) dx over the line, rho given in units of sigma4.
// The kernel has unit width in u = chi x^2, so the x range is cut into pieces that are
// narrow both in u and relative to the width of rho.
double measurement_integral(const std::function<double(double)>& rho, double scale, double chi,
                            double p, double moment_power = 0) {
  const double u_lo = std::max(0.0, p - 6.5), u_hi = std::max(p + 6.5, 0.0);
  double x_lo = std::sqrt(u_lo / chi), x_hi = std::sqrt(u_hi / chi);
  x_hi = std::min(x_hi, 40 * scale);
  if (!(x_hi > x_lo)) return 0;
  // breakpoints: uniform in u across the kernel, plus width-of-rho pieces
  std::vector<double> br;
  const int nu = 26;
  for (int i = 0; i <= nu; ++i) {
    double u = u_lo + (u_hi - u_lo) * i / nu;
    double x = std::sqrt(u / chi);
    if (x >= x_lo && x <= x_hi) br.push_back(x);
  }
  for (double x = x_lo; x < x_hi; x += scale / 4) br.push_back(x);
  br.push_back(x_lo);
  br.push_back(x_hi);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  auto f = [&](double x) {
    double a = chi * x * x - p;
    double w = std::exp(-2 * a * a) * (rho(x) + rho(-x));
    return moment_power == 0 ? w : w * std::pow(x, moment_power);
  };
  double sum = 0;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    if (br[i + 1] <= br[i]) continue;
    sum += GL::integrate(f, br[i], br[i + 1]);
  }
  return std::sqrt(2 / pi) * sum;
}

}  // namespace

double phase_evolution(double Theta, double wg, double ws, double t) {
  double tn = std::tan(wg * t);
  double den = wg + 4 * Theta * ws * tn;
  if (den == 0) throw PhysicsError("phase evolution hits a pole");
  return -wg / (4 * ws) * (-4 * Theta * ws + wg * tn) / den;
}

double phase_root(double Theta, double wg, double ws, double t_min) {
  if (!(wg > 0) || !(ws > 0)) throw ValidationError("phase root needs positive frequencies");
  double t = std::atan(4 * Theta * ws / wg) / wg;
  while (t <= t_min) t += pi / wg;
  return t;
}

double induced_frequency(double g_q, double alpha_mag, double mass, double sigma4,
                         const PhysicalConstants& k) {
  return std::sqrt(2 * k.hbar * std::abs(g_q) * alpha_mag * alpha_mag / (mass * sigma4 * sigma4));
}

double omega_sigma(double mass, double sigma4, const PhysicalConstants& k) {
  return k.hbar / (2 * mass * sigma4 * sigma4);
}

ThetaValues theta_values(const GaussianState& s, double sigma4, const PhysicalConstants& k) {
  return {s.c / (2 * k.hbar), s.c * sigma4 * sigma4 / (2 * k.hbar * s.v_x)};
}

SlitGeometry slit_geometry(double chi, double p_L, double sigma4, double P) {
  if (!(chi > 0) || !(sigma4 > 0)) throw ValidationError("slit geometry needs chi, sigma4 > 0");
  SlitGeometry g;
  double excess = p_L * chi - P * P;
  g.resolved = excess > 0;
  if (!g.resolved) return g;
  g.d = 2 * sigma4 * std::sqrt(excess) / chi;
  g.sigma_d = sigma4 / std::sqrt(16 * p_L * chi);
  g.sigma_d_amplitude = sigma4 / std::sqrt(8 * excess);
  return g;
}

double outcome_for_separation(double d, double chi, double sigma4, double P) {
  return chi * d * d / (4 * sigma4 * sigma4) + P * P / chi;
}

GaussianAmplitude GaussianAmplitude::from_state(const GaussianState& s, const PhysicalConstants& k) {
  return {s.v_x, coherence_length(s, k)};
}

double GaussianAmplitude::operator()(double x, double xp) const {
  double sp = x + xp, df = x - xp;
  return std::exp(-sp * sp / (8 * v_x) - df * df / (xi * xi)) / std::sqrt(2 * pi * v_x);
}

OutcomeDistribution::OutcomeDistribution(std::function<double(double)> rho, double scale, double chi,
                                         int n)
    : rho_(std::move(rho)), scale_(scale), chi_(chi) {
  if (!(chi > 0) || !(scale > 0)) throw ValidationError("outcome distribution needs chi, scale > 0");
  if (n < 64) throw ValidationError("outcome table too small");
  // Nodes uniform in s with p = p0 + s^2: dense near the low edge where the density peaks.
  const double p0 = -5, p1 = chi * std::pow(40 * scale, 2) + 5;
  const double smax = std::sqrt(p1 - p0);
  p_.resize(n);
  pdf_.resize(n);
  cdf_.resize(n);
  for (int i = 0; i < n; ++i) {
    double s = smax * i / (n - 1);
    p_[i] = p0 + s * s;
    pdf_[i] = density(p_[i]);
  }
  cdf_[0] = 0;
  double m = 0;
  for (int i = 1; i < n; ++i) {
    double h = p_[i] - p_[i - 1];
    cdf_[i] = cdf_[i - 1] + 0.5 * h * (pdf_[i] + pdf_[i - 1]);
    m += 0.5 * h * (pdf_[i] * p_[i] + pdf_[i - 1] * p_[i - 1]);
  }
  norm_ = cdf_.back();
  if (!(norm_ > 0)) throw PhysicsError("outcome distribution vanishes");
  for (auto& c : cdf_) c /= norm_;
  // exact first moment: E[p] = chi E[x^2]
  mean_ = chi_ * GK::integrate([&](double x) { return x * x * (rho_(x) + rho_(-x)); }, 0, 40 * scale_, 12, 1e-13);
  (void)m;
}

double OutcomeDistribution::density(double p) const { return measurement_integral(rho_, scale_, chi_, p); }

double OutcomeDistribution::cdf(double p) const {
  if (p <= p_.front()) return 0;
  if (p >= p_.back()) return 1;
  auto it = std::upper_bound(p_.begin(), p_.end(), p);
  std::size_t j = it - p_.begin(), i = j - 1;
  // trapezoid with linear pdf inside the cell
  double h = p - p_[i], H = p_[j] - p_[i];
  double fp = pdf_[i] + (pdf_[j] - pdf_[i]) * h / H;
  return cdf_[i] + 0.5 * h * (pdf_[i] + fp) / norm_;
}

double OutcomeDistribution::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return p_.front();
  if (it == cdf_.end()) return p_.back();
  std::size_t j = it - cdf_.begin(), i = j - 1;
  // invert the quadratic CDF of a linear pdf inside the cell
  double H = p_[j] - p_[i];
  double a = pdf_[i] / norm_, b = (pdf_[j] - pdf_[i]) / (H * norm_);
  double r = u - cdf_[i];
  double h;
  if (std::abs(b) * H < 1e-12 * std::max(a, 1e-300))
    h = a > 0 ? r / a : H * (r / (cdf_[j] - cdf_[i]));
  else
    h = (-a + std::sqrt(std::max(0.0, a * a + 2 * b * r))) / b;
  return p_[i] + std::clamp(h, 0.0, H);
}

double slit_density(const OutcomeDistribution& P, double d, double sigma4, double purity_in) {
  if (!(d > 0)) return 0;
  double chi = P.chi();
  return chi * d / (2 * sigma4 * sigma4) * P.density(outcome_for_separation(d, chi, sigma4, purity_in));
}

double separation_probability(const OutcomeDistribution& P, double sigma4, double purity_in,
                              double d_lo, double d_hi) {
  if (!(d_hi > d_lo)) return 0;
  d_lo = std::max(d_lo, 0.0);
  // integrate in p_L: P_s dd = P_o dp
  double p_lo = outcome_for_separation(d_lo, P.chi(), sigma4, purity_in);
  double p_hi = outcome_for_separation(d_hi, P.chi(), sigma4, purity_in);
  const int pieces = 64;
  double sum = 0;
  for (int i = 0; i < pieces; ++i) {
    double a = p_lo + (p_hi - p_lo) * i / pieces, b = p_lo + (p_hi - p_lo) * (i + 1) / pieces;
    sum += GL::integrate([&](double p) { return P.density(p); }, a, b);
  }
  return sum;
}

bool accepted(const SlitGeometry& g, const PostSelection& w) {
  if (!g.resolved) return false;
  if (g.d < w.d_min_over_sigma_d * g.sigma_d) return false;
  if (w.d_max > 0 && g.d > w.d_max) return false;
  return true;
}

double range_probability(const OutcomeDistribution& P, double sigma4, double purity_in,
                         const PostSelection& w) {
  // d / sigma_d grows monotonically with d, so the lower cut is a single threshold.
  const double chi = P.chi();
  auto ratio = [&](double d) {
    auto g = slit_geometry(chi, outcome_for_separation(d, chi, sigma4, purity_in), sigma4, purity_in);
    return d / g.sigma_d - w.d_min_over_sigma_d;
  };
  double lo = 1e-12 * sigma4, hi = sigma4;
  while (ratio(hi) < 0) hi *= 2;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    double m = 0.5 * (lo + hi);
    (ratio(m) < 0 ? lo : hi) = m;
  }
  double d_lo = hi;
  double d_hi = w.d_max > 0 ? w.d_max : 80 * sigma4;
  return separation_probability(P, sigma4, purity_in, d_lo, d_hi);
}

SplitOutcome sample_outcome(const OutcomeDistribution& P, double sigma4, double purity_in,
                            const PostSelection& w, std::uint64_t seed) {
  Rng rng(seed);
  SplitOutcome o;
  for (int i = 1; i <= w.max_draws; ++i) {
    double p = P.quantile(rng.uniform());
    auto g = slit_geometry(P.chi(), p, sigma4, purity_in);
    if (accepted(g, w)) {
      o.p_L = p;
      o.geometry = g;
      o.draws = i;
      return o;
    }
  }
  throw PhysicsError("post-selection exhausted after " + std::to_string(w.max_draws) + " draws");
}

SplitDensity::SplitDensity(Amplitude A, double width, double sigma4, double chi, double p_L,
                           double decay)
    : A_(std::move(A)), sigma4_(sigma4), chi_(chi), pL_(p_L), decay_(decay) {
  if (!(sigma4 > 0) || !(chi > 0) || !(width > 0)) throw ValidationError("split needs sigma4, chi, width > 0");
  if (!(decay >= 0)) throw ValidationError("decay coefficient must be >= 0");
  auto diag = [&](double xt) { return sigma4_ * A_(sigma4_ * xt, sigma4_ * xt); };
  z_ = measurement_integral(diag, width / sigma4, chi, p_L);
  if (!(z_ > 1e-250)) throw PhysicsError("post-measurement trace underflow");
}

std::complex<double> SplitDensity::operator()(double x, double xp) const {
  double a = x / sigma4_, b = xp / sigma4_;
  double ea = chi_ * a * a - pL_, eb = chi_ * b * b - pL_;
  double df = x - xp;
  // (2/pi)^{1/2} from the two measurement factors
  double m = std::sqrt(2 / pi) * std::exp(-ea * ea - eb * eb - decay_ * df * df);
  return m * A_(x, xp) / z_;
}

SplitDensity apply_split(Amplitude A, double width, double sigma4, double chi, double p_L,
                         double decay_coeff) {
  return SplitDensity(std::move(A), width, sigma4, chi, p_L, decay_coeff);
}

SplitDensity apply_split(const GaussianAmplitude& A, double sigma4, double chi, double p_L,
                         double decay_coeff) {
  return SplitDensity(A, std::sqrt(A.v_x), sigma4, chi, p_L, decay_coeff);
}

ResolutionBound resolution_bound(double sigma7, double chi7, double t7, double kappa7) {
  if (!(chi7 > 0) || !(t7 > 0) || !(kappa7 > 0)) throw ValidationError("resolution bound needs positive inputs");
  return {sigma7 / std::sqrt(2 * chi7), sigma7 / (2 * std::pow(t7 * kappa7, 0.25))};
}

}  // namespace skatepark
