#include <algorithm>
#include <cmath>

#include "skatepark/constants.hpp"
#include "skatepark/errors.hpp"
#include "skatepark/specs.hpp"

namespace skatepark {

ValidationError::ValidationError(const std::string& summary, std::vector<std::string> items)
    : Error([&] {
        std::string s = summary;
        for (const auto& i : items) s += "\n  - " + i;
        return s;
      }()),
      items_(std::move(items)) {}

void PhysicalConstants::validate() const {
  for (double v : {hbar, h, G, mu0, kB, c, g_eff, e_charge, m_electron, Phi0})
    if (!(v > 0) || !std::isfinite(v)) throw ValidationError("physical constants must be positive");
  if (std::abs(h / (2 * pi * hbar) - 1) > 1e-9) throw ValidationError("h and hbar disagree");
}

SphereSpec make_sphere(double radius, double density, double Bc1, double Tc,
                       const PhysicalConstants& k) {
  SphereSpec s;
  s.radius = radius;
  s.density = density;
  s.volume = 4.0 / 3.0 * pi * radius * radius * radius;
  s.mass = density * s.volume;
  s.chi = 3 * s.volume / (4 * k.mu0);
  s.Bc1 = Bc1;
  s.Tc = Tc;
  validate(s);
  return s;
}

SphereSpec sphere_from_mass(double mass, double density, const PhysicalConstants& k) {
  if (!(mass > 0) || !(density > 0)) throw ValidationError("mass and density must be positive");
  double r = std::cbrt(3 * mass / (4 * pi * density));
  return make_sphere(r, density, 0, 0, k);
}

void validate(const SphereSpec& s) {
  if (!(s.radius > 0)) throw ValidationError("sphere radius must be positive");
  if (!(s.density > 0)) throw ValidationError("sphere density must be positive");
  if (s.Bc1 < 0 || s.Tc < 0) throw ValidationError("sphere Bc1 and Tc must be non-negative");
}

VibrationPsd::VibrationPsd(std::vector<double> freq_hz, std::vector<double> sqrt_s)
    : f_(std::move(freq_hz)), a_(std::move(sqrt_s)) {
  if (f_.size() != a_.size()) throw ValidationError("vibration table columns differ in length");
  for (std::size_t i = 0; i < f_.size(); ++i) {
    if (!(f_[i] > 0)) throw ValidationError("vibration table frequencies must be positive");
    if (!(a_[i] >= 0)) throw ValidationError("vibration table amplitudes must be non-negative");
    if (i && !(f_[i] > f_[i - 1])) throw ValidationError("vibration table must be strictly increasing");
  }
}

double VibrationPsd::S(double omega) const {
  if (f_.empty()) return 0;
  double f = omega / (2 * pi);
  double a;
  if (f <= f_.front()) {
    a = a_.front();
  } else if (f >= f_.back()) {
    a = a_.back();
  } else {
    auto it = std::upper_bound(f_.begin(), f_.end(), f);
    std::size_t j = it - f_.begin();
    std::size_t i = j - 1;
    if (a_[i] == 0 || a_[j] == 0) {
      double w = (f - f_[i]) / (f_[j] - f_[i]);
      a = a_[i] + w * (a_[j] - a_[i]);
    } else {
      double w = std::log(f / f_[i]) / std::log(f_[j] / f_[i]);
      a = std::exp(std::log(a_[i]) + w * std::log(a_[j] / a_[i]));
    }
  }
  return a * a;
}

VibrationPsd VibrationPsd::scaled(double amplitude_factor) const {
  auto a = a_;
  for (auto& v : a) v *= amplitude_factor;
  return VibrationPsd(f_, std::move(a));
}

void validate(const EnvironmentSpec& e) {
  std::vector<std::string> bad;
  if (!(e.T_env >= 0)) bad.push_back("T_env must be >= 0");
  if (!(e.T_internal >= 0)) bad.push_back("T_internal must be >= 0");
  if (!(e.pressure >= 0)) bad.push_back("pressure must be >= 0");
  if (!(e.gas_molecule_mass > 0)) bad.push_back("gas molecule mass must be positive");
  if (!(e.eps_im_factor >= 0)) bad.push_back("eps_im_factor must be >= 0");
  if (!bad.empty()) throw ValidationError("invalid environment", bad);
}

void validate(const SurfaceSpec& s) {
  if (s.kind == SurfaceKind::superconductor && !(s.lambda_L0 > 0))
    throw ValidationError("superconducting surface needs lambda_L0 > 0");
  if (!(s.sigma_metal > 0)) throw ValidationError("surface conductivity must be positive");
}

}  // namespace skatepark
