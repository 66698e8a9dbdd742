#include <doctest.h>

#include <complex>
#include <random>

#include "skatepark/errors.hpp"
#include "skatepark/gaussian_state.hpp"
#include "skatepark/specs.hpp"
#include "skatepark/wigner.hpp"
#include "support.hpp"

using namespace skatepark;

namespace {

const PhysicalConstants k;
const double M = make_sphere(1e-6, 8570, 0, 0).mass;
const double hb = k.hbar;

// Gaussian density matrix with moments (v_x, v_p, c)
DensityFunction gaussian_rho(double vx, double vp, double c) {
  double D = vx * vp - c * c;
  return [=](double x, double xp) {
    double X = 0.5 * (x + xp), y = x - xp;
    double re = -X * X / (2 * vx) - D * y * y / (2 * hb * hb * vx);
    return std::exp(std::complex<double>(re, c * X * y / (hb * vx))) / std::sqrt(2 * pi * vx);
  };
}

// two Gaussians of position-density std s at +-d/2 with coherence gamma
struct Cat {
  double s, d, gamma;
  DensityFunction rho() const {
    auto psi = [*this](double x, double x0) {
      return std::exp(-(x - x0) * (x - x0) / (4 * s * s)) / std::pow(2 * pi * s * s, 0.25);
    };
    return [*this, psi](double x, double xp) {
      double a = psi(x, d / 2), b = psi(x, -d / 2), ap = psi(xp, d / 2), bp = psi(xp, -d / 2);
      return std::complex<double>(0.5 * (a * ap + b * bp) + 0.5 * gamma * (a * bp + b * ap), 0);
    };
  }
  // marginal of a x + b p in closed form
  double projected(double u, const SymplecticMap& S) const {
    double sxx = s * s, spp = hb * hb / (4 * s * s);
    double s2 = S.a * S.a * sxx + S.b * S.b * spp;
    auto g = [&](double mu) { return std::exp(-(u - mu) * (u - mu) / (2 * s2)) / std::sqrt(2 * pi * s2); };
    double humps = 0.5 * g(S.a * d / 2) + 0.5 * g(-S.a * d / 2);
    double m = S.b * spp * d / hb;
    double damp = -d * d / (8 * s * s) * (S.a * S.a * sxx / s2);
    return humps + gamma * g(0) * std::exp(damp) * std::cos(u * m / s2);
  }
  double period(const SymplecticMap& S) const {
    double spp = hb * hb / (4 * s * s);
    double s2 = S.a * S.a * s * s + S.b * S.b * spp;
    return 2 * pi * s2 / (S.b * spp * d / hb);
  }
};

WignerGridParams cat_grid() { return {256, 4096, 360e-9, 4.2 * hb / 11.6e-9}; }

std::array<double, 3> congruence(const SymplecticMap& S, double vx, double vp, double c) {
  return {S.a * S.a * vx + 2 * S.a * S.b * c + S.b * S.b * vp,
          S.g * S.g * vx + 2 * S.g * S.d * c + S.d * S.d * vp,
          S.a * S.g * vx + (S.a * S.d + S.b * S.g) * c + S.b * S.d * vp};
}

}  // namespace

TEST_CASE("gaussian density transforms to the gaussian Wigner function") {
  double vx = 1e-14, vp = 3 * hb * hb / (4 * vx), c = 0.5 * std::sqrt(vx * vp);
  double sx = std::sqrt(vx), sp = std::sqrt(vp);
  auto W = wigner_from_density(gaussian_rho(vx, vp, c), {256, 256, 10 * sx, 10 * sp});
  auto m = moments(W);
  CHECK(W.norm_drift < 1e-10);
  CHECK(W.max_imag < 1e-10);
  CHECK(m.norm == test::near(1, 1e-12));
  CHECK(std::abs(m.mean_x) < 1e-10 * sx);
  CHECK(std::abs(m.mean_p) < 1e-10 * sp);
  CHECK(m.v_x == test::near(vx, 1e-8));
  CHECK(m.v_p == test::near(vp, 1e-8));
  CHECK(std::abs(m.c - c) < 1e-8 * std::sqrt(vx * vp));
  double D = vx * vp - c * c;
  CHECK(W.at(128, 128) == test::near(1 / (2 * pi * std::sqrt(D)), 1e-8));

  // narrow momentum band aliases
  CHECK_THROWS_AS(wigner_from_density(gaussian_rho(vx, vp, c), {256, 256, 10 * sx, 1.5 * sp}), PhysicsError);
  CHECK_THROWS_AS(wigner_from_density(gaussian_rho(vx, vp, c), {250, 256, 10 * sx, 10 * sp}), ValidationError);
}

TEST_CASE("cat state has a negative interference ridge") {
  Cat cat{11.6e-9, 500e-9, 1};
  auto W = wigner_from_density(cat.rho(), cat_grid());
  CHECK(W.norm_drift < 1e-6);
  double lo = 0;
  for (int j = 0; j < W.params.n_p; ++j) lo = std::min(lo, W.at(W.params.n_x / 2, j));
  CHECK(lo < -0.9 * W.at(W.params.n_x / 2, W.params.n_p / 2));
  // x marginal stays non-negative
  double worst = 0, peak = 0;
  for (int i = 0; i < W.params.n_x; ++i) {
    double s = 0;
    for (int j = 0; j < W.params.n_p; ++j) s += W.at(i, j);
    s *= W.dp();
    worst = std::min(worst, s);
    peak = std::max(peak, s);
  }
  CHECK(worst >= -1e-9 * peak);
}

TEST_CASE("rotation and inflation maps") {
  double w = 2 * pi * 50;
  CHECK(solve_t5(w, w) * w == test::near(pi / 4, 1e-14));
  std::mt19937_64 g(4);
  for (int i = 0; i < 50; ++i) {
    double w5 = test::log_uniform(g, 1, 1e4), w6 = test::log_uniform(g, 1, 1e4);
    double t5 = solve_t5(w5, w6);
    CHECK(std::cos(w5 * t5) == test::near(w5 / w6 * std::sin(w5 * t5), 1e-12));
    CHECK(w5 * t5 > 0);
    CHECK(w5 * t5 < pi / 2);
    auto R = rotation_map(w5, test::log_uniform(g, 1e-5, 1), M);
    auto I = inflation_map(w6, test::log_uniform(g, 1e-5, 20 / w6), M);
    CHECK(R.symplectic(1e-12));
    CHECK(I.symplectic(1e-12));
    CHECK(std::abs(R.det() - 1) < 1e-12);
  }

  // composed map at the tuned t5
  for (double w6t6 : {5.0, 12.0, 18.8}) {
    double w5 = 2 * pi * 50, w6 = 2 * pi * 49.9;
    double t5 = solve_t5(w5, w6), t6 = w6t6 / w6;
    auto S = compose(inflation_map(w6, t6, M), rotation_map(w5, t5, M));
    double r = w5 / w6, sn = std::sin(w5 * t5);
    CHECK(S.b == test::near(sn / (M * w5) * (std::cosh(w6t6) + std::sinh(w6t6) * r * r), 1e-12));
    // a cancels down to cos(w5 t5) e^{-w6 t6}, precise only to rounding of cosh
    CHECK(std::abs(S.a - std::cos(w5 * t5) * std::exp(-w6t6)) < 1e-14 * std::cosh(w6t6));
    if (w6t6 > 12) CHECK(S.b == test::near(std::exp(w6t6) * sn / (2 * M * w5) * (1 + r * r), 1e-10));
    CHECK(S.symplectic());
    CHECK(S.inverse().symplectic());
  }
  CHECK_THROWS_AS(rotation_map(0, 1, M), ValidationError);
  CHECK_THROWS_AS(inflation_map(1, -1, M), ValidationError);
}

TEST_CASE("transport") {
  double vx = 1e-14, vp = 3 * hb * hb / (4 * vx), c = 0.4 * std::sqrt(vx * vp);
  double sx = std::sqrt(vx), sp = std::sqrt(vp);
  WignerGridParams gp{256, 256, 10 * sx, 10 * sp};
  auto W = wigner_from_density(gaussian_rho(vx, vp, c), gp);

  auto same = transport(W, SymplecticMap{}, gp);
  double diff = 0, top = 0;
  for (std::size_t i = 0; i < W.values.size(); ++i) {
    diff = std::max(diff, std::abs(same.values[i] - W.values[i]));
    top = std::max(top, std::abs(W.values[i]));
  }
  CHECK(diff < 1e-12 * top);

  // rotation with M w = sp / sx keeps the support inside the same box
  double w = sp / (M * sx);
  for (double angle : {0.3, 1.1, pi / 2}) {
    auto S = rotation_map(w, angle / w, M);
    auto T = transport(W, S, gp);
    auto m = moments(T);
    auto e = congruence(S, vx, vp, c);
    CHECK(m.v_x == test::near(e[0], 1e-6));
    CHECK(m.v_p == test::near(e[1], 1e-6));
    CHECK(std::abs(m.c - e[2]) < 1e-6 * std::sqrt(vx * vp));
    CHECK(std::abs(T.integral() - 1) < 1e-6);
    if (angle == pi / 2) {
      // x and p swap roles
      CHECK(m.v_x == test::near(vp / (M * w * M * w), 1e-6));
      CHECK(m.v_p == test::near(vx * M * w * M * w, 1e-6));
      CHECK(m.c == test::near(-c, 1e-5));
    }
  }
  // squeezing the target box cuts the support
  CHECK_THROWS_AS(transport(W, SymplecticMap{}, {256, 256, 2 * sx, 10 * sp}), PhysicsError);
  CHECK_THROWS_AS(transport(W, SymplecticMap{2, 0, 0, 2}, gp), ValidationError);
}

TEST_CASE("kernel diagnostics") {
  double w5 = 2 * pi * 50, d = 500e-9, sd = 11.6e-9, L = 1e15;
  auto kd = kernel_diagnostics(L, w5, pi / (4 * w5), M, d, sd);
  CHECK(kd.A1 == test::near(hb * hb * L / (4 * M * M * w5 * w5 * w5 * d * d), 1e-12));
  CHECK(kd.A2 == test::near(L * sd * sd / (4 * w5), 1e-12));
  CHECK(kd.A2 > 1e-5);
  CHECK(kd.A2 < 1e-3);
  CHECK(kd.A1 < 1e-18);
  CHECK(kd.negligible);
  CHECK(kd.sigma_p_ref == test::near(hb / sd, 1e-14));
  auto zero = kernel_diagnostics(0, w5, 1e-3, M, d, sd);
  CHECK(zero.A1 == 0);
  CHECK(zero.A2 == 0);

  std::mt19937_64 g(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    double tb = test::log_uniform(g, 1e-3, 1e3);
    double B = kernel_B(u(g), u(g), tb, test::log_uniform(g, 1e-6, 1e6));
    CHECK(std::abs(B - 2 * tb) <= 2);
  }
  // exponent of the physical kernel equals -(A1 kx^2 + A2 kp^2) B in scaled units
  double t = 1e-3, kx = 0.3 / d, kp = -0.7 / (hb / sd);
  double ratio = M * w5 * d / (hb / sd);
  double lhs = kernel_log(kx, kp, t, L, w5, M);
  double rhs = -(kd.A1 * 0.09 + kd.A2 * 0.49) * kernel_B(0.3, -0.7, w5 * t, ratio);
  CHECK(lhs == test::near(rhs, 1e-10));
  CHECK_THROWS_AS(kernel_diagnostics(L, w5, 1e-3, M, 0, sd), ValidationError);
}

TEST_CASE("blurring width") {
  double w = 2 * pi * 50, L = 1e15;
  CHECK(blurring_width(0, w, 0.05, M) == 0);
  // small omega t: the free-flight t^3 term, the kernel variance being sigma^2 / 2
  // (sinh x - x) / (x^3 / 6) = 1 + x^2 / 20 + x^4 / 840 + ...
  for (double t : {1e-6, 1e-4, 1e-3}) {
    double s2 = std::pow(blurring_width(L, w, t, M), 2);
    double x = 2 * w * t;
    double r = s2 / (hb * hb * L / (M * M) * 4 * t * t * t / 3);
    CHECK(std::abs(r - 1 - x * x / 20) < x * x * x * x / 500 + 1e-12);
  }
  // same t^3 gain as a free flight; large Lambda keeps the gain above the rounding of v_x
  auto s = GaussianState::thermal(1e-12, 0.05);
  double t = 1e-6, Lb = 1e30;
  auto a = evolve_segment(s, {SegmentKind::free, 0, t, 0}, M);
  auto b = evolve_segment(s, {SegmentKind::free, 0, t, Lb}, M);
  CHECK(std::pow(blurring_width(Lb, w, t, M), 2) / 2 == test::near(b.v_x - a.v_x, 1e-6));

  // log-domain branch joins the direct one
  double lo = blurring_width(L, w, 699.9 / (2 * w), M), hi = blurring_width(L, w, 700.1 / (2 * w), M);
  CHECK(hi / lo == test::near(std::exp(0.1), 1e-10));
  CHECK(std::isfinite(blurring_width(L, w, 1000 / (2 * w), M)));
  // linear in Lambda
  CHECK(std::pow(blurring_width(2 * L, w, 0.05, M) / blurring_width(L, w, 0.05, M), 2) == test::near(2, 1e-12));
}

TEST_CASE("final pattern against the two-gaussian projection") {
  Cat cat{11.6e-9, 500e-9, 1};
  auto W = wigner_from_density(cat.rho(), cat_grid());
  double w5 = 2 * pi * 50, w6 = 2 * pi * 50;
  auto S = compose(inflation_map(w6, 18 / w6, M), rotation_map(w5, solve_t5(w5, w6), M));
  double xf = cat.period(S);
  double env = std::sqrt(S.a * S.a * cat.s * cat.s + S.b * S.b * hb * hb / (4 * cat.s * cat.s));
  PatternGridParams out{4096, 6 * env};
  auto P = final_pattern(W, S, 0, out, xf);

  CHECK(P.density == P.unblurred);
  double l1 = 0, ref = 0;
  for (std::size_t i = 0; i < P.x.size(); ++i) {
    if (std::abs(P.x[i]) > 5 * xf) continue;
    double o = cat.projected(P.x[i], S);
    l1 += std::abs(P.density[i] - o);
    ref += o;
  }
  MESSAGE("L1 " << l1 / ref << " fringe " << xf);
  CHECK(l1 / ref <= 0.02);

  auto fm = fringe_metrics(P.x, P.density, xf);
  CHECK_FALSE(fm.envelope_only);
  CHECK(fm.x_f == test::near(xf, 0.02));
  CHECK(fm.visibility > 0.99);
  CHECK(fm.spectral_period == test::near(xf, 0.01));

  // blur only lowers the visibility
  double prev = fm.visibility;
  for (double sl : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    auto b = blur(P.unblurred, P.dx(), sl * xf);
    double v = fringe_metrics(P.x, b, xf).visibility;
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
  // Gaussian blur of a cosine: contrast falls by exp(-(pi sigma / x_f)^2)
  auto b = blur(P.unblurred, P.dx(), 0.2 * xf);
  CHECK(fringe_metrics(P.x, b, xf).spectral_visibility ==
        test::near(fm.spectral_visibility * std::exp(-std::pow(pi * 0.2, 2)), 0.01));

  CHECK_THROWS_AS(final_pattern(W, S, 0, {64, 6 * env}, xf), ValidationError);
  CHECK_THROWS_AS(final_pattern(W, S, -1, out, xf), ValidationError);
}

TEST_CASE("short coherence leaves an envelope") {
  double xiG = 121e-9, d = 500e-9;
  Cat cat{11.6e-9, d, std::exp(-d * d / (xiG * xiG))};
  auto W = wigner_from_density(cat.rho(), cat_grid());
  auto S = compose(inflation_map(2 * pi * 50, 18 / (2 * pi * 50), M), rotation_map(2 * pi * 50, pi / (4 * 2 * pi * 50), M));
  double xf = cat.period(S);
  double env = std::sqrt(S.a * S.a * cat.s * cat.s + S.b * S.b * hb * hb / (4 * cat.s * cat.s));
  auto P = final_pattern(W, S, 0, {4096, 6 * env}, xf);
  auto fm = fringe_metrics(P.x, P.density, xf);
  MESSAGE("spectral visibility " << fm.spectral_visibility);
  CHECK(fm.spectral_visibility < 1e-6);
  CHECK(fm.visibility < 1e-6);
}

TEST_CASE("fringe metrics on simple patterns") {
  std::vector<double> x(2001), flat(2001, 1.0), cosine(2001);
  for (int i = 0; i < 2001; ++i) {
    x[i] = (i - 1000) * 0.01;
    cosine[i] = std::exp(-x[i] * x[i] / 2000) * (1 + 0.5 * std::cos(2 * pi * x[i]));
  }
  auto f = fringe_metrics(x, flat);
  CHECK(f.envelope_only);
  CHECK(std::isnan(f.x_f));
  CHECK(f.visibility == 0);
  auto c = fringe_metrics(x, cosine, 1.0);
  CHECK(c.x_f == test::near(1.0, 1e-3));
  CHECK(c.visibility == test::near(0.5, 0.01));
  // the spectral estimate wants an envelope that dies before the window edge
  std::vector<double> tight(2001);
  for (int i = 0; i < 2001; ++i) tight[i] = std::exp(-x[i] * x[i] / 8) * (1 + 0.5 * std::cos(2 * pi * x[i]));
  auto t = fringe_metrics(x, tight, 1.0);
  CHECK(t.spectral_period == test::near(1.0, 1e-3));
  CHECK(t.spectral_visibility == test::near(0.5, 1e-3));
}
