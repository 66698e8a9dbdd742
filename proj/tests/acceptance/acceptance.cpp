// Case-study regression: one PASS/FAIL line per check, one verdict per criterion.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "skatepark/config.hpp"
#include "skatepark/decoherence.hpp"
#include "skatepark/gqr.hpp"
#include "skatepark/protocol.hpp"
#include "skatepark/rng.hpp"
#include "skatepark/splitter.hpp"
#include "skatepark/wigner.hpp"

using namespace skatepark;

namespace {

struct Criterion {
  int id;
  std::string title;
  bool ok = true;
};

std::vector<Criterion> done;
Criterion* cur = nullptr;

void begin(int id, const std::string& title) {
  done.push_back({id, title});
  cur = &done.back();
  std::printf("\n[%d] %s\n", id, title.c_str());
}

void line(bool ok, const std::string& what, double got, const std::string& expect) {
  if (!ok) cur->ok = false;
  std::printf("  %s  %-46s %.6g  (%s)\n", ok ? "PASS" : "FAIL", what.c_str(), got, expect.c_str());
}

std::string pm(double v, double tol) {
  char b[64];
  std::snprintf(b, sizeof b, "%.6g +- %g%%", v, tol * 100);
  return b;
}

void near(const std::string& what, double got, double v, double tol) {
  line(std::isfinite(got) && std::abs(got - v) <= tol * std::abs(v), what, got, pm(v, tol));
}

void within(const std::string& what, double got, double lo, double hi) {
  char b[64];
  std::snprintf(b, sizeof b, "in [%g, %g]", lo, hi);
  line(got >= lo && got <= hi, what, got, b);
}

void below(const std::string& what, double got, double hi) {
  char b[64];
  std::snprintf(b, sizeof b, "<= %g", hi);
  line(got <= hi, what, got, b);
}

void above(const std::string& what, double got, double lo) {
  char b[64];
  std::snprintf(b, sizeof b, "> %g", lo);
  line(got > lo, what, got, b);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double log_uniform(std::mt19937_64& g, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(g));
}

// 100 random segments, closed form against the Dormand-Prince moments
double moment_oracle_worst(double M, const PhysicalConstants& k) {
  std::mt19937_64 g(2024);
  const SegmentKind kinds[] = {SegmentKind::free, SegmentKind::harmonic, SegmentKind::inverted};
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    auto kind = kinds[i % 3];
    double w = kind == SegmentKind::free ? 0 : log_uniform(g, 1, 1e4);
    double wt = log_uniform(g, 1e-6, kind == SegmentKind::inverted ? 25 : 1e4);
    double t = kind == SegmentKind::free ? wt * 1e-4 : wt / w;
    double sigma = log_uniform(g, 1e-13, 1e-8);
    auto s = GaussianState::thermal(sigma, log_uniform(g, 1e-3, 1e3));
    s = evolve_segment(s, {SegmentKind::free, 0, log_uniform(g, 1e-4, 1e-1), 0}, M);
    double L = 0;
    if (i % 4) L = log_uniform(g, 1e-6, 10) * s.v_p / (2 * k.hbar * k.hbar * std::max(t, 1e-12));
    QuadraticSegment q{kind, w, t, L};
    auto a = evolve_segment(s, q, M);
    auto b = evolve_ode_oracle(s, q, M, 1e-13);
    double e = std::max({rel(a.v_x, b.v_x), rel(a.v_p, b.v_p), std::abs(a.c - b.c) / std::sqrt(b.v_x * b.v_p),
                         rel(a.det, b.det)});
    worst = std::max(worst, e);
  }
  return worst;
}

DensityFunction gaussian_rho(double vx, double vp, double c, double hb) {
  double D = vx * vp - c * c;
  return [=](double x, double xp) {
    double X = 0.5 * (x + xp), y = x - xp;
    double re = -X * X / (2 * vx) - D * y * y / (2 * hb * hb * vx);
    return std::exp(std::complex<double>(re, c * X * y / (hb * vx))) / std::sqrt(2 * pi * vx);
  };
}

// largest relative moment error after transporting a Gaussian Wigner function
double transport_worst(double M, double hb) {
  double vx = 1e-14, vp = 3 * hb * hb / (4 * vx), c = 0.4 * std::sqrt(vx * vp);
  double sx = std::sqrt(vx), sp = std::sqrt(vp);
  WignerGridParams gp{256, 256, 10 * sx, 10 * sp};
  auto W = wigner_from_density(gaussian_rho(vx, vp, c, hb), gp);
  double w = sp / (M * sx), worst = 0;
  for (double angle : {0.3, 1.1, pi / 2}) {
    auto S = rotation_map(w, angle / w, M);
    auto m = moments(transport(W, S, gp));
    double ex = S.a * S.a * vx + 2 * S.a * S.b * c + S.b * S.b * vp;
    double ep = S.g * S.g * vx + 2 * S.g * S.d * c + S.d * S.d * vp;
    double ec = S.a * S.g * vx + (S.a * S.d + S.b * S.g) * c + S.b * S.d * vp;
    worst = std::max({worst, rel(m.v_x, ex), rel(m.v_p, ep), std::abs(m.c - ec) / std::sqrt(vx * vp)});
  }
  return worst;
}

// grid pattern of a two-Gaussian cat through the case-study map against its closed-form marginal
double cat_l1(const RunReport& R, double M, double hb) {
  const double s = R.slit.sigma_d, d = R.slit.d;
  auto psi = [&](double x, double x0) { return std::exp(-(x - x0) * (x - x0) / (4 * s * s)) / std::pow(2 * pi * s * s, 0.25); };
  DensityFunction rho = [&](double x, double xp) {
    double a = psi(x, d / 2), b = psi(x, -d / 2), ap = psi(xp, d / 2), bp = psi(xp, -d / 2);
    return std::complex<double>(0.5 * (a * ap + b * bp) + 0.5 * (a * bp + b * ap), 0);
  };
  auto W = wigner_from_density(rho, {256, 4096, 360e-9, 4.2 * hb / s});
  const auto& S = R.map;
  double sxx = s * s, spp = hb * hb / (4 * s * s);
  double s2 = S.a * S.a * sxx + S.b * S.b * spp;
  double m = S.b * spp * d / hb;
  double xf = 2 * pi * s2 / m;
  auto P = final_pattern(W, S, 0, {4096, 6 * std::sqrt(s2)}, xf);
  auto g = [&](double u, double mu) { return std::exp(-(u - mu) * (u - mu) / (2 * s2)) / std::sqrt(2 * pi * s2); };
  double damp = std::exp(-d * d / (8 * s * s) * (S.a * S.a * sxx / s2));
  double l1 = 0, ref = 0;
  for (std::size_t i = 0; i < P.x.size(); ++i) {
    double u = P.x[i];
    if (std::abs(u) > 5 * xf) continue;
    double o = 0.5 * g(u, S.a * d / 2) + 0.5 * g(u, -S.a * d / 2) + g(u, 0) * damp * std::cos(u * m / s2);
    l1 += std::abs(P.density[i] - o);
    ref += o;
  }
  return l1 / ref;
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  const ProtocolConfig cfg = to_protocol_config(parse_config_text(case_study_config_text()));
  const auto& k = cfg.k;
  const double R = cfg.sphere.radius, M = cfg.sphere.mass, hb = k.hbar;
  std::printf("case study: wigner grid %d, pattern grid %d, seed %llu\n", cfg.wigner_n, cfg.pattern_n,
              (unsigned long long)cfg.seed);
  const PairedReport P = run(cfg);
  const RunReport& off = P.off;
  const RunReport& on = *P.on;
  const double hz = 1 / (2 * pi);

  begin(1, "Cooling");
  near("n_bar after t1", off.n_bar, 0.057, 0.20);

  begin(2, "Initial coherence");
  near("xi(0) (m)", off.xi0, 8.8e-13, 0.05);

  begin(3, "Boost gain");
  near("sqrt(v_p(t2)/v_p(0))", off.boost_gain, 104, 0.05);

  begin(4, "Free expansion");
  near("sqrt(v_x(T3)) (m)", std::sqrt(off.steps[2].state.v_x), 239e-9, 0.10);
  near("xi(T3) collapse off (m)", off.steps[2].xi, 607e-9, 0.10);
  near("xi(T3) collapse on (m)", on.steps[2].xi, 121e-9, 0.10);

  begin(5, "Trap design");
  {
    const auto& t1 = off.steps[0].trap;
    near("d_o = 30R: z_t / R", t1.z_t / R, 10.923, 0.01);
    near("d_o = 30R: f_x (Hz)", t1.omega_x * hz, 2159.1, 0.02);
    near("d_o = 30R: f_z (Hz)", t1.omega_z * hz, 2193.9, 0.02);
    const auto& t2 = off.steps[1].trap;
    line(t2.regime == Regime::inverted && t2.omega_x < 0, "d_o = 14.3408R: inverted", t2.omega_x * hz, "f_x < 0");
    near("d_o = 14.3408R: |f_x| (Hz)", std::abs(t2.omega_x) * hz, 50.0, 0.05);
    near("d_o = 14.3408R: z_t / R", t2.z_t / R, 11.852, 0.01);
    WireConfig tmpl = cfg.wires;
    near("flat root d_o / R", find_do_for_regime(tmpl, cfg.sphere, {Regime::flat, 0}, k) / R, 14.388, 0.001);
    double worst = 0;
    for (double d : {14.3408, 14.388, 14.431, 20.0, 30.0}) {
      WireConfig w = cfg.wires;
      w.d_o = d * R;
      worst = std::max(worst, rel(zero_field_height_numeric(w, k), zero_field_height(w)));
    }
    below("zero-field height, numeric vs closed form", worst, 1e-10);
  }

  begin(6, "Couplings");
  {
    const auto& c1 = off.cooling_coupling;
    const auto& c4 = off.split_coupling;
    const auto& c7 = off.measure_coupling;
    near("s0 step 1 from the coil flux", c1.geometric_s0, 0.208, 0.05);
    near("s0 steps 4/7 from the coil flux", c4.geometric_s0, 0.520, 0.05);
    near("eta_l / sigma (1/nm)", c1.geometric_eta_l_over_sigma * 1e-9, -1.13e-5, 0.10);
    near("eta_q / sigma^2 (1/nm^2)", c4.geometric_eta_q_over_sigma2 * 1e-18, -1.09e-10, 0.10);
    double ratio = c7.used.g_q / c4.used.g_q;
    double s = off.sigma7 / off.sigma4;
    near("g_q7 / g_q4 against (sigma7/sigma4)^2", ratio, s * s, 0.05);
    near("g_l / 2pi step 1 (Hz)", std::abs(c1.used.g_l) * hz, 1.8, 0.30);
    near("g_q / 2pi step 4 (Hz)", std::abs(c4.used.g_q) * hz, 25098, 0.30);
    near("g_q / 2pi step 7 (Hz)", std::abs(c7.used.g_q) * hz, 262, 0.30);
  }

  begin(7, "Split");
  {
    near("chi_4", off.split_coupling.strength.chi, 31.7, 0.05);
    line(std::abs(off.slit.d - 500e-9) < 1e-15, "pinned d (m)", off.slit.d, "5e-07");
    near("sigma_d at d = 500 nm (m)", off.slit.sigma_d, 11.63e-9, 0.05);

    // pure input, chi = 1e5, window up to d = sigma4
    const double Pin = 1, s = 1 / (std::sqrt(8.0) * Pin), sigma4 = 607e-9;
    OutcomeDistribution D([s](double x) { return std::exp(-x * x / (2 * s * s)) / std::sqrt(2 * pi * s * s); }, s,
                          1e5);
    PostSelection w{5, sigma4, 1000};
    double quad = range_probability(D, sigma4, Pin, w);
    Rng rng(cfg.seed);
    const int n = 100000;
    int hit = 0;
    for (int i = 0; i < n; ++i)
      if (accepted(slit_geometry(1e5, D.quantile(rng.uniform()), sigma4, Pin), w)) ++hit;
    double mc = double(hit) / n;
    near("window probability, quadrature", quad, std::erf(1.0), 0.01 / std::erf(1.0));
    near("window probability, 1e5 draws", mc, std::erf(1.0), 0.01 / std::erf(1.0));
    below("draws vs quadrature in binomial sigmas", std::abs(mc - quad) / std::sqrt(quad * (1 - quad) / n), 3);
  }

  begin(8, "Rotation and inflation diagnostics");
  within("A1 collapse off", off.kernel.A1, 1e-20, 1e-18);
  within("A1 collapse on", on.kernel.A1, 1e-20, 1e-18);
  within("A2 collapse off", off.kernel.A2, 1e-5, 1e-3);
  within("A2 collapse on", on.kernel.A2, 1e-5, 1e-3);
  near("sigma_Lambda collapse off (m)", off.sigma_lambda, 1.9e-9, 0.10);
  near("sigma_Lambda collapse on (m)", on.sigma_lambda, 2.4e-9, 0.10);

  begin(9, "Pattern");
  near("fringe spacing, peak finding (m)", off.fringes.x_f, 24.7e-9, 0.05);
  near("fringe spacing, closed form (m)", off.x_f_closed_form, 24.7e-9, 0.05);
  near("delta_x (m)", off.resolution.delta_x, 5e-9, 0.10);
  line(std::round(off.total_time * 1e3) == 596, "post-cooling time (s)", off.total_time, "596 ms");

  begin(10, "Falsification gap");
  above("visibility collapse off", off.fringes.visibility, 0.4);
  below("visibility collapse on", on.fringes.visibility, 1e-6);
  line(off.seed == on.seed && off.p_L == on.p_L, "same seed and outcome", double(on.seed), "paired");

  begin(11, "Decoherence budget");
  {
    near("1 / gamma_gas (s)", 1 / gamma_gas(cfg.sphere, cfg.env, k), 1.6, 0.05);
    auto bb = lambda_blackbody(cfg.sphere, cfg.env, k);
    near("black-body scattering / Lambda_G", bb.scatter / off.lambda_G, 9.4e-27, 0.10);
    near("black-body emission / Lambda_G", bb.emit / off.lambda_G, 2.1e-15, 0.10);
    near("(Lambda_2 - Lambda_G) / Lambda_G at 50 Hz", on.steps[1].standard_over_gravity, 1.4, 0.10);
    const auto& t2 = off.steps[1].trap;
    auto sc = lambda_surface(cfg.sphere, cfg.env, cfg.surface, t2.z_t, std::abs(t2.omega_x), {1e-3, 0, 0},
                             {0, 0, 0}, k);
    within("superconducting surface / Lambda_G at 1 mT", sc.lambda / off.lambda_G, 1e-12, 1e-10);
  }

  begin(12, "Oracle equivalence");
  below("closed-form moments vs ODE, 100 cases", moment_oracle_worst(M, k), 1e-8);
  below("Wigner transport vs covariance congruence", transport_worst(M, hb), 1e-6);
  below("cat pattern vs two-Gaussian marginal, L1", cat_l1(off, M, hb), 0.02);

  begin(13, "GQR boundary");
  within("mass at tau_G = 1 s, rho = 1e4 (amu)", mass_for_tau(1e4, 1.0, k) / amu, 5e11, 2e12);

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("\nsummary (%.1f s)\n", secs);
  int failed = 0;
  for (const auto& c : done) {
    std::printf("  criterion %2d  %s  %s\n", c.id, c.ok ? "PASS" : "FAIL", c.title.c_str());
    failed += !c.ok;
  }
  std::printf("%d of %zu criteria pass\n", int(done.size()) - failed, done.size());
  return failed ? 1 : 0;
}
