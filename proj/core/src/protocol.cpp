#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <memory>
#include <thread>

#include "skatepark/errors.hpp"
#include "skatepark/protocol.hpp"
#include "skatepark/rng.hpp"

namespace skatepark {

namespace {

void collect(std::vector<std::string>& bad, const std::string& where, const std::function<void()>& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    if (e.items().empty())
      bad.push_back(where + ": " + e.what());
    else
      for (const auto& i : e.items()) bad.push_back(where + ": " + i);
  }
}

bool pow2(int n) { return n >= 16 && (n & (n - 1)) == 0; }

const char* step_names[7] = {"cooling", "boost", "free", "split", "rotation", "inflation", "measure"};

SegmentKind segment_kind(Regime r) {
  switch (r) {
    case Regime::attractive: return SegmentKind::harmonic;
    case Regime::inverted: return SegmentKind::inverted;
    default: return SegmentKind::free;
  }
}

double segment_omega(const TrapReport& t) { return t.regime == Regime::flat ? 0.0 : std::abs(t.omega_x); }

bool same_request(const TrapRequest& a, const TrapRequest& b) {
  if (a.d_o || b.d_o) return a.d_o == b.d_o;
  return a.target.regime == b.target.regime && a.target.omega == b.target.omega;
}

}  // namespace

void ProtocolConfig::validate() const {
  std::vector<std::string> bad;
  collect(bad, "constants", [&] { k.validate(); });
  collect(bad, "sphere", [&] { skatepark::validate(sphere); });
  collect(bad, "environment", [&] { skatepark::validate(env); });
  collect(bad, "surface", [&] { skatepark::validate(surface); });
  for (int i = 0; i < 7; ++i) {
    const auto& t = traps[i];
    std::string where = "step " + std::to_string(i + 1) + " trap";
    if (t.d_o) {
      WireConfig w = wires;
      w.d_o = *t.d_o;
      collect(bad, where, [&] { w.validate(); });
    } else if (t.target.regime != Regime::flat && !(t.target.omega > 0)) {
      bad.push_back(where + ": regime request needs a positive frequency");
    }
    if (!(durations[i] >= 0)) bad.push_back("t" + std::to_string(i + 1) + " must be >= 0");
  }
  if (!(wires.d_i > 0) || !(wires.I_i > 0) || !(wires.I_o > 0)) bad.push_back("wires: d_i and currents must be positive");
  WireConfig w = wires;
  w.d_o = 2 * w.d_i;
  collect(bad, "linear coil", [&] { coil_linear.validate(w); });
  collect(bad, "quadratic coil", [&] { coil_quadratic.validate(w); });
  for (int i = 0; i < 3; ++i) collect(bad, "cavity " + std::to_string(i), [&] { cavities[i].validate(); });
  for (const auto& s : {s0_step1, s0_step4, s0_step7})
    if (s && !(std::abs(*s) < 1)) bad.push_back("operating s0 must lie in (-1, 1)");
  if (eta_q_over_sigma2 && !std::isfinite(*eta_q_over_sigma2)) bad.push_back("eta_q override must be finite");
  if (!(n0 >= 0)) bad.push_back("n0 must be >= 0");
  if (!(gamma_heat >= 0)) bad.push_back("heating rate must be >= 0");
  if (!(detuning_over_omega1 < 0)) bad.push_back("cooling needs a red detuning");
  if (pinned_d && !(*pinned_d > 0)) bad.push_back("pinned slit separation must be positive");
  if (!(post_selection.d_min_over_sigma_d >= 0) || !(post_selection.d_max >= 0)) bad.push_back("post-selection window must be >= 0");
  if (post_selection.max_draws < 1) bad.push_back("max draws must be >= 1");
  if (!pow2(wigner_n)) bad.push_back("wigner grid size must be a power of two >= 16");
  if (!pow2(pattern_n)) bad.push_back("pattern grid size must be a power of two >= 16");
  if (!(pattern_half_width >= 0)) bad.push_back("pattern half width must be >= 0");
  if (outcome_table_points < 64) bad.push_back("outcome table needs >= 64 points");
  if (!bad.empty()) throw ValidationError("invalid protocol configuration", bad);
}

TrapReport solve_trap(const ProtocolConfig& cfg, int step) {
  const auto& req = cfg.traps.at(step);
  WireConfig w = cfg.wires;
  w.d_o = req.d_o ? *req.d_o : find_do_for_regime(w, cfg.sphere, req.target, cfg.k);
  auto t = characterize_trap(w, cfg.sphere, cfg.k);
  TrapReport r;
  r.d_o = w.d_o;
  r.z_t = t.z_t;
  r.omega_x = t.omega_x;
  r.omega_z = t.omega_z;
  r.regime = t.regime;
  r.field_at_trap = std::hypot(t.B_at_trap[0], t.B_at_trap[1], t.B_at_trap[2]);
  r.critical_ratio = critical_field_check(w, cfg.sphere, t.z_t, cfg.k).ratio;
  return r;
}

RunReport run_until_split(const ProtocolConfig& cfg, bool collapse, const RunReport* ref) {
  cfg.validate();
  const auto& k = cfg.k;
  const auto& S = cfg.sphere;
  const double M = S.mass;
  RunReport R;
  R.gravity_collapse = collapse;
  R.seed = cfg.seed;
  R.radius = S.radius;
  R.lambda_G = lambda_gravity(S, k);
  R.steps.resize(7);

  // traps, reusing solutions of repeated requests
  std::array<TrapCharacterization, 7> tc;
  for (int i = 0; i < 7; ++i) {
    int j = 0;
    while (j < i && !same_request(cfg.traps[j], cfg.traps[i])) ++j;
    WireConfig w = cfg.wires;
    if (j < i) {
      R.steps[i].trap = R.steps[j].trap;
      tc[i] = tc[j];
      continue;
    }
    R.steps[i].trap = solve_trap(cfg, i);
    w.d_o = R.steps[i].trap.d_o;
    tc[i] = characterize_trap(w, S, k);
  }

  double T = 0;
  for (int i = 0; i < 7; ++i) {
    auto& st = R.steps[i];
    st.index = i + 1;
    st.name = step_names[i];
    st.duration = cfg.durations[i];
    if (i > 0) T += st.duration;
    st.end_time = T;
    const double w = segment_omega(st.trap);
    double surf = 0;
    if (cfg.surface_in_budget) {
      auto term = lambda_surface(S, cfg.env, cfg.surface, st.trap.z_t, w, tc[i].B_at_trap, tc[i].dB_dx, k);
      surf = term.lambda;
      for (auto& m : term.warnings) R.warnings.push_back("step " + std::to_string(i + 1) + ": " + m);
    }
    bool grav = collapse && i >= 1 && i <= 5;
    st.budget = make_budget(S, cfg.env, w, grav, surf, k);
    st.lambda_total = step_budget(st.budget);
    auto std_only = st.budget;
    std_only.include_gravity = false;
    st.standard_over_gravity = step_budget(std_only) / R.lambda_G;
    if (st.trap.critical_ratio >= 1)
      R.warnings.push_back("step " + std::to_string(i + 1) + ": field above the first critical field");
  }
  R.total_time = T;

  // step 1: cooling
  const auto& t1 = R.steps[0].trap;
  if (t1.regime != Regime::attractive) throw PhysicsError("step 1 trap is not attractive");
  const double w1 = t1.omega_x;
  R.sigma1 = std::sqrt(k.hbar / (2 * M * w1));
  {
    WireConfig w = cfg.wires;
    w.d_o = t1.d_o;
    auto& cr = R.cooling_coupling;
    cr.geometric = coupling_coefficients(w, S, cfg.coil_linear, t1.z_t, R.sigma1, k);
    cr.geometric_s0 = cr.geometric.s0;
    cr.geometric_eta_l_over_sigma = cr.geometric.eta_l / R.sigma1;
    cr.geometric_eta_q_over_sigma2 = cr.geometric.eta_q / (R.sigma1 * R.sigma1);
    double s0 = cfg.s0_step1.value_or(cr.geometric.s0);
    cr.used = couplings_at(cr.geometric.eta_l, cr.geometric.eta_q, s0, cfg.cavities[0]);
  }
  CoolingSetup cs;
  cs.omega_1 = w1;
  cs.kappa_1 = cfg.cavities[0].kappa;
  cs.g_l = std::abs(R.cooling_coupling.used.g_l);
  cs.alpha_1 = cfg.cavities[0].alpha_mag;
  cs.detuning = cfg.detuning_over_omega1 * w1;
  cs.n0 = cfg.n0;
  cs.t1 = cfg.durations[0];
  cs.gamma_heat = cfg.gamma_heat;
  cs.validate();
  if (!sideband_rates(cs).cooling()) throw PhysicsError("sideband rates heat instead of cooling");
  R.cooling_adiabaticity = cs.adiabaticity();
  R.n_bar = phonon_number(cs, cs.t1);
  R.n_bar_steady = steady_state_phonons(cs);
  GaussianState st = initial_state(cs, S, k);
  R.xi0 = coherence_length(st, k);
  R.steps[0].state = st;
  R.steps[0].purity = purity(st, k);
  R.steps[0].xi = R.xi0;
  const double vp0 = st.v_p;

  // steps 2-3: Gaussian segments
  for (int i = 1; i <= 2; ++i) {
    auto& s = R.steps[i];
    QuadraticSegment seg{segment_kind(s.trap.regime), segment_omega(s.trap), s.duration, s.lambda_total};
    st = evolve_segment(st, seg, M, k, HeisenbergPolicy::error, &R.warnings);
    s.state = st;
    s.purity = purity(st, k);
    s.xi = coherence_length(st, k);
  }
  R.boost_gain = std::sqrt(R.steps[1].state.v_p / vp0);
  const GaussianState s3 = st;
  R.purity3 = purity(s3, k);

  // step 4: split
  const auto& st4 = R.steps[3];
  const double t4 = st4.duration;
  R.sigma4 = ref ? ref->sigma4 : R.steps[2].xi;
  const double s4 = R.sigma4;
  {
    WireConfig w = cfg.wires;
    w.d_o = st4.trap.d_o;
    auto& cr = R.split_coupling;
    cr.geometric = coupling_coefficients(w, S, cfg.coil_quadratic, st4.trap.z_t, s4, k);
    cr.geometric_s0 = cr.geometric.s0;
    cr.geometric_eta_l_over_sigma = cr.geometric.eta_l / s4;
    cr.geometric_eta_q_over_sigma2 = cr.geometric.eta_q / (s4 * s4);
    double eq = cfg.eta_q_over_sigma2 ? *cfg.eta_q_over_sigma2 * s4 * s4 : cr.geometric.eta_q;
    double s0 = cfg.s0_step4.value_or(cr.geometric.s0);
    cr.used = couplings_at(cr.geometric.eta_l, eq, s0, cfg.cavities[1]);
    cr.strength = measurement_strength(cr.used.g_q, cfg.cavities[1].alpha_mag, cfg.cavities[1].kappa, t4);
  }
  if (ref) R.split_coupling.strength = ref->split_coupling.strength;
  const double chi = R.split_coupling.strength.chi;
  if (!(chi > 0)) throw PhysicsError("split measurement strength is zero");
  if (R.split_coupling.strength.adiabaticity >= 1) R.warnings.push_back("step 4: cavity not adiabatically eliminable");
  R.theta = theta_values(s3, s4, k);
  R.omega_g = induced_frequency(R.split_coupling.used.g_q, cfg.cavities[1].alpha_mag, M, s4, k);
  R.omega_sigma = omega_sigma(M, s4, k);
  R.t4_root_printed = phase_root(R.theta.printed, R.omega_g, R.omega_sigma);
  R.t4_root_scaled = phase_root(R.theta.scaled, R.omega_g, R.omega_sigma);
  R.phase_at_t4 = phase_evolution(R.theta.printed, R.omega_g, R.omega_sigma, t4);

  R.gas_survival = std::exp(-R.steps[2].budget.gamma_gas * R.total_time);
  return R;
}

RunReport run_single(const ProtocolConfig& cfg, bool collapse, const RunReport* ref) {
  RunReport R = run_until_split(cfg, collapse, ref);
  const auto& k = cfg.k;
  const double M = cfg.sphere.mass;
  const GaussianState s3 = R.steps[2].state;
  const auto& st4 = R.steps[3];
  const double t4 = st4.duration;
  const double s4 = R.sigma4;
  const double chi = R.split_coupling.strength.chi;
  GaussianAmplitude amp = GaussianAmplitude::from_state(s3, k);
  const double P3 = R.purity3;
  if (ref) {
    R.p_L = ref->p_L;
    R.slit = ref->slit;
    R.draws = ref->draws;
    R.range_probability = ref->range_probability;
  } else {
    const double wx = std::sqrt(s3.v_x);
    auto diag = [amp, s4](double xt) { return s4 * amp(s4 * xt, s4 * xt); };
    OutcomeDistribution Po(diag, wx / s4, chi, cfg.outcome_table_points);
    PostSelection win = cfg.post_selection;
    if (win.d_max == 0) win.d_max = R.steps[2].xi;
    R.range_probability = range_probability(Po, s4, P3, win);
    if (cfg.pinned_d) {
      R.p_L = outcome_for_separation(*cfg.pinned_d, chi, s4, P3);
      R.slit = slit_geometry(chi, R.p_L, s4, P3);
      R.draws = 0;
    } else {
      auto o = sample_outcome(Po, s4, P3, win, cfg.seed);
      R.p_L = o.p_L;
      R.slit = o.geometry;
      R.draws = o.draws;
    }
  }
  if (!R.slit.resolved) throw PhysicsError("measurement outcome does not resolve two slits");
  R.split_decay = st4.lambda_total * t4;
  auto rho4 = apply_split(amp, s4, chi, R.p_L, R.split_decay);

  WignerGridParams gp;
  gp.n_x = gp.n_p = cfg.wigner_n;
  gp.x_extent = s4 * std::sqrt((R.p_L + 6) / chi);
  gp.p_extent = 8 * k.hbar / R.slit.sigma_d;
  auto W4 = wigner_from_density(rho4, gp, k);
  R.wigner_norm_drift = W4.norm_drift;
  R.wigner_max_imag = W4.max_imag;

  // step 5: rotation
  const auto& st5 = R.steps[4];
  const auto& st6 = R.steps[5];
  R.omega5 = st5.trap.regime == Regime::attractive ? st5.trap.omega_x : 0;
  R.omega6 = st6.trap.regime == Regime::inverted ? std::abs(st6.trap.omega_x) : 0;
  R.t6 = st6.duration;
  if (cfg.t5_auto) {
    if (!(R.omega5 > 0) || !(R.omega6 > 0)) throw PhysicsError("automatic t5 needs attractive step 5 and inverted step 6");
    R.t5 = solve_t5(R.omega5, R.omega6);
  } else {
    R.t5 = st5.duration;
  }
  if (R.t5 > 0 && !(R.omega5 > 0)) throw PhysicsError("step 5 trap is not attractive");
  if (R.t6 > 0 && !(R.omega6 > 0)) throw PhysicsError("step 6 trap is not inverted");
  if (R.t5 != st5.duration) {
    // timeline follows the solved duration
    double dT = R.t5 - st5.duration;
    for (int i = 4; i < 7; ++i) R.steps[i].end_time += dT;
    R.steps[4].duration = R.t5;
    R.total_time += dT;
  }
  if (R.omega5 > 0)
    R.kernel = kernel_diagnostics(st5.lambda_total, R.omega5, R.t5, M, R.slit.d, R.slit.sigma_d, k);

  // step 6: inflation
  SymplecticMap Sr = R.omega5 > 0 ? rotation_map(R.omega5, R.t5, M) : SymplecticMap{};
  SymplecticMap Si = R.omega6 > 0 ? inflation_map(R.omega6, R.t6, M) : SymplecticMap{};
  R.map = compose(Si, Sr);
  R.sigma_lambda = R.omega6 > 0 ? blurring_width(st6.lambda_total, R.omega6, R.t6, M, k) : 0;
  if (R.omega6 > 0) R.x_f_closed_form = std::exp(R.omega6 * R.t6) * 2 * pi * k.hbar / (M * R.slit.d * R.omega6);

  // final pattern
  const double fringe = std::abs(R.map.b) * 2 * pi * k.hbar / R.slit.d;
  auto mom = moments(W4);
  const auto& m = R.map;
  double spread = std::sqrt(std::max(0.0, m.a * m.a * mom.v_x + m.b * m.b * mom.v_p + 2 * m.a * m.b * mom.c));
  PatternGridParams pg{cfg.pattern_n, cfg.pattern_half_width > 0 ? cfg.pattern_half_width : 6 * (spread + R.sigma_lambda)};
  if (ref && !ref->pattern.x.empty()) pg.half_width = -ref->pattern.x.front();
  std::optional<double> expected;
  if (fringe > 8 * 2 * pg.half_width / pg.n) expected = fringe;
  R.pattern = final_pattern(W4, R.map, R.sigma_lambda, pg, expected);
  R.fringes = fringe_metrics(R.pattern.x, R.pattern.density, expected);
  R.sigma7 = std::sqrt(R.pattern.second_moment());

  // step 7: measure
  const auto& st7 = R.steps[6];
  {
    WireConfig w = cfg.wires;
    w.d_o = st7.trap.d_o;
    auto& cr = R.measure_coupling;
    const double s7 = R.sigma7;
    cr.geometric = coupling_coefficients(w, cfg.sphere, cfg.coil_quadratic, st7.trap.z_t, s7, k);
    cr.geometric_s0 = cr.geometric.s0;
    cr.geometric_eta_l_over_sigma = cr.geometric.eta_l / s7;
    cr.geometric_eta_q_over_sigma2 = cr.geometric.eta_q / (s7 * s7);
    double eq = cfg.eta_q_over_sigma2 ? *cfg.eta_q_over_sigma2 * s7 * s7 : cr.geometric.eta_q;
    double s0 = cfg.s0_step7.value_or(cr.geometric.s0);
    cr.used = couplings_at(cr.geometric.eta_l, eq, s0, cfg.cavities[2]);
    cr.strength = measurement_strength(cr.used.g_q, cfg.cavities[2].alpha_mag, cfg.cavities[2].kappa, st7.duration);
  }
  if (R.measure_coupling.strength.adiabaticity >= 1) R.warnings.push_back("step 7: cavity not adiabatically eliminable");
  if (R.measure_coupling.strength.chi > 0 && st7.duration > 0)
    R.resolution = resolution_bound(R.sigma7, R.measure_coupling.strength.chi, st7.duration, cfg.cavities[2].kappa);

  R.gas_survival = std::exp(-R.steps[2].budget.gamma_gas * R.total_time);
  return R;
}

Verdict falsification_verdict(const RunReport& off, const RunReport* on) {
  Verdict v;
  v.xi = off.steps.at(2).xi;
  v.d = off.slit.d;
  v.d_over_xi = v.d / v.xi;
  v.visibility_off = off.fringes.visibility;
  if (on) {
    v.xi_G = on->steps.at(2).xi;
    v.xi_G_over_d = v.xi_G / v.d;
    v.visibility_on = on->fringes.visibility;
  }
  v.visibility_gap = v.visibility_off - v.visibility_on;
  v.regime_ok = on && 3 * v.xi_G <= v.d && v.d <= v.xi;
  const double xf = std::isfinite(off.fringes.x_f) ? off.fringes.x_f : 0;
  v.x_f_over_sigma_lambda = off.sigma_lambda > 0 ? xf / off.sigma_lambda : INFINITY;
  v.x_f_over_delta_x = off.resolution.delta_x > 0 ? xf / off.resolution.delta_x : INFINITY;
  v.fringes_resolvable = v.x_f_over_sigma_lambda > 2 && v.x_f_over_delta_x > 2;
  v.falsifiable = v.regime_ok && v.fringes_resolvable && v.visibility_gap > 0.5 * v.visibility_off;
  return v;
}

PairedReport run(const ProtocolConfig& cfg, bool with_collapse) {
  PairedReport P;
  P.off = run_single(cfg, false);
  if (with_collapse) P.on = run_single(cfg, true, &P.off);
  P.verdict = falsification_verdict(P.off, P.on ? &*P.on : nullptr);
  return P;
}

std::vector<TrapScanRow> trap_scan(const ProtocolConfig& cfg, double lo, double hi, int n, bool with_couplings) {
  if (n < 1 || !(lo > cfg.wires.d_i) || !(hi >= lo)) throw ValidationError("trap scan needs d_i < d_o_min <= d_o_max and n >= 1");
  std::vector<TrapScanRow> rows;
  for (int i = 0; i < n; ++i) {
    TrapScanRow r;
    r.d_o = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    WireConfig w = cfg.wires;
    w.d_o = r.d_o;
    r.zero_field_height = NAN;
    try {
      r.zero_field_height = zero_field_height(w);
      auto t = characterize_trap(w, cfg.sphere, cfg.k);
      r.found = true;
      r.trap.d_o = r.d_o;
      r.trap.z_t = t.z_t;
      r.trap.omega_x = t.omega_x;
      r.trap.omega_z = t.omega_z;
      r.trap.regime = t.regime;
      r.trap.field_at_trap = std::hypot(t.B_at_trap[0], t.B_at_trap[1], t.B_at_trap[2]);
      r.trap.critical_ratio = critical_field_check(w, cfg.sphere, t.z_t, cfg.k).ratio;
      if (with_couplings) {
        auto a = coupling_coefficients(w, cfg.sphere, cfg.coil_linear, t.z_t, 1.0, cfg.k);
        auto b = coupling_coefficients(w, cfg.sphere, cfg.coil_quadratic, t.z_t, 1.0, cfg.k);
        r.s0_linear = a.s0;
        r.eta_l_over_sigma = a.eta_l;
        r.s0_quadratic = b.s0;
        r.eta_q_over_sigma2 = b.eta_q;
      }
    } catch (const PhysicsError&) {
      r.found = false;
    }
    rows.push_back(r);
  }
  return rows;
}

SlitSample slit_sample(const ProtocolConfig& cfg, int n) {
  if (n < 1) throw ValidationError("sample count must be >= 1");
  RunReport R = run_until_split(cfg, false);
  SlitSample out;
  out.sigma4 = R.sigma4;
  out.chi = R.split_coupling.strength.chi;
  out.purity3 = R.purity3;
  const auto s3 = R.steps[2].state;
  GaussianAmplitude amp = GaussianAmplitude::from_state(s3, cfg.k);
  const double s4 = out.sigma4;
  auto diag = [amp, s4](double xt) { return s4 * amp(s4 * xt, s4 * xt); };
  auto Po = std::make_shared<OutcomeDistribution>(diag, std::sqrt(s3.v_x) / s4, out.chi, cfg.outcome_table_points);
  out.window = cfg.post_selection;
  if (out.window.d_max == 0) out.window.d_max = R.steps[2].xi;
  out.range_probability = range_probability(*Po, s4, out.purity3, out.window);
  const int batch = 10000;
  long accepted_count = 0;
  for (int b = 0; b * batch < n; ++b) {
    Rng rng(batch_seed(cfg.seed, b));
    for (int i = b * batch; i < std::min(n, (b + 1) * batch); ++i) {
      double p = Po->quantile(rng.uniform());
      out.p_L.push_back(p);
      auto g = slit_geometry(out.chi, p, s4, out.purity3);
      if (g.resolved) out.d.push_back(g.d);
      if (accepted(g, out.window)) ++accepted_count;
    }
  }
  out.acceptance = double(accepted_count) / n;
  out.outcome_density = [Po](double p) { return Po->density(p) / Po->normalization(); };
  const double P3 = out.purity3;
  out.slit_density = [Po, s4, P3](double d) { return slit_density(*Po, d, s4, P3) / Po->normalization(); };
  return out;
}

bool sweepable(const std::string& a) {
  return a == "t2_s" || a == "t3_s" || a == "t6_s" || a == "vib_psd_scale" || a == "d_nm";
}

std::vector<SweepRow> sweep(const ProtocolConfig& cfg, const std::string& axis, const std::vector<double>& values,
                            bool with_collapse) {
  if (!sweepable(axis)) throw ValidationError("unknown sweep axis: " + axis);
  auto one = [&](double v) {
    SweepRow row;
    row.value = v;
    try {
      ProtocolConfig c = cfg;
      if (axis == "t2_s") c.durations[1] = v;
      if (axis == "t3_s") c.durations[2] = v;
      if (axis == "t6_s") c.durations[5] = v;
      if (axis == "vib_psd_scale") c.env.vib_psd = cfg.env.vib_psd.scaled(v);
      if (axis == "d_nm") c.pinned_d = v * 1e-9;
      auto P = run(c, with_collapse);
      row.ok = true;
      row.xi3 = P.off.steps[2].xi;
      row.purity3 = P.off.purity3;
      row.lambda_ratio_step2 = P.off.steps[1].standard_over_gravity;
      row.d = P.off.slit.d;
      row.x_f = P.off.fringes.x_f;
      row.sigma_lambda = P.off.sigma_lambda;
      row.visibility_off = P.off.fringes.visibility;
      if (P.on) {
        row.xi3_G = P.on->steps[2].xi;
        row.visibility_on = P.on->fringes.visibility;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  };
  std::vector<SweepRow> rows;
  const std::size_t batch = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t i = 0; i < values.size(); i += batch) {
    std::vector<std::future<SweepRow>> fs;
    for (std::size_t j = i; j < std::min(values.size(), i + batch); ++j)
      fs.push_back(std::async(std::launch::async, one, values[j]));
    for (auto& f : fs) rows.push_back(f.get());
  }
  return rows;
}

}  // namespace skatepark
