#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "skatepark/report.hpp"

namespace skatepark {

using nlohmann::ordered_json;

namespace {

ordered_json num(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

double hz(double omega) { return omega / (2 * pi); }

std::string header(const std::string& what, const OutputMeta& m) {
  return "# skatepark " + what + "\n# config_hash=" + m.config_hash + "\n# seed=" + std::to_string(m.seed) + "\n";
}

ordered_json trap_json(const TrapReport& t, double R) {
  return {{"d_o_m", num(t.d_o)},           {"d_o_over_R", num(t.d_o / R)},
          {"z_t_m", num(t.z_t)},           {"z_t_over_R", num(t.z_t / R)},
          {"f_x_Hz", num(hz(t.omega_x))},  {"f_z_Hz", num(hz(t.omega_z))},
          {"regime", to_string(t.regime)}, {"field_T", num(t.field_at_trap)},
          {"critical_field_ratio", num(t.critical_ratio)}};
}

ordered_json budget_json_of(const LocalizationBudget& b) {
  return {{"lambda_G", num(b.lambda_G)},
          {"blackbody_scatter", num(b.bb_scatter)},
          {"blackbody_emit", num(b.bb_emit)},
          {"blackbody_absorb", num(b.bb_absorb)},
          {"vibration", num(b.lambda_vib)},
          {"surface", num(b.lambda_surface)},
          {"gravity_included", b.include_gravity},
          {"total", num(step_budget(b))},
          {"gas_rate_per_s", num(b.gamma_gas)}};
}

ordered_json coupling_json(const CouplingReport& c, double sigma) {
  return {{"length_scale_m", num(sigma)},
          {"geometric_s0", num(c.geometric_s0)},
          {"geometric_eta_l_over_sigma_per_nm", num(c.geometric_eta_l_over_sigma * 1e-9)},
          {"geometric_eta_q_over_sigma2_per_nm2", num(c.geometric_eta_q_over_sigma2 * 1e-18)},
          {"s0", num(c.used.s0)},
          {"c0", num(c.used.c0)},
          {"eta_l", num(c.used.eta_l)},
          {"eta_q", num(c.used.eta_q)},
          {"omega_0_rad_per_s", num(c.used.omega_0)},
          {"g_l_Hz", num(hz(c.used.g_l))},
          {"g_q_Hz", num(hz(c.used.g_q))},
          {"chi", num(c.strength.chi)},
          {"chi_bound", num(c.strength.bound)},
          {"adiabaticity", num(c.strength.adiabaticity)}};
}

ordered_json run_json(const RunReport& r, double R) {
  ordered_json steps = ordered_json::array();
  ordered_json partial = ordered_json::array();
  for (const auto& s : r.steps) {
    ordered_json j = {{"index", s.index},
                      {"name", s.name},
                      {"duration_s", num(s.duration)},
                      {"end_time_s", num(s.end_time)},
                      {"trap", trap_json(s.trap, R)},
                      {"localization", budget_json_of(s.budget)},
                      {"lambda_total", num(s.lambda_total)},
                      {"standard_over_gravity", num(s.standard_over_gravity)}};
    if (s.index <= 3)
      j["state"] = {{"v_x_m2", num(s.state.v_x)},
                    {"v_p", num(s.state.v_p)},
                    {"c", num(s.state.c)},
                    {"sqrt_v_x_m", num(std::sqrt(s.state.v_x))},
                    {"purity", num(s.purity)},
                    {"xi_m", num(s.xi)}};
    steps.push_back(j);
    if (s.index >= 2) partial.push_back(num(s.end_time));
  }
  ordered_json warnings = r.warnings;
  return {
      {"gravity_collapse", r.gravity_collapse},
      {"lambda_G_per_m2_s", num(r.lambda_G)},
      {"steps", steps},
      {"timeline", {{"partial_sums_s", partial}, {"total_time_s", num(r.total_time)}}},
      {"cooling",
       {{"n_bar", num(r.n_bar)},
        {"n_bar_steady", num(r.n_bar_steady)},
        {"sigma1_m", num(r.sigma1)},
        {"xi0_m", num(r.xi0)},
        {"adiabaticity", num(r.cooling_adiabaticity)},
        {"coupling", coupling_json(r.cooling_coupling, r.sigma1)}}},
      {"boost", {{"momentum_gain", num(r.boost_gain)}}},
      {"split",
       {{"sigma4_m", num(r.sigma4)},
        {"purity_in", num(r.purity3)},
        {"theta_printed", num(r.theta.printed)},
        {"theta_scaled", num(r.theta.scaled)},
        {"omega_g_rad_per_s", num(r.omega_g)},
        {"omega_sigma_rad_per_s", num(r.omega_sigma)},
        {"t4_root_printed_s", num(r.t4_root_printed)},
        {"t4_root_scaled_s", num(r.t4_root_scaled)},
        {"phase_at_t4", num(r.phase_at_t4)},
        {"coupling", coupling_json(r.split_coupling, r.sigma4)},
        {"p_L", num(r.p_L)},
        {"d_m", num(r.slit.d)},
        {"sigma_d_m", num(r.slit.sigma_d)},
        {"sigma_d_amplitude_m", num(r.slit.sigma_d_amplitude)},
        {"draws", r.draws},
        {"range_probability", num(r.range_probability)},
        {"decay_per_m2", num(r.split_decay)}}},
      {"rotation",
       {{"omega5_rad_per_s", num(r.omega5)},
        {"t5_s", num(r.t5)},
        {"A1", num(r.kernel.A1)},
        {"A2", num(r.kernel.A2)},
        {"B_max", num(r.kernel.B_max)},
        {"negligible", r.kernel.negligible}}},
      {"inflation",
       {{"omega6_rad_per_s", num(r.omega6)},
        {"t6_s", num(r.t6)},
        {"sigma_lambda_m", num(r.sigma_lambda)},
        {"map", {num(r.map.a), num(r.map.b), num(r.map.g), num(r.map.d)}},
        {"x_f_closed_form_m", num(r.x_f_closed_form)}}},
      {"pattern",
       {{"x_f_m", num(r.fringes.x_f)},
        {"visibility", num(r.fringes.visibility)},
        {"spectral_visibility", num(r.fringes.spectral_visibility)},
        {"spectral_period_m", num(r.fringes.spectral_period)},
        {"extrema", r.fringes.extrema},
        {"envelope_only", r.fringes.envelope_only},
        {"sigma7_m", num(r.sigma7)},
        {"points", r.pattern.x.size()},
        {"wigner_norm_drift", num(r.wigner_norm_drift)},
        {"wigner_max_imag", num(r.wigner_max_imag)}}},
      {"measure",
       {{"coupling", coupling_json(r.measure_coupling, r.sigma7)},
        {"delta_x_m", num(r.resolution.delta_x)},
        {"delta_x_weaker_m", num(r.resolution.weaker)}}},
      {"gas_survival_probability", num(r.gas_survival)},
      {"warnings", warnings},
  };
}

}  // namespace

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string report_json(const PairedReport& r, const OutputMeta& m) {
  const auto& v = r.verdict;
  ordered_json j = {
      {"report_version", report_version},
      {"generator", "skatepark"},
      {"config_hash", m.config_hash},
      {"seed", m.seed},
      {"runs",
       {{"collapse_off", run_json(r.off, r.off.radius)},
        {"collapse_on", r.on ? run_json(*r.on, r.on->radius) : ordered_json(nullptr)}}},
      {"verdict",
       {{"xi_m", num(v.xi)},
        {"xi_G_m", num(v.xi_G)},
        {"d_m", num(v.d)},
        {"d_over_xi", num(v.d_over_xi)},
        {"xi_G_over_d", num(v.xi_G_over_d)},
        {"regime_ok", v.regime_ok},
        {"visibility_off", num(v.visibility_off)},
        {"visibility_on", num(v.visibility_on)},
        {"visibility_gap", num(v.visibility_gap)},
        {"x_f_over_sigma_lambda", num(v.x_f_over_sigma_lambda)},
        {"x_f_over_delta_x", num(v.x_f_over_delta_x)},
        {"fringes_resolvable", v.fringes_resolvable},
        {"falsifiable", v.falsifiable}}},
  };
  return j.dump(2) + "\n";
}

std::string pattern_csv(const PairedReport& r, const OutputMeta& m) {
  std::string s = header("pattern", m);
  const auto& a = r.off.pattern;
  const bool two = r.on.has_value();
  s += two ? "x_m,density_no_collapse,density_with_collapse\n" : "x_m,density_no_collapse\n";
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    s += fmt17(a.x[i]) + "," + fmt17(a.density[i]);
    if (two) s += "," + fmt17(r.on->pattern.density.at(i));
    s += "\n";
  }
  return s;
}

std::string budget_json(const ProtocolConfig& cfg, const RunReport& off, const RunReport* on, const OutputMeta& m) {
  const double LG = off.lambda_G;
  auto bb = lambda_blackbody(cfg.sphere, cfg.env, cfg.k);
  const double gamma = gamma_gas(cfg.sphere, cfg.env, cfg.k);
  ordered_json steps = ordered_json::array();
  for (std::size_t i = 0; i < off.steps.size(); ++i) {
    const auto& s = off.steps[i];
    ordered_json j = {{"index", s.index},
                      {"name", s.name},
                      {"trap", trap_json(s.trap, off.radius)},
                      {"collapse_off", budget_json_of(s.budget)},
                      {"standard_over_gravity", num(s.standard_over_gravity)}};
    if (on) j["collapse_on"] = budget_json_of(on->steps[i].budget);
    steps.push_back(j);
  }
  ordered_json j = {
      {"report_version", report_version},
      {"config_hash", m.config_hash},
      {"seed", m.seed},
      {"lambda_G_per_m2_s", num(LG)},
      {"gas_rate_per_s", num(gamma)},
      {"gas_time_s", num(gamma > 0 ? 1 / gamma : INFINITY)},
      {"blackbody_scatter_over_G", num(bb.scatter / LG)},
      {"blackbody_emit_over_G", num(bb.emit / LG)},
      {"blackbody_absorb_over_G", num(bb.absorb / LG)},
      {"tau_G_s", num(tau_G(cfg.sphere, cfg.k))},
      {"steps", steps},
  };
  return j.dump(2) + "\n";
}

std::string trap_scan_csv(const std::vector<TrapScanRow>& rows, double R, bool cpl, const OutputMeta& m) {
  std::string s = header("trap-scan", m);
  s += "d_o_over_R,found,z_t_over_R,f_x_Hz,f_z_Hz,regime,field_T,critical_ratio,z_zero_over_R";
  if (cpl) s += ",s0_linear,eta_l_over_sigma_per_nm,s0_quadratic,eta_q_over_sigma2_per_nm2";
  s += "\n";
  for (const auto& r : rows) {
    s += fmt17(r.d_o / R) + "," + (r.found ? "1" : "0") + ",";
    if (r.found)
      s += fmt17(r.trap.z_t / R) + "," + fmt17(hz(r.trap.omega_x)) + "," + fmt17(hz(r.trap.omega_z)) + "," +
           to_string(r.trap.regime) + "," + fmt17(r.trap.field_at_trap) + "," + fmt17(r.trap.critical_ratio);
    else
      s += ",,,,,";
    s += "," + fmt17(r.zero_field_height / R);
    if (cpl) {
      if (r.found)
        s += "," + fmt17(r.s0_linear) + "," + fmt17(r.eta_l_over_sigma * 1e-9) + "," + fmt17(r.s0_quadratic) + "," +
             fmt17(r.eta_q_over_sigma2 * 1e-18);
      else
        s += ",,,,";
    }
    s += "\n";
  }
  return s;
}

std::string slit_sample_csv(const SlitSample& ss, int bins, const OutputMeta& m) {
  std::string s = header("slit-sample", m);
  s += "# samples=" + std::to_string(ss.p_L.size()) + " chi=" + fmt17(ss.chi) + " sigma4_m=" + fmt17(ss.sigma4) +
       " acceptance=" + fmt17(ss.acceptance) + " range_probability=" + fmt17(ss.range_probability) + "\n";
  s += "quantity,bin_lo,bin_hi,count,density_sampled,density_quadrature\n";
  auto hist = [&](const char* name, const std::vector<double>& v, const std::function<double(double)>& f) {
    if (v.empty()) return;
    auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
    double lo = *lo_it, hi = *hi_it;
    if (hi == lo) hi = lo + 1;
    std::vector<long> c(bins, 0);
    for (double x : v) c[std::min(bins - 1, int((x - lo) / (hi - lo) * bins))]++;
    const double w = (hi - lo) / bins;
    for (int i = 0; i < bins; ++i) {
      double a = lo + i * w, b = a + w;
      s += std::string(name) + "," + fmt17(a) + "," + fmt17(b) + "," + std::to_string(c[i]) + "," +
           fmt17(c[i] / (w * double(ss.p_L.size()))) + "," + fmt17(f(0.5 * (a + b))) + "\n";
    }
  };
  hist("p_L", ss.p_L, ss.outcome_density);
  hist("d_m", ss.d, ss.slit_density);
  return s;
}

std::string gqr_csv(const std::vector<GqrRow>& rows, double density, const OutputMeta& m) {
  std::string s = header("gqr-curve", m);
  s += "# density_kg_per_m3=" + fmt17(density) + "\n";
  s += "mass_kg,mass_amu,radius_m,tau_G_s\n";
  for (const auto& r : rows)
    s += fmt17(r.mass) + "," + fmt17(r.mass / amu) + "," + fmt17(r.radius) + "," + fmt17(r.tau) + "\n";
  return s;
}

std::string sweep_csv(const std::string& axis, const std::vector<SweepRow>& rows, const OutputMeta& m) {
  std::string s = header("sweep", m);
  s += axis + ",ok,xi3_m,xi3_G_m,purity3,lambda_ratio_step2,d_m,x_f_m,sigma_lambda_m,visibility_off,visibility_on,error\n";
  for (const auto& r : rows) {
    s += fmt17(r.value) + "," + (r.ok ? "1" : "0");
    for (double v : {r.xi3, r.xi3_G, r.purity3, r.lambda_ratio_step2, r.d, r.x_f, r.sigma_lambda, r.visibility_off,
                     r.visibility_on})
      s += "," + (r.ok ? fmt17(v) : std::string());
    std::string e = r.error;
    std::replace(e.begin(), e.end(), ',', ';');
    std::replace(e.begin(), e.end(), '\n', ' ');
    s += "," + e + "\n";
  }
  return s;
}

}  // namespace skatepark
