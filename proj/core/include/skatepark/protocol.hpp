#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "skatepark/cooling.hpp"
#include "skatepark/decoherence.hpp"
#include "skatepark/magnetomechanics.hpp"
#include "skatepark/magnetostatics.hpp"
#include "skatepark/splitter.hpp"
#include "skatepark/wigner.hpp"

namespace skatepark {

// Outer-wire spacing for one region of the chip: explicit, or solved from a regime request.
struct TrapRequest {
  std::optional<double> d_o;  // m
  RegimeTarget target;        // used when d_o is empty
};

struct ProtocolConfig {
  PhysicalConstants k;
  SphereSpec sphere;
  EnvironmentSpec env;
  SurfaceSpec surface;
  bool surface_in_budget = true;

  WireConfig wires;                 // d_o is overwritten per step
  std::array<TrapRequest, 7> traps;  // steps 1..7

  CoilSpec coil_linear;     // step 1
  CoilSpec coil_quadratic;  // steps 4 and 7
  // Operating flux points. Empty means the geometric value from the coil flux.
  std::optional<double> s0_step1, s0_step4, s0_step7;
  // eta_q / sigma^2 in 1/m^2. Empty means the geometric value.
  std::optional<double> eta_q_over_sigma2;

  std::array<CavitySpec, 3> cavities;  // steps 1, 4, 7; alpha_mag set per cavity
  double detuning_over_omega1 = -1;
  double n0 = 0;
  double gamma_heat = 0;

  std::array<double, 7> durations{};  // t1..t7, s
  bool t5_auto = false;

  PostSelection post_selection;
  std::optional<double> pinned_d;  // m
  std::uint64_t seed = 1;
  bool gravity_pair = true;  // also run with the collapse term

  int wigner_n = 4096;
  int pattern_n = 4096;
  double pattern_half_width = 0;  // m; 0 picks 6 sigma of the expected pattern
  int outcome_table_points = 16384;

  void validate() const;
};

struct TrapReport {
  double d_o = 0, z_t = 0;
  double omega_x = 0, omega_z = 0;  // signed, rad/s
  Regime regime = Regime::flat;
  double field_at_trap = 0;         // T
  double critical_ratio = 0;
};

struct StepReport {
  int index = 0;
  std::string name;
  double duration = 0;
  double end_time = 0;  // T_m, counted from the end of cooling
  TrapReport trap;
  LocalizationBudget budget;
  double lambda_total = 0;
  double standard_over_gravity = 0;  // (Lambda - Lambda_G) / Lambda_G with Lambda_G included
  GaussianState state;              // after the step, Gaussian steps only
  double purity = 0, xi = 0;
};

struct CouplingReport {
  CouplingCoefficients geometric;
  CouplingResult used;
  double geometric_s0 = 0;
  double geometric_eta_q_over_sigma2 = 0, geometric_eta_l_over_sigma = 0;  // 1/m^2, 1/m
  MeasurementStrength strength;
};

struct RunReport {
  bool gravity_collapse = false;
  std::uint64_t seed = 0;
  double radius = 0;
  std::vector<StepReport> steps;
  double lambda_G = 0;

  // step 1
  double n_bar = 0, n_bar_steady = 0;
  double sigma1 = 0, xi0 = 0;
  CouplingReport cooling_coupling;
  double cooling_adiabaticity = 0;

  // step 2
  double boost_gain = 0;

  // steps 3-4
  double sigma4 = 0;
  double purity3 = 0;
  ThetaValues theta;
  double omega_g = 0, omega_sigma = 0;
  double t4_root_printed = 0, t4_root_scaled = 0;
  double phase_at_t4 = 0;
  CouplingReport split_coupling;
  double p_L = 0;
  SlitGeometry slit;
  int draws = 0;
  double range_probability = 0;
  double split_decay = 0;  // Lambda_4 t_4 (1/m^2)

  // step 5
  double omega5 = 0, t5 = 0;
  KernelDiagnostics kernel;

  // step 6
  double omega6 = 0, t6 = 0;
  double sigma_lambda = 0;
  SymplecticMap map;
  double x_f_closed_form = 0;

  // pattern
  Pattern pattern;
  FringeMetrics fringes;
  double sigma7 = 0;
  double wigner_norm_drift = 0, wigner_max_imag = 0;

  // step 7
  CouplingReport measure_coupling;
  ResolutionBound resolution;

  double total_time = 0;
  double gas_survival = 0;
  std::vector<std::string> warnings;
};

struct Verdict {
  double xi = 0, xi_G = 0, d = 0;
  double d_over_xi = 0, xi_G_over_d = 0;
  bool regime_ok = false;  // 3 xi_G <= d <= xi
  double visibility_off = 0, visibility_on = 0, visibility_gap = 0;
  double x_f_over_sigma_lambda = 0, x_f_over_delta_x = 0;
  bool fringes_resolvable = false;
  bool falsifiable = false;
};

struct PairedReport {
  RunReport off;
  std::optional<RunReport> on;
  Verdict verdict;
};

// Trap for one step, solving the regime request when no spacing is given.
TrapReport solve_trap(const ProtocolConfig& cfg, int step);

// Steps 1-3, all traps and budgets, and the step-4 coupling; no outcome is drawn.
RunReport run_until_split(const ProtocolConfig& cfg, bool gravity_collapse,
                          const RunReport* reference = nullptr);

// Collapse off, then (unless disabled) collapse on with the same measurement outcome.
PairedReport run(const ProtocolConfig& cfg, bool with_collapse = true);
// With a reference run, the split reuses its length unit, strength and outcome.
RunReport run_single(const ProtocolConfig& cfg, bool gravity_collapse,
                     const RunReport* reference = nullptr);

Verdict falsification_verdict(const RunReport& off, const RunReport* on);

struct TrapScanRow {
  double d_o = 0;
  bool found = false;
  TrapReport trap;
  double zero_field_height = 0;
  // per unit length scale: eta_l / sigma (1/m), eta_q / sigma^2 (1/m^2)
  double s0_linear = 0, eta_l_over_sigma = 0;
  double s0_quadratic = 0, eta_q_over_sigma2 = 0;
};

std::vector<TrapScanRow> trap_scan(const ProtocolConfig& cfg, double d_o_min, double d_o_max, int n,
                                   bool with_couplings);

struct SlitSample {
  double sigma4 = 0, chi = 0, purity3 = 0;
  double range_probability = 0;
  double acceptance = 0;  // fraction of draws inside the post-selection window
  PostSelection window;
  std::vector<double> p_L;  // all draws
  std::vector<double> d;    // resolved draws only
  std::function<double(double)> outcome_density, slit_density;
};

// Draws in batches of 10^4 seeded by batch_seed(seed, batch).
SlitSample slit_sample(const ProtocolConfig& cfg, int n_samples);

struct SweepRow {
  double value = 0;
  bool ok = false;
  std::string error;
  double xi3 = 0, xi3_G = 0, purity3 = 0;
  double lambda_ratio_step2 = 0;
  double d = 0, x_f = 0, sigma_lambda = 0;
  double visibility_off = 0, visibility_on = 0;
};

// Axes: t2_s, t3_s, t6_s, vib_psd_scale, d_nm. Every value reuses the config seed.
std::vector<SweepRow> sweep(const ProtocolConfig& cfg, const std::string& axis,
                            const std::vector<double>& values, bool with_collapse = true);
bool sweepable(const std::string& axis);

}  // namespace skatepark
