#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "skatepark/config.hpp"
#include "skatepark/errors.hpp"
#include "skatepark/gqr.hpp"
#include "skatepark/report.hpp"

namespace fs = std::filesystem;
using namespace skatepark;

namespace {

enum Exit { ok = 0, internal = 1, invalid = 2, physics = 3 };

struct Globals {
  std::string config;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool no_collapse = false;
  std::optional<double> pin_slit_nm;
  std::optional<int> grid;
};

struct Loaded {
  ConfigDocument doc;
  ProtocolConfig cfg;
  OutputMeta meta;
};

Loaded load(const Globals& g) {
  Loaded L;
  L.doc = g.config.empty() ? parse_config_text(case_study_config_text(), "case_study") : read_config_file(g.config);
  if (g.seed) L.doc.set("run", "seed", ConfigValue::of_int(std::int64_t(*g.seed)));
  if (g.pin_slit_nm) L.doc.set("run", "slit_pin_m", ConfigValue::of(*g.pin_slit_nm * 1e-9));
  if (g.grid) {
    L.doc.set("grid", "wigner_n", ConfigValue::of_int(*g.grid));
    L.doc.set("grid", "pattern_n", ConfigValue::of_int(*g.grid));
  }
  if (g.no_collapse) L.doc.set("run", "gravity_pair", ConfigValue::of_bool(false));
  L.cfg = to_protocol_config(L.doc);
  L.meta = {hash_hex(config_hash(L.doc)), L.cfg.seed};
  return L;
}

fs::path out_dir(const Globals& g) {
  fs::path p = g.out_dir;
  if (p.empty()) {
    const char* env = std::getenv("SKATEPARK_OUT_DIR");
    p = env && *env ? env : ".";
  }
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ValidationError("cannot create output directory " + p.string() + ": " + ec.message());
  return p;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
  if (!f) throw ValidationError("cannot write " + p.string());
  std::cout << "wrote " << p.string() << "\n";
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t n = 0;
    double x = 0;
    try {
      x = std::stod(item, &n);
    } catch (const std::exception&) {
      n = 0;
    }
    if (n != item.size()) throw ValidationError("bad number in list: " + item);
    v.push_back(x);
  }
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for a magnetically levitated matter-wave interferometer", "skatepark"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Run configuration (default: bundled case study)");
  app.add_option("--out-dir", g.out_dir, "Output directory (default: $SKATEPARK_OUT_DIR or .)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_flag("--no-gravity-collapse", g.no_collapse, "Skip the run with the collapse term");
  app.add_option("--pin-slit-nm", g.pin_slit_nm, "Fix the slit separation (nm) instead of sampling");
  app.add_option("--grid", g.grid, "Wigner and pattern grid size (power of two)");

  auto* run = app.add_subcommand("run", "Paired simulation: pattern.csv and report.json");
  auto* scan = app.add_subcommand("trap-scan", "Trap height and frequencies against the outer wire spacing");
  double do_min = 13.5, do_max = 30;
  int scan_points = 200;
  bool couplings = false;
  scan->add_option("--do-min-R", do_min, "Smallest d_o in units of R");
  scan->add_option("--do-max-R", do_max, "Largest d_o in units of R");
  scan->add_option("--points", scan_points, "Number of spacings");
  scan->add_flag("--couplings", couplings, "Add flux coefficients of both pick-up coils");
  auto* budget = app.add_subcommand("budget", "Localization budget per step as JSON");
  auto* slit = app.add_subcommand("slit-sample", "Histograms of sampled outcomes and slit separations");
  int samples = 100000, bins = 100;
  slit->add_option("--samples", samples, "Number of draws");
  slit->add_option("--bins", bins, "Histogram bins");
  auto* gqr = app.add_subcommand("gqr-curve", "Gravitational decoherence time against mass");
  double density = 1e4, m_min = 1e8, m_max = 1e16;
  int gqr_points = 161;
  gqr->add_option("--density", density, "Mass density (kg/m^3)");
  gqr->add_option("--mass-min-amu", m_min, "Lightest mass (amu)");
  gqr->add_option("--mass-max-amu", m_max, "Heaviest mass (amu)");
  gqr->add_option("--points", gqr_points, "Number of masses");
  auto* sw = app.add_subcommand("sweep", "Repeat the paired run over one parameter");
  std::string axis, values;
  sw->add_option("--axis", axis, "t2_s, t3_s, t6_s, vib_psd_scale or d_nm")->required();
  sw->add_option("--values", values, "Comma separated values")->required();
  auto* dump = app.add_subcommand("config-dump", "Print the effective configuration");
  for (auto* s : {run, scan, budget, slit, gqr, sw, dump}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return invalid;
  }

  try {
    Loaded L = load(g);
    if (*dump) {
      std::cout << dump_config(L.doc);
      return ok;
    }
    if (*gqr) {
      if (!(gqr_points >= 2) || !(m_min > 0) || !(m_max > m_min)) throw ValidationError("gqr-curve needs 0 < mass-min < mass-max and >= 2 points");
      auto rows = gqr_curve(density, m_min * amu, m_max * amu, gqr_points, L.cfg.k);
      write(out_dir(g) / "gqr_curve.csv", gqr_csv(rows, density, L.meta));
      std::printf("mass at tau_G = 1 s: %.6g amu\n", mass_for_tau(density, 1.0, L.cfg.k) / amu);
      return ok;
    }
    if (*scan) {
      const double R = L.cfg.sphere.radius;
      auto rows = trap_scan(L.cfg, do_min * R, do_max * R, scan_points, couplings);
      write(out_dir(g) / "trap_scan.csv", trap_scan_csv(rows, R, couplings, L.meta));
      return ok;
    }
    if (*budget) {
      auto off = run_until_split(L.cfg, false);
      std::optional<RunReport> on;
      if (L.cfg.gravity_pair) on = run_until_split(L.cfg, true, &off);
      std::string j = budget_json(L.cfg, off, on ? &*on : nullptr, L.meta);
      write(out_dir(g) / "budget.json", j);
      std::cout << j;
      return ok;
    }
    if (*slit) {
      if (bins < 1) throw ValidationError("bins must be >= 1");
      auto s = slit_sample(L.cfg, samples);
      write(out_dir(g) / "slit_sample.csv", slit_sample_csv(s, bins, L.meta));
      std::printf("acceptance %.6f, range probability %.6f\n", s.acceptance, s.range_probability);
      return ok;
    }
    if (*sw) {
      auto rows = sweep(L.cfg, axis, parse_list(values), L.cfg.gravity_pair);
      write(out_dir(g) / "sweep.csv", sweep_csv(axis, rows, L.meta));
      return ok;
    }
    if (*run) {
      auto P = skatepark::run(L.cfg, L.cfg.gravity_pair);
      auto dir = out_dir(g);
      write(dir / "pattern.csv", pattern_csv(P, L.meta));
      write(dir / "report.json", report_json(P, L.meta));
      std::printf("d = %.4g nm, x_f = %.4g nm, visibility off = %.4g", P.off.slit.d * 1e9, P.off.fringes.x_f * 1e9,
                  P.off.fringes.visibility);
      if (P.on) std::printf(", on = %.4g", P.on->fringes.visibility);
      std::printf("\n");
      return ok;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return invalid;
  } catch (const PhysicsError& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return physics;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return internal;
  }
  return ok;
}
