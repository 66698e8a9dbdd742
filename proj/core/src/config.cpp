#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "skatepark/config.hpp"
#include "skatepark/errors.hpp"

namespace skatepark {

ConfigValue ConfigValue::of(double v) {
  ConfigValue c;
  c.kind = Kind::number;
  c.number = v;
  return c;
}
ConfigValue ConfigValue::of_int(std::int64_t v) {
  ConfigValue c;
  c.kind = Kind::integer;
  c.integer = v;
  return c;
}
ConfigValue ConfigValue::of_bool(bool v) {
  ConfigValue c;
  c.kind = Kind::boolean;
  c.boolean = v;
  return c;
}
ConfigValue ConfigValue::of_string(std::string v) {
  ConfigValue c;
  c.kind = Kind::string;
  c.text = std::move(v);
  return c;
}
ConfigValue ConfigValue::of_array(std::vector<double> v) {
  ConfigValue c;
  c.kind = Kind::array;
  c.array = std::move(v);
  return c;
}

const ConfigValue* ConfigDocument::find(std::string_view section, std::string_view key) const {
  for (const auto& s : sections)
    if (s.name == section)
      for (const auto& e : s.entries)
        if (e.key == key) return &e.value;
  return nullptr;
}

void ConfigDocument::set(const std::string& section, const std::string& key, ConfigValue v) {
  for (auto& s : sections)
    if (s.name == section) {
      for (auto& e : s.entries)
        if (e.key == key) {
          e.value = std::move(v);
          return;
        }
      s.entries.push_back({key, std::move(v), 0, 0});
      return;
    }
  sections.push_back({section, {{key, std::move(v), 0, 0}}, 0});
}

void ConfigDocument::erase(std::string_view section, std::string_view key) {
  for (auto& s : sections)
    if (s.name == section) std::erase_if(s.entries, [&](const ConfigEntry& e) { return e.key == key; });
}

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::string source) : t_(text), src_(std::move(source)) {}

  ConfigDocument parse() {
    ConfigDocument doc;
    while (i_ < t_.size()) {
      skip_blank();
      if (at_end_of_line()) {
        next_line();
        continue;
      }
      if (t_[i_] == '[') {
        int col = column();
        ++i_;
        std::string name = ident("section name");
        if (peek() != ']') fail("expected ']'");
        ++i_;
        for (const auto& s : doc.sections)
          if (s.name == name) fail("duplicate section [" + name + "]", col);
        end_line();
        doc.sections.push_back({name, {}, line_});
        continue;
      }
      int col = column();
      std::string key = ident("key");
      if (doc.sections.empty()) fail("key outside any section", col);
      auto& sec = doc.sections.back();
      for (const auto& e : sec.entries)
        if (e.key == key) fail("duplicate key " + sec.name + "." + key, col);
      skip_blank();
      if (peek() != '=') fail("expected '='");
      ++i_;
      skip_blank();
      ConfigValue v = value();
      end_line();
      sec.entries.push_back({key, std::move(v), line_ - 1, col});
    }
    return doc;
  }

 private:
  std::string_view t_;
  std::string src_;
  std::size_t i_ = 0, line_start_ = 0;
  int line_ = 1;

  int column() const { return int(i_ - line_start_) + 1; }
  char peek() const { return i_ < t_.size() ? t_[i_] : '\n'; }
  [[noreturn]] void fail(const std::string& msg, int col = 0) const {
    throw ValidationError(src_ + ": line " + std::to_string(line_) + ", column " +
                          std::to_string(col ? col : column()) + ": " + msg);
  }
  void skip_blank() {
    while (i_ < t_.size() && (t_[i_] == ' ' || t_[i_] == '\t' || t_[i_] == '\r')) ++i_;
  }
  bool at_end_of_line() const { return i_ >= t_.size() || t_[i_] == '\n' || t_[i_] == '#'; }
  void next_line() {
    while (i_ < t_.size() && t_[i_] != '\n') ++i_;
    if (i_ < t_.size()) ++i_;
    ++line_;
    line_start_ = i_;
  }
  void end_line() {
    skip_blank();
    if (!at_end_of_line()) fail("unexpected text after value");
    next_line();
  }
  std::string ident(const char* what) {
    std::size_t b = i_;
    while (i_ < t_.size() && (std::isalnum((unsigned char)t_[i_]) || t_[i_] == '_')) ++i_;
    if (b == i_) fail(std::string("expected ") + what);
    return std::string(t_.substr(b, i_ - b));
  }
  double number() {
    std::size_t b = i_;
    while (i_ < t_.size() && (std::isalnum((unsigned char)t_[i_]) || t_[i_] == '.' || t_[i_] == '-' || t_[i_] == '+')) ++i_;
    std::string_view s = t_.substr(b, i_ - b);
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
      i_ = b;
      fail("invalid number '" + std::string(s) + "'");
    }
    return v;
  }
  ConfigValue value() {
    char c = peek();
    if (c == '"') {
      ++i_;
      std::string s;
      while (true) {
        if (i_ >= t_.size() || t_[i_] == '\n') fail("unterminated string");
        char ch = t_[i_++];
        if (ch == '"') break;
        if (ch == '\\') {
          if (i_ >= t_.size()) fail("unterminated string");
          ch = t_[i_++];
          if (ch != '"' && ch != '\\') fail("unknown escape");
        }
        s += ch;
      }
      return ConfigValue::of_string(s);
    }
    if (c == '[') {
      ++i_;
      std::vector<double> a;
      skip_blank();
      if (peek() == ']') {
        ++i_;
        return ConfigValue::of_array(a);
      }
      while (true) {
        skip_blank();
        a.push_back(number());
        skip_blank();
        if (peek() == ',') {
          ++i_;
          continue;
        }
        if (peek() == ']') {
          ++i_;
          break;
        }
        fail("expected ',' or ']'");
      }
      return ConfigValue::of_array(a);
    }
    if (std::isalpha((unsigned char)c)) {
      int col = column();
      std::string w = ident("value");
      if (w == "true") return ConfigValue::of_bool(true);
      if (w == "false") return ConfigValue::of_bool(false);
      fail("expected a value, got '" + w + "'", col);
    }
    std::size_t b = i_;
    bool integral = true;
    for (std::size_t j = i_; j < t_.size() && !std::isspace((unsigned char)t_[j]) && t_[j] != '#'; ++j)
      if (!(std::isdigit((unsigned char)t_[j]) || (j == b && t_[j] == '-'))) integral = false;
    if (integral) {
      std::size_t e = i_;
      while (e < t_.size() && !std::isspace((unsigned char)t_[e]) && t_[e] != '#') ++e;
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(t_.data() + b, t_.data() + e, v);
      if (ec == std::errc() && p == t_.data() + e) {
        i_ = e;
        return ConfigValue::of_int(v);
      }
    }
    return ConfigValue::of(number());
  }
};

std::string shortest(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  std::string s(buf, p);
  // keep the number kind visible in the text
  if (s.find_first_of(".e") == std::string::npos && s.find("inf") == std::string::npos) s += ".0";
  return s;
}

std::string render(const ConfigValue& v) {
  switch (v.kind) {
    case ConfigValue::Kind::number: return shortest(v.number);
    case ConfigValue::Kind::integer: return std::to_string(v.integer);
    case ConfigValue::Kind::boolean: return v.boolean ? "true" : "false";
    case ConfigValue::Kind::string: {
      std::string s = "\"";
      for (char c : v.text) {
        if (c == '"' || c == '\\') s += '\\';
        s += c;
      }
      return s + "\"";
    }
    case ConfigValue::Kind::array: {
      std::string s = "[";
      for (std::size_t i = 0; i < v.array.size(); ++i) s += (i ? ", " : "") + shortest(v.array[i]);
      return s + "]";
    }
  }
  return {};
}

enum class T { num, integer, boolean, str, arr };

struct KeySpec {
  std::string section, key;
  T type;
  bool required;
};

std::vector<KeySpec> schema() {
  std::vector<KeySpec> s = {
      {"sphere", "material", T::str, false},
      {"sphere", "radius_m", T::num, true},
      {"sphere", "density_kg_per_m3", T::num, true},
      {"sphere", "Bc1_T", T::num, true},
      {"sphere", "Tc_K", T::num, true},
      {"environment", "T_env_K", T::num, true},
      {"environment", "T_internal_K", T::num, true},
      {"environment", "pressure_mbar", T::num, true},
      {"environment", "gas_mass_amu", T::num, false},
      {"environment", "vib_freq_Hz", T::arr, false},
      {"environment", "vib_sqrtS_m_per_sqrtHz", T::arr, false},
      {"environment", "eps_re_factor", T::num, false},
      {"environment", "eps_im_factor", T::num, false},
      {"environment", "g_m_per_s2", T::num, false},
      {"environment", "inclination_factor", T::num, false},
      {"surface", "kind", T::str, true},
      {"surface", "include_in_budget", T::boolean, false},
      {"surface", "lambda_L0_m", T::num, true},
      {"surface", "sigma_S_per_m", T::num, true},
      {"surface", "Tc_K", T::num, true},
      {"wires", "d_i_over_R", T::num, true},
      {"wires", "I_i_A", T::num, true},
      {"wires", "I_o_A", T::num, true},
      {"cavities", "omega0_convention", T::str, false},
      {"cavities", "E_C_ratio", T::num, false},
      {"cavities", "cooling_detuning_over_omega1", T::num, true},
      {"steps", "n0_phonons", T::num, true},
      {"steps", "heating_rate_per_s", T::num, false},
      {"steps", "t5_auto", T::boolean, false},
      {"grid", "wigner_n", T::integer, true},
      {"grid", "pattern_n", T::integer, true},
      {"grid", "pattern_half_width_m", T::num, false},
      {"grid", "outcome_table_points", T::integer, false},
      {"run", "seed", T::integer, true},
      {"run", "slit_pin_m", T::num, false},
      {"run", "gravity_pair", T::boolean, false},
      {"run", "post_select_dmin_over_sigma_d", T::num, false},
      {"run", "post_select_dmax_m", T::num, false},
      {"run", "max_draws", T::integer, false},
  };
  for (const char* c : {"linear", "quadratic"})
    for (const char* q : {"x_c_over_R", "l_x_over_R", "l_y_over_R"})
      s.push_back({"coils", std::string(c) + "_" + q, T::num, true});
  s.push_back({"coils", "eta_q_over_sigma2_per_nm2", T::num, false});
  for (const char* c : {"step1", "step4", "step7"}) {
    s.push_back({"cavities", std::string(c) + "_freq_Hz", T::num, true});
    s.push_back({"cavities", std::string(c) + "_kappa_Hz", T::num, true});
    s.push_back({"cavities", std::string(c) + "_alpha", T::num, true});
    s.push_back({"cavities", std::string(c) + "_s0", T::num, false});
  }
  for (int i = 1; i <= 7; ++i) {
    std::string n = std::to_string(i);
    s.push_back({"steps", "t" + n + "_s", T::num, i != 5});
    s.push_back({"steps", "step" + n + "_do_over_R", T::num, false});
    s.push_back({"steps", "step" + n + "_regime", T::str, false});
    s.push_back({"steps", "step" + n + "_freq_Hz", T::num, false});
  }
  return s;
}

const char* type_name(T t) {
  switch (t) {
    case T::num: return "a number";
    case T::integer: return "an integer";
    case T::boolean: return "true or false";
    case T::str: return "a string";
    default: return "an array of numbers";
  }
}

bool matches(const ConfigValue& v, T t) {
  switch (t) {
    case T::num: return v.is_number();
    case T::integer: return v.kind == ConfigValue::Kind::integer;
    case T::boolean: return v.kind == ConfigValue::Kind::boolean;
    case T::str: return v.kind == ConfigValue::Kind::string;
    default: return v.kind == ConfigValue::Kind::array;
  }
}

}  // namespace

ConfigDocument parse_config_text(std::string_view text, const std::string& source) {
  return Parser(text, source).parse();
}

ConfigDocument read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

std::string dump_config(const ConfigDocument& doc) {
  std::string out;
  for (std::size_t i = 0; i < doc.sections.size(); ++i) {
    if (i) out += "\n";
    out += "[" + doc.sections[i].name + "]\n";
    for (const auto& e : doc.sections[i].entries) out += e.key + " = " + render(e.value) + "\n";
  }
  return out;
}

std::uint64_t config_hash(const ConfigDocument& doc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump_config(doc)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

ProtocolConfig to_protocol_config(const ConfigDocument& doc) {
  std::vector<std::string> bad;
  const auto keys = schema();
  for (const auto& sec : doc.sections) {
    bool known_section = false;
    for (const auto& k : keys) known_section |= k.section == sec.name;
    if (!known_section) {
      bad.push_back("unknown section [" + sec.name + "] (line " + std::to_string(sec.line) + ")");
      continue;
    }
    for (const auto& e : sec.entries) {
      const KeySpec* spec = nullptr;
      for (const auto& k : keys)
        if (k.section == sec.name && k.key == e.key) spec = &k;
      std::string name = sec.name + "." + e.key;
      if (!spec)
        bad.push_back("unknown key " + name + (e.line ? " (line " + std::to_string(e.line) + ")" : ""));
      else if (!matches(e.value, spec->type))
        bad.push_back(name + " must be " + type_name(spec->type));
    }
  }
  for (const auto& k : keys)
    if (k.required && !doc.find(k.section, k.key)) bad.push_back("missing key " + k.section + "." + k.key);

  auto num = [&](const char* s, const std::string& k, double def = NAN) {
    auto v = doc.find(s, k);
    return v && v->is_number() ? v->as_number() : def;
  };
  auto opt = [&](const char* s, const std::string& k) -> std::optional<double> {
    auto v = doc.find(s, k);
    if (v && v->is_number()) return v->as_number();
    return std::nullopt;
  };
  auto str = [&](const char* s, const std::string& k, const std::string& def = "") {
    auto v = doc.find(s, k);
    return v && v->kind == ConfigValue::Kind::string ? v->text : def;
  };
  auto flag = [&](const char* s, const std::string& k, bool def) {
    auto v = doc.find(s, k);
    return v && v->kind == ConfigValue::Kind::boolean ? v->boolean : def;
  };
  auto arr = [&](const char* s, const std::string& k) {
    auto v = doc.find(s, k);
    return v && v->kind == ConfigValue::Kind::array ? v->array : std::vector<double>{};
  };
  auto guard = [&](const std::string& where, const std::function<void()>& f) {
    try {
      f();
    } catch (const ValidationError& e) {
      if (e.items().empty()) bad.push_back(where + ": " + e.what());
      for (const auto& i : e.items()) bad.push_back(where + ": " + i);
    }
  };

  ProtocolConfig c;
  c.k.g_eff = num("environment", "g_m_per_s2", 9.81) * num("environment", "inclination_factor", 1);
  const double R = num("sphere", "radius_m");
  guard("sphere", [&] {
    if (std::isfinite(R + num("sphere", "density_kg_per_m3") + num("sphere", "Bc1_T") + num("sphere", "Tc_K")))
      c.sphere = make_sphere(R, num("sphere", "density_kg_per_m3"), num("sphere", "Bc1_T"), num("sphere", "Tc_K"), c.k);
  });

  c.env.T_env = num("environment", "T_env_K");
  c.env.T_internal = num("environment", "T_internal_K");
  c.env.pressure = num("environment", "pressure_mbar") * pa_per_mbar;
  c.env.gas_molecule_mass = num("environment", "gas_mass_amu", 4.002602) * amu;
  c.env.eps_re_factor = num("environment", "eps_re_factor", 1);
  c.env.eps_im_factor = num("environment", "eps_im_factor", 1);
  guard("environment.vib", [&] { c.env.vib_psd = VibrationPsd(arr("environment", "vib_freq_Hz"), arr("environment", "vib_sqrtS_m_per_sqrtHz")); });

  std::string kind = str("surface", "kind", "superconductor");
  if (kind == "superconductor")
    c.surface.kind = SurfaceKind::superconductor;
  else if (kind == "normal_metal")
    c.surface.kind = SurfaceKind::normal_metal;
  else
    bad.push_back("surface.kind must be \"superconductor\" or \"normal_metal\"");
  c.surface_in_budget = flag("surface", "include_in_budget", true);
  c.surface.lambda_L0 = num("surface", "lambda_L0_m");
  c.surface.sigma_metal = num("surface", "sigma_S_per_m");
  c.surface.Tc_surface = num("surface", "Tc_K");

  c.wires.d_i = num("wires", "d_i_over_R") * R;
  c.wires.I_i = num("wires", "I_i_A");
  c.wires.I_o = num("wires", "I_o_A");

  c.coil_linear = {num("coils", "linear_x_c_over_R") * R, num("coils", "linear_l_x_over_R") * R,
                   num("coils", "linear_l_y_over_R") * R};
  c.coil_quadratic = {num("coils", "quadratic_x_c_over_R") * R, num("coils", "quadratic_l_x_over_R") * R,
                      num("coils", "quadratic_l_y_over_R") * R};
  if (auto e = opt("coils", "eta_q_over_sigma2_per_nm2")) c.eta_q_over_sigma2 = *e * 1e18;

  std::string conv = str("cavities", "omega0_convention", "cavity_frequency");
  Omega0Convention oc = Omega0Convention::cavity_frequency;
  if (conv == "dressed")
    oc = Omega0Convention::dressed;
  else if (conv != "cavity_frequency")
    bad.push_back("cavities.omega0_convention must be \"cavity_frequency\" or \"dressed\"");
  const char* cav[3] = {"step1", "step4", "step7"};
  for (int i = 0; i < 3; ++i) {
    std::string p = cav[i];
    auto& cv = c.cavities[i];
    cv.omega_c = 2 * pi * num("cavities", p + "_freq_Hz");
    cv.kappa = 2 * pi * num("cavities", p + "_kappa_Hz");
    cv.alpha_mag = num("cavities", p + "_alpha");
    cv.E_C_ratio = num("cavities", "E_C_ratio", 0);
    cv.convention = oc;
  }
  c.s0_step1 = opt("cavities", "step1_s0");
  c.s0_step4 = opt("cavities", "step4_s0");
  c.s0_step7 = opt("cavities", "step7_s0");
  c.detuning_over_omega1 = num("cavities", "cooling_detuning_over_omega1");
  c.n0 = num("steps", "n0_phonons");
  c.gamma_heat = num("steps", "heating_rate_per_s", 0);
  c.t5_auto = flag("steps", "t5_auto", false);
  if (!c.t5_auto && !doc.find("steps", "t5_s")) bad.push_back("missing key steps.t5_s (or set steps.t5_auto = true)");

  for (int i = 0; i < 7; ++i) {
    std::string n = std::to_string(i + 1);
    c.durations[i] = num("steps", "t" + n + "_s", 0);
    auto d = opt("steps", "step" + n + "_do_over_R");
    std::string reg = str("steps", "step" + n + "_regime");
    auto f = opt("steps", "step" + n + "_freq_Hz");
    std::string where = "steps.step" + n;
    if (d && !reg.empty()) {
      bad.push_back(where + ": give either _do_over_R or _regime, not both");
    } else if (d) {
      c.traps[i].d_o = *d * R;
    } else if (reg.empty()) {
      bad.push_back("missing key " + where + "_do_over_R (or " + where + "_regime)");
    } else {
      auto& t = c.traps[i].target;
      if (reg == "flat") {
        t.regime = Regime::flat;
      } else if (reg == "attractive" || reg == "inverted") {
        t.regime = reg == "attractive" ? Regime::attractive : Regime::inverted;
        if (!f) bad.push_back("missing key " + where + "_freq_Hz for regime " + reg);
        else t.omega = 2 * pi * *f;
      } else {
        bad.push_back(where + "_regime must be \"attractive\", \"inverted\" or \"flat\"");
      }
    }
  }

  auto count = [&](const char* s, const char* k, std::int64_t def) {
    auto v = doc.find(s, k);
    return v && v->kind == ConfigValue::Kind::integer ? v->integer : def;
  };
  auto small_int = [&](const char* s, const char* k, std::int64_t def) {
    auto v = count(s, k, def);
    if (v < 0 || v > (1 << 24)) {
      bad.push_back(std::string(s) + "." + k + " out of range");
      return 0;
    }
    return int(v);
  };
  c.wigner_n = small_int("grid", "wigner_n", 4096);
  c.pattern_n = small_int("grid", "pattern_n", 4096);
  c.pattern_half_width = num("grid", "pattern_half_width_m", 0);
  c.outcome_table_points = small_int("grid", "outcome_table_points", 16384);
  auto seed = count("run", "seed", 1);
  if (seed < 0) bad.push_back("run.seed must be >= 0");
  c.seed = std::uint64_t(seed);
  c.pinned_d = opt("run", "slit_pin_m");
  c.gravity_pair = flag("run", "gravity_pair", true);
  c.post_selection.d_min_over_sigma_d = num("run", "post_select_dmin_over_sigma_d", 5);
  c.post_selection.d_max = num("run", "post_select_dmax_m", 0);
  c.post_selection.max_draws = small_int("run", "max_draws", 100000);

  if (!bad.empty()) throw ValidationError("invalid configuration", bad);
  c.validate();
  return c;
}

}  // namespace skatepark
