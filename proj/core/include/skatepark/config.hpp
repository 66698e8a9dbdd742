#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "skatepark/protocol.hpp"

namespace skatepark {

struct ConfigValue {
  enum class Kind { number, integer, boolean, string, array };
  Kind kind = Kind::number;
  double number = 0;
  std::int64_t integer = 0;
  bool boolean = false;
  std::string text;
  std::vector<double> array;

  static ConfigValue of(double v);
  static ConfigValue of_int(std::int64_t v);
  static ConfigValue of_bool(bool v);
  static ConfigValue of_string(std::string v);
  static ConfigValue of_array(std::vector<double> v);
  bool is_number() const { return kind == Kind::number || kind == Kind::integer; }
  double as_number() const { return kind == Kind::integer ? double(integer) : number; }
};

struct ConfigEntry {
  std::string key;
  ConfigValue value;
  int line = 0, column = 0;
};

struct ConfigSection {
  std::string name;
  std::vector<ConfigEntry> entries;
  int line = 0;
};

// Sectioned key = value text: numbers, true/false, "strings", [number, ...]; # comments.
class ConfigDocument {
 public:
  std::vector<ConfigSection> sections;

  const ConfigValue* find(std::string_view section, std::string_view key) const;
  // Replaces in place or appends (creating the section when needed).
  void set(const std::string& section, const std::string& key, ConfigValue v);
  void erase(std::string_view section, std::string_view key);
};

// Syntax errors carry "line L, column C".
ConfigDocument parse_config_text(std::string_view text, const std::string& source = "config");
ConfigDocument read_config_file(const std::string& path);

// Canonical text: declaration order, shortest round-trip numbers.
std::string dump_config(const ConfigDocument& doc);

// FNV-1a 64 of the canonical text.
std::uint64_t config_hash(const ConfigDocument& doc);
std::string hash_hex(std::uint64_t h);

// All unknown keys, type errors, missing keys and range failures in one ValidationError.
ProtocolConfig to_protocol_config(const ConfigDocument& doc);

std::string_view case_study_config_text();

}  // namespace skatepark
