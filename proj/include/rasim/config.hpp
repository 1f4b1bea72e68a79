#ifndef RASIM_CONFIG_HPP
#define RASIM_CONFIG_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rasim/engine.hpp"

namespace rasim {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One value from the scenario config file: TOML-style scalars plus
// (possibly nested) arrays, which cover every key the simulator needs.
struct ConfigValue {
  enum class Kind { Number, String, Boolean, Array };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string text;
  bool boolean = false;
  std::vector<ConfigValue> items;
};

// Flat table keyed by "section.key" (dotted paths).
using ConfigTable = std::map<std::string, ConfigValue>;

// Parses TOML-style text: [section] headers, key = value pairs, numbers,
// quoted strings, booleans, arrays (nested, newline-tolerant), and `#`
// comments. Throws ConfigError with a line number on malformed input.
ConfigTable parse_config_text(std::string_view text);

ConfigTable load_config_file(const std::string& path);

// Applies a command-line override of the form "section.key=value".
void apply_override(ConfigTable& table, const std::string& assignment);

// Fills a ScenarioConfig from the table, defaulting every absent key.
// Type errors, domain errors, and unknown keys are appended to `errors`
// (aggregated, not fail-fast), each naming the offending key path.
ScenarioConfig decode_scenario(const ConfigTable& table, std::vector<std::string>& errors);

// Renders the normalized effective config (defaults filled in) in the same
// file format.
std::string render_effective_config(const ScenarioConfig& cfg);

}  // namespace rasim

#endif  // RASIM_CONFIG_HPP
