#pragma once

#include <json.hpp>

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace dipiir::app {

struct KeySpec {
  std::string_view key;
  std::string_view default_value;
  std::string_view help;
};

/// Every accepted configuration key with its default.
const std::vector<KeySpec>& known_keys();

/// Flat "key = value" run configuration.
///
/// Lines are `key = value`; `#` starts a comment; `[section]` headers prefix
/// the following keys with `section.`. Unknown keys are rejected. Values
/// that were never set explicitly may be filled from the CE preset.
class RunConfig {
 public:
  RunConfig();

  static RunConfig from_file(const std::filesystem::path& path);
  void parse(std::string_view text, const std::string& origin = "<string>");
  /// "key=value" as given to --set.
  void apply_override(std::string_view assignment);
  void set(const std::string& key, const std::string& value);

  bool is_explicit(const std::string& key) const { return explicit_.count(key) != 0; }

  const std::string& str(const std::string& key) const;
  double num(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<std::string> list(const std::string& key) const;

  /// Fills keys that were not set explicitly from the preset named by `preset` (or the one
  /// matching problem and pipeline when it is "auto").
  void resolve_preset();

  /// Checks problem/pipeline compatibility and parses every typed key once.
  void validate() const;

  nlohmann::json to_json() const;

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> explicit_;
};

/// Name of the preset "auto" resolves to, or "none".
std::string auto_preset(const std::string& problem, const std::string& pipeline);

}  // namespace dipiir::app
