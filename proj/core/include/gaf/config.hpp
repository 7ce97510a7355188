#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaf/expr.hpp"
#include "gaf/grid.hpp"

namespace gaf {

/// Flat key/value view of a TOML-style scenario file. Sections ([grid],
/// [map.grid]) and dotted keys both flatten to full dotted paths; values are
/// kept raw and parsed by the typed getters so errors can name the key.
class Config {
public:
  static Config parse_file(const std::filesystem::path& path);
  static Config parse_string(const std::string& text, std::string origin = "<string>");

  bool has(const std::string& key) const;
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  /// Two-element integer array "[j, k]".
  NodeIndex get_node(const std::string& key) const;
  /// A bare number or a quoted constant expression ("0.5", "1+2i", "2*i").
  Complex get_complex(const std::string& key, const ParamMap& params = {}) const;

  std::optional<std::string> maybe_string(const std::string& key) const;
  std::optional<double> maybe_double(const std::string& key) const;

  const std::string& origin() const { return origin_; }

private:
  std::map<std::string, std::string> values_; // raw value text per dotted key
  std::string origin_;

  const std::string& raw(const std::string& key) const;
};

} // namespace gaf
