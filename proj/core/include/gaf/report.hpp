#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gaf {

struct CheckRecord {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Machine-readable verification outcome. No timing metadata: identical
/// inputs produce byte-identical reports.
struct Report {
  std::string scenario;
  std::vector<CheckRecord> checks;
  std::map<std::string, std::string> environment; // grid sizes, scheme, gauges

  /// value must stay at or below threshold.
  void add_le(const std::string& name, double value, double threshold);
  /// value must stay at or above threshold (floors, margins).
  void add_ge(const std::string& name, double value, double threshold);

  bool pass() const;
};

std::string to_json(const Report& r);

/// Writes JSON; parent directories are not created. Throws IoError.
void write_report(const Report& r, const std::filesystem::path& path);

} // namespace gaf
