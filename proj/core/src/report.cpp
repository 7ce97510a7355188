#include "gaf/report.hpp"

#include <fstream>

#include "gaf/errors.hpp"
#include "json.hpp"

namespace gaf {

void Report::add_le(const std::string& name, double value, double threshold) {
  checks.push_back({name, value, threshold, value <= threshold});
}

void Report::add_ge(const std::string& name, double value, double threshold) {
  checks.push_back({name, value, threshold, value >= threshold});
}

bool Report::pass() const {
  for (const CheckRecord& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string to_json(const Report& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["checks"] = nlohmann::json::array();
  for (const CheckRecord& c : r.checks)
    j["checks"].push_back({{"name", c.name},
                           {"value", c.value},
                           {"threshold", c.threshold},
                           {"pass", c.pass}});
  if (!r.environment.empty()) j["environment"] = r.environment;
  j["pass"] = r.pass();
  return j.dump(2) + "\n";
}

void write_report(const Report& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open report path '" + path.string() + "'");
  out << to_json(r);
  if (!out) throw IoError("failed writing report '" + path.string() + "'");
}

} // namespace gaf
