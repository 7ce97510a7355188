#include "gaf/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace gaf {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Strip a # comment, respecting double-quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

bool valid_key(const std::string& key) {
  if (key.empty() || key.front() == '.' || key.back() == '.') return false;
  for (char c : key)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'))
      return false;
  return true;
}

[[noreturn]] void key_fail(const std::string& key, const std::string& what) {
  throw ConfigError(key, "config key '" + key + "': " + what);
}

} // namespace

Config Config::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path.string());
}

Config Config::parse_string(const std::string& text, std::string origin) {
  Config c;
  c.origin_ = std::move(origin);
  std::istringstream in(text);
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(line, c.origin_ + ":" + std::to_string(lineno) +
                                    ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section))
        throw ConfigError(section, c.origin_ + ":" + std::to_string(lineno) +
                                       ": bad section name '" + section + "'");
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line, c.origin_ + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_key(key))
      throw ConfigError(key, c.origin_ + ":" + std::to_string(lineno) + ": bad key '" +
                                 key + "'");
    if (value.empty())
      throw ConfigError(key, c.origin_ + ":" + std::to_string(lineno) +
                                 ": empty value for '" + key + "'");
    if (!section.empty()) key = section + "." + key;
    if (c.values_.count(key))
      throw ConfigError(key, c.origin_ + ":" + std::to_string(lineno) +
                                 ": duplicate key '" + key + "'");
    c.values_[key] = value;
  }
  return c;
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::vector<std::string> Config::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (k.rfind(prefix, 0) == 0) out.push_back(k);
  return out;
}

const std::string& Config::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) key_fail(key, "missing");
  return it->second;
}

std::string Config::get_string(const std::string& key) const {
  const std::string& v = raw(key);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
    return v.substr(1, v.size() - 2);
  return v;
}

double Config::get_double(const std::string& key) const {
  const std::string& v = raw(key);
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (trim(v.substr(used)).empty()) return d;
  } catch (const std::exception&) {
  }
  key_fail(key, "expected a number, got '" + v + "'");
}

int Config::get_int(const std::string& key) const {
  const double d = get_double(key);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d) key_fail(key, "expected an integer");
  return i;
}

NodeIndex Config::get_node(const std::string& key) const {
  const std::string& v = raw(key);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    key_fail(key, "expected [j, k], got '" + v + "'");
  std::istringstream in(v.substr(1, v.size() - 2));
  std::string a, b, extra;
  if (!std::getline(in, a, ',') || !std::getline(in, b, ',') || std::getline(in, extra, ','))
    key_fail(key, "expected exactly two entries in '" + v + "'");
  try {
    return NodeIndex{std::stoi(trim(a)), std::stoi(trim(b))};
  } catch (const std::exception&) {
    key_fail(key, "expected integer entries in '" + v + "'");
  }
}

Complex Config::get_complex(const std::string& key, const ParamMap& params) const {
  const std::string text = get_string(key);
  try {
    const ExprPtr e = parse(text);
    if (depends_on_variable(*e)) key_fail(key, "value must be constant, got '" + text + "'");
    return eval(*e, Complex(0, 0), params);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    key_fail(key, std::string("bad constant '") + text + "': " + e.what());
  }
}

std::optional<std::string> Config::maybe_string(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_string(key);
}

std::optional<double> Config::maybe_double(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

} // namespace gaf
