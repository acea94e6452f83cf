#include "cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace circreg::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const std::string& key, const std::string& text) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError("config key '" + key + "': '" + text + "' is not a number");
  return v;
}

long long to_integer(const std::string& key, const std::string& text) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError("config key '" + key + "': '" + text + "' is not an integer");
  return v;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw UsageError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (c.has(key)) throw UsageError("config key '" + key + "' given twice");
    c.values_[key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

std::string Config::str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw UsageError("missing required config key '" + key + "'");
  return it->second;
}

std::string Config::str(const std::string& key, const std::string& fallback) const {
  return has(key) ? str(key) : fallback;
}

double Config::real(const std::string& key) const { return to_real(key, str(key)); }
double Config::real(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }
long long Config::integer(const std::string& key) const { return to_integer(key, str(key)); }
long long Config::integer(const std::string& key, long long fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = str(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw UsageError("config key '" + key + "': '" + v + "' is not a boolean");
}

std::vector<double> Config::reals(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& item : split(str(key), ',')) out.push_back(to_real(key, item));
  if (out.empty()) throw UsageError("config key '" + key + "' is an empty list");
  return out;
}

std::vector<int> Config::integers(const std::string& key, const std::vector<int>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<int> out;
  for (const auto& item : split(str(key), ',')) out.push_back(static_cast<int>(to_integer(key, item)));
  if (out.empty()) throw UsageError("config key '" + key + "' is an empty list");
  return out;
}

Point parse_point(const std::string& text) {
  const auto parts = split(text, ';');
  if (parts.size() != 2) throw UsageError("'" + text + "' is not a point of the form i;j");
  return {static_cast<int>(to_integer("point", parts[0])), static_cast<int>(to_integer("point", parts[1]))};
}

Point Config::point(const std::string& key, Point fallback) const {
  if (!has(key)) return fallback;
  try {
    return parse_point(str(key));
  } catch (const UsageError& e) {
    throw UsageError("config key '" + key + "': " + e.what());
  }
}

void Config::restrict_to(const std::set<std::string>& allowed) const {
  for (const auto& [k, v] : values_)
    if (!allowed.count(k)) throw UsageError("unknown config key '" + k + "'");
}

}  // namespace circreg::cli
