#include "lakes/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lakes/core/error.hpp"

namespace lakes::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::ConfigInvalid, "key '" + key + "': " + why);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    bad(key, "'" + s + "' is not a number");
  }
  if (pos != s.size() || !std::isfinite(v)) bad(key, "'" + s + "' is not a finite number");
  return v;
}

long to_long(const std::string& key, const std::string& s) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    bad(key, "'" + s + "' is not an integer");
  }
  if (pos != s.size()) bad(key, "'" + s + "' is not an integer");
  return v;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config c;
  std::stringstream ss(text);
  std::string line;
  int n = 0;
  while (std::getline(ss, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigInvalid, "line " + std::to_string(n) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::ConfigInvalid, "line " + std::to_string(n) + ": empty key");
    if (c.has(key)) throw Error(ErrorCode::ConfigInvalid, "key '" + key + "' given twice");
    c.values_[key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigInvalid, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error(ErrorCode::ConfigInvalid, "override '" + assignment + "' needs key=value");
  const std::string key = trim(assignment.substr(0, eq));
  if (key.empty()) throw Error(ErrorCode::ConfigInvalid, "override '" + assignment + "' has no key");
  values_[key] = trim(assignment.substr(eq + 1));
}

std::string Config::experiment() const {
  const std::string e = has("experiment") ? values_.at("experiment") : "";
  for (const auto& n : experiment_names())
    if (n == e) return e;
  bad("experiment", e.empty() ? "missing" : "unknown experiment '" + e + "'");
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Config::hash() const {
  // threads and outdir change where and how fast, not what is computed
  std::string text;
  for (const auto& [k, v] : values_)
    if (k != "threads" && k != "outdir") text += k + " = " + v + "\n";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

std::string Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) bad(key, "missing");
  return it->second;
}

double Config::get_double(const std::string& key) const { return to_double(key, get(key)); }
long Config::get_int(const std::string& key) const { return to_long(key, get(key)); }

bool Config::get_bool(const std::string& key) const {
  const std::string v = get(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad(key, "'" + v + "' is not a boolean");
}

std::vector<double> Config::get_doubles(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : split(get(key))) out.push_back(to_double(key, s));
  return out;
}

std::vector<long> Config::get_ints(const std::string& key) const {
  std::vector<long> out;
  for (const auto& s : split(get(key))) out.push_back(to_long(key, s));
  return out;
}

std::vector<std::string> Config::get_strings(const std::string& key) const { return split(get(key)); }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace lakes::harness
