#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace lakes::harness {

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"qutrit-sweep", "ruby-sweep", "ruby-pulse",        "ruby-match",
                                                 "dtc-sweep",    "dtc-pulse",  "dtc-verify-alphas", "twa-sweep"};
  return names;
}

/// Flat key = value configuration. Values are kept as written so that a
/// parse / serialize round trip is lossless; lists are comma separated.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  /// "key=value" override; throws ConfigInvalid on malformed input.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string experiment() const;

  /// Keys sorted, one "key = value" per line.
  std::string serialize() const;
  /// FNV-1a 64 of serialize() without the threads and outdir keys, as 16 hex digits.
  std::string hash() const;

  // typed access; malformed values throw ConfigInvalid naming the key
  std::string get(const std::string& key) const;
  double get_double(const std::string& key) const;
  long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_doubles(const std::string& key) const;
  std::vector<long> get_ints(const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

std::uint64_t fnv1a(const std::string& s);

/// Formats with 17 significant digits (round-trips every double).
std::string format_double(double v);

}  // namespace lakes::harness
