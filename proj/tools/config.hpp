#pragma once

// key=value experiment configuration: file lines "key = value" ('#' starts a comment),
// overridden by repeated --set key=value. Every command declares the keys it accepts.

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gausson/params.hpp"

namespace gausson::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class ExperimentConfig {
 public:
  void set(const std::string& assignment, const std::string& origin) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ": expected key=value, got '" + assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ": empty key");
    values_[key] = trim(assignment.substr(eq + 1));
  }

  void load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
      if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
      if (trim(line).empty()) continue;
      set(line, path + ":" + std::to_string(n));
    }
  }

  /// Rejects any key outside `allowed`.
  void check_keys(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : values_)
      if (!allowed.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double num(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    return parse_double(key, it->second);
  }

  long integer(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& s = it->second;
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ConfigError("key '" + key + "': not an integer: " + s);
    return v;
  }

  bool flag(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw ConfigError("key '" + key + "': not a boolean: " + it->second);
  }

  /// Comma-separated list of reals.
  std::vector<double> list(const std::string& key, const std::vector<double>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    for (std::string item; std::getline(ss, item, ',');) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
  }

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  static double parse_double(const std::string& key, const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("key '" + key + "': not a finite number: " + s);
    }
  }

  std::map<std::string, std::string> values_;
};

inline PotentialSign parse_potential(const std::string& s) {
  if (s == "repulsive") return PotentialSign::Repulsive;
  if (s == "confining") return PotentialSign::Confining;
  if (s == "none") return PotentialSign::None;
  throw ConfigError("potential must be repulsive, confining or none, got '" + s + "'");
}

/// lambda, omega, dim, potential, validated against the PhysParams invariants.
inline PhysParams physical_params(const ExperimentConfig& cfg, double lambda = -2.0, double omega = 1.0) {
  const long dim = cfg.integer("dim", 1);
  if (dim != 1 && dim != 2) throw ConfigError("dim must be 1 or 2");
  try {
    return PhysParams(cfg.num("lambda", lambda), cfg.num("omega", omega), static_cast<int>(dim),
                      parse_potential(cfg.str("potential", "repulsive")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace gausson::cli
