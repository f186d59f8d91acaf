// Plain-text experiment configuration: `key = value` lines, preset defaults,
// explicit keys override presets, unknown keys are errors.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ieqdg/errors.hpp"

namespace ieqdg {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "preset",      "mode",       "scheme",        "schemes",    "degree",
      "basis",       "dim",        "nx",            "ny",         "domain",
      "bc",          "beta0",      "beta1",         "a",          "eps",
      "g",           "B",          "dt",            "dt_list",    "dt_ref",
      "t_end",       "eta",        "max_outer_iters", "seed",     "output_dir",
      "snapshot_every", "quad_order", "mesh_list",  "solve_tol",  "error_ref",
      "error_quad",  "error_linf_cellmax", "use_printed_gn_forms"};
  return keys;
}

}  // namespace detail

/// Raw key/value view of a config file plus command-line overrides.
struct ConfigKV {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }

  std::string get_string(const std::string& key, const std::string& dflt) const {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
  }

  double get_double(const std::string& key, double dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config: cannot parse number for key '" + key + "': " + it->second);
    }
  }

  long get_long(const std::string& key, long dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
      std::size_t pos = 0;
      const long v = std::stol(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("config: cannot parse integer for key '" + key + "': " + it->second);
    }
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
      return std::stoull(it->second);
    } catch (const std::exception&) {
      throw ConfigError("config: cannot parse seed for key '" + key + "': " + it->second);
    }
  }

  std::vector<double> get_double_list(const std::string& key,
                                      const std::vector<double>& dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = detail::trim(tok);
      if (tok.empty()) continue;
      try {
        out.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError("config: cannot parse list entry for key '" + key + "': " + tok);
      }
    }
    if (out.empty()) throw ConfigError("config: empty list for key '" + key + "'");
    return out;
  }

  std::vector<std::string> get_string_list(const std::string& key,
                                           const std::vector<std::string>& dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    std::vector<std::string> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = detail::trim(tok);
      if (!tok.empty()) out.push_back(tok);
    }
    if (out.empty()) throw ConfigError("config: empty list for key '" + key + "'");
    return out;
  }

  void set(const std::string& key, const std::string& value) {
    if (!detail::known_keys().count(key)) throw ConfigError("config: unknown key '" + key + "'");
    kv[key] = value;
  }
};

/// Parse `key = value` text; '#' starts a comment; unknown keys are errors.
inline ConfigKV parse_config_text(const std::string& text) {
  ConfigKV cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value': " + line);
    }
    cfg.set(detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return cfg;
}

inline ConfigKV parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

/// Apply a `key=value` command-line override.
inline void apply_override(ConfigKV& cfg, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw ConfigError("override must be key=value: " + spec);
  cfg.set(detail::trim(spec.substr(0, eq)), detail::trim(spec.substr(eq + 1)));
}

}  // namespace ieqdg
