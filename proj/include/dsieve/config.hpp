/* Copyright 2026 The dsieve Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Flat key=value run configuration. Lines are `key = value`; `#` starts a
// comment. Unknown keys are errors so that typos never go unnoticed.

#ifndef DSIEVE_CONFIG_HPP
#define DSIEVE_CONFIG_HPP

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dsieve/error.hpp"
#include "dsieve/numeric.hpp"
#include "dsieve/params.hpp"
#include "dsieve/sequence.hpp"
#include "dsieve/sieve.hpp"

namespace dsieve {

struct RunConfig {
  std::string sequence = "poly:1,0,0";
  // params
  std::string gamma = "2";
  std::string c_mode = "paper";
  std::string c_value;  // used when c_mode = custom
  std::string h_mode = "effective";
  Index n_start = 32;
  std::string eps2 = "1/100";
  std::string v = "3/5";
  int ladder_depth = 3;
  Index index_cap = 1'000'000'000'000'000;
  int precision = kDefaultPrecision;
  // sieve / witness
  std::string window = "auto";  // auto | level:index
  Index n_from = 32;
  Index n_to = 10'000;
  std::string strategy = "leftmost";
  std::uint64_t seed = 0;
  std::string out = "run";
  std::size_t max_runs = 20'000'000;
  int window_level = 20;
  // validate
  std::size_t l1_samples = 100;
  Index l1_n_lo = 32;
  Index l1_n_hi = 200;
  Index retention_n0 = 32;
  std::size_t retention_samples = 2;
  double work_budget = 2e9;

  std::vector<std::pair<std::string, std::string>> echo() const;
  void set(const std::string& key, const std::string& value);
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !in.eof()) throw ConfigError("cli", key, "cannot parse '" + value + "'");
  return out;
}

inline std::string check_rational(const std::string& key, const std::string& value) {
  try {
    (void)parse_rational(value);
  } catch (const Error&) {
    throw ConfigError("cli", key, "not a rational: '" + value + "'");
  }
  return value;
}

}  // namespace detail

inline void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = detail::trim(raw_key), value = detail::trim(raw_value);
  using detail::check_rational;
  using detail::parse_number;
  if (key == "sequence") sequence = value;
  else if (key == "gamma") gamma = check_rational(key, value);
  else if (key == "c_mode") c_mode = value;
  else if (key == "c_value") c_value = check_rational(key, value);
  else if (key == "h_mode") h_mode = value;
  else if (key == "n_start") n_start = parse_number<Index>(key, value);
  else if (key == "eps2") eps2 = check_rational(key, value);
  else if (key == "v") v = check_rational(key, value);
  else if (key == "ladder_depth") ladder_depth = parse_number<int>(key, value);
  else if (key == "index_cap") index_cap = parse_number<Index>(key, value);
  else if (key == "precision") precision = parse_number<int>(key, value);
  else if (key == "window") window = value;
  else if (key == "n_from") n_from = parse_number<Index>(key, value);
  else if (key == "n_to") n_to = parse_number<Index>(key, value);
  else if (key == "strategy") strategy = value;
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else if (key == "out") out = value;
  else if (key == "max_runs") max_runs = parse_number<std::size_t>(key, value);
  else if (key == "window_level") window_level = parse_number<int>(key, value);
  else if (key == "l1_samples") l1_samples = parse_number<std::size_t>(key, value);
  else if (key == "l1_n_lo") l1_n_lo = parse_number<Index>(key, value);
  else if (key == "l1_n_hi") l1_n_hi = parse_number<Index>(key, value);
  else if (key == "retention_n0") retention_n0 = parse_number<Index>(key, value);
  else if (key == "retention_samples") retention_samples = parse_number<std::size_t>(key, value);
  else if (key == "work_budget") work_budget = parse_number<double>(key, value);
  else throw ConfigError("cli", key, "unknown config key");
}

inline std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  auto s = [](auto x) { return std::to_string(x); };
  char budget[32];
  std::snprintf(budget, sizeof budget, "%.6g", work_budget);
  return {{"sequence", sequence},
          {"gamma", gamma},
          {"c_mode", c_mode},
          {"c_value", c_value},
          {"h_mode", h_mode},
          {"n_start", s(n_start)},
          {"eps2", eps2},
          {"v", v},
          {"ladder_depth", s(ladder_depth)},
          {"index_cap", s(index_cap)},
          {"precision", s(precision)},
          {"window", window},
          {"n_from", s(n_from)},
          {"n_to", s(n_to)},
          {"strategy", strategy},
          {"seed", s(seed)},
          {"out", out},
          {"max_runs", s(max_runs)},
          {"window_level", s(window_level)},
          {"l1_samples", s(l1_samples)},
          {"l1_n_lo", s(l1_n_lo)},
          {"l1_n_hi", s(l1_n_hi)},
          {"retention_n0", s(retention_n0)},
          {"retention_samples", s(retention_samples)},
          {"work_budget", budget}};
}

/// Applies `key=value` text, one assignment per line.
inline void apply_config_text(RunConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("cli", "line " + std::to_string(lineno), "expected key=value, got '" + line + "'");
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cli", "config", "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg;
  apply_config_text(cfg, buf.str());
  return cfg;
}

/// One `key=value` override.
inline void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("cli", "set", "expected key=value, got '" + assignment + "'");
  cfg.set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

inline GrowthSequence sequence_of(const RunConfig& cfg) {
  try {
    return parse_sequence_spec(cfg.sequence);
  } catch (const DomainError& e) {
    throw ConfigError("cli", "sequence", e.what());
  }
}

inline SieveParams params_of(const RunConfig& cfg) {
  const Rational gamma = parse_rational(cfg.gamma);
  if (gamma <= 0) throw ConfigError("cli", "gamma", "gamma must be positive");
  SieveParams p;
  if (cfg.c_mode == "paper") {
    p = SieveParams::paper(gamma, cfg.precision);
  } else if (cfg.c_mode == "custom") {
    if (cfg.c_value.empty()) throw ConfigError("cli", "c_value", "c_mode=custom needs c_value");
    const Rational c = parse_rational(cfg.c_value);
    if (c <= 0) throw ConfigError("cli", "c_value", "c must be positive");
    p = SieveParams::custom(gamma, c, cfg.precision);
  } else {
    throw ConfigError("cli", "c_mode", "expected paper or custom, got '" + cfg.c_mode + "'");
  }
  if (cfg.h_mode == "paper") p.h_mode = HMode::paper;
  else if (cfg.h_mode == "effective") p.h_mode = HMode::effective;
  else throw ConfigError("cli", "h_mode", "expected paper or effective, got '" + cfg.h_mode + "'");
  if (cfg.n_start < 2) throw ConfigError("cli", "n_start", "n_start must be at least 2");
  p.n_start = cfg.n_start;
  p.eps2 = parse_rational(cfg.eps2);
  p.v = parse_rational(cfg.v);
  if (p.v <= 0 || p.v >= 1) throw ConfigError("cli", "v", "v must lie in (0, 1)");
  if (cfg.index_cap < 2) throw ConfigError("cli", "index_cap", "index_cap must be at least 2");
  p.index_cap = cfg.index_cap;
  return p;
}

inline SieveOptions sieve_options_of(const RunConfig& cfg) {
  SieveOptions o;
  o.max_runs = cfg.max_runs;
  o.window_level = cfg.window_level;
  return o;
}

inline Strategy strategy_of(const RunConfig& cfg) {
  try {
    return parse_strategy(cfg.strategy);
  } catch (const Error& e) {
    throw ConfigError("cli", "strategy", e.what());
  }
}

/// `auto` or `level:index`.
inline std::optional<DyadicCell> window_of(const RunConfig& cfg) {
  if (cfg.window == "auto") return std::nullopt;
  const auto colon = cfg.window.find(':');
  if (colon == std::string::npos) throw ConfigError("cli", "window", "expected auto or level:index");
  try {
    const int level = std::stoi(cfg.window.substr(0, colon));
    const auto index = std::stoull(cfg.window.substr(colon + 1));
    return DyadicCell::make(level, index);
  } catch (const Error& e) {
    throw ConfigError("cli", "window", e.what());
  } catch (const std::exception&) {
    throw ConfigError("cli", "window", "cannot parse '" + cfg.window + "'");
  }
}

}  // namespace dsieve

#endif  // DSIEVE_CONFIG_HPP
