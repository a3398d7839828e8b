#pragma once

// Flat `key=value` configuration files. Blank lines and text after '#' are
// ignored; unknown or repeated keys are errors. Missing keys keep their
// defaults (the reference simulation setup, W = 1 MHz).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semrelay/penalty_solver.hpp"
#include "semrelay/system_model.hpp"

namespace semrelay {

struct Config {
  SystemParams system;
  SigmoidFit fit;
  PenaltyConfig penalty;
  double suts_per_word = 1.0;  // display only; never affects the rate

  bool operator==(const Config& o) const {
    return dump_key_values() == o.dump_key_values();
  }

  /// (key, value) pairs in canonical order.
  std::vector<std::pair<std::string, double>> dump_key_values() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, std::string key, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                    : what),
        line_(line),
        key_(std::move(key)) {}

  /// 1-based line of a syntax error, 0 for invariant violations.
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

namespace detail {

struct ConfigField {
  const char* key;
  bool integer;
  std::function<double&(Config&)> real;
  std::function<int&(Config&)> whole;
};

inline const std::vector<ConfigField>& config_fields() {
  static const std::vector<ConfigField> fields = [] {
    std::vector<ConfigField> f;
    auto real = [&f](const char* key, auto member) {
      f.push_back({key, false, member, {}});
    };
    auto whole = [&f](const char* key, auto member) {
      f.push_back({key, true, {}, member});
    };
    real("D", [](Config& c) -> double& { return c.system.D; });
    real("H", [](Config& c) -> double& { return c.system.H; });
    real("rho0_db", [](Config& c) -> double& { return c.system.rho0_db; });
    real("beta", [](Config& c) -> double& { return c.system.beta; });
    real("P_b", [](Config& c) -> double& { return c.system.P_b; });
    real("P_r", [](Config& c) -> double& { return c.system.P_r; });
    real("N0_dbm_hz", [](Config& c) -> double& { return c.system.N0_dbm_hz; });
    real("W", [](Config& c) -> double& { return c.system.W; });
    real("mu", [](Config& c) -> double& { return c.system.mu; });
    real("K", [](Config& c) -> double& { return c.fit.K; });
    real("a1", [](Config& c) -> double& { return c.fit.a1; });
    real("a2", [](Config& c) -> double& { return c.fit.a2; });
    real("c1", [](Config& c) -> double& { return c.fit.c1; });
    real("c2", [](Config& c) -> double& { return c.fit.c2; });
    real("eps_bar", [](Config& c) -> double& { return c.fit.eps_bar; });
    real("lambda0", [](Config& c) -> double& { return c.penalty.lambda0; });
    real("c", [](Config& c) -> double& { return c.penalty.c; });
    real("nu", [](Config& c) -> double& { return c.penalty.nu; });
    real("eps1", [](Config& c) -> double& { return c.penalty.eps1; });
    real("inner_tol", [](Config& c) -> double& { return c.penalty.inner_tol; });
    real("inner_step_tol",
         [](Config& c) -> double& { return c.penalty.inner_step_tol; });
    whole("max_inner", [](Config& c) -> int& { return c.penalty.max_inner; });
    whole("max_outer", [](Config& c) -> int& { return c.penalty.max_outer; });
    real("alpha_floor", [](Config& c) -> double& { return c.penalty.alpha_floor; });
    real("lambda_floor",
         [](Config& c) -> double& { return c.penalty.lambda_floor; });
    real("suts_per_word", [](Config& c) -> double& { return c.suts_per_word; });
    return f;
  }();
  return fields;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::vector<std::pair<std::string, double>> Config::dump_key_values()
    const {
  std::vector<std::pair<std::string, double>> out;
  Config self = *this;  // field accessors hand out mutable references
  for (const auto& f : detail::config_fields()) {
    out.emplace_back(f.key, f.integer ? static_cast<double>(f.whole(self))
                                      : f.real(self));
  }
  return out;
}

/// Checks every invariant, throwing ConfigError tagged with the failing key.
inline void validate(const Config& c) {
  try {
    c.system.validate();
    c.fit.validate();
    c.penalty.validate();
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    throw ConfigError(0, msg.substr(0, msg.find(':')), msg);
  }
  if (!(c.suts_per_word > 0)) {
    throw ConfigError(0, "suts_per_word", "suts_per_word: must be > 0");
  }
}

inline Config parse_config(std::string_view text) {
  Config cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                      : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = detail::trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, "", "expected key=value");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));

    const auto& fields = detail::config_fields();
    const auto it = std::find_if(fields.begin(), fields.end(),
                                 [&](const auto& f) { return key == f.key; });
    if (it == fields.end()) {
      throw ConfigError(line_no, key, "unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError(line_no, key, "duplicate key '" + key + "'");
    }

    double v = 0.0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc{} || end != value.data() + value.size() ||
        !std::isfinite(v)) {
      throw ConfigError(line_no, key,
                        "invalid number for '" + key + "': '" + std::string(value) + "'");
    }
    if (it->integer) {
      if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw ConfigError(line_no, key, "'" + key + "' must be an integer");
      }
      it->whole(cfg) = static_cast<int>(v);
    } else {
      it->real(cfg) = v;
    }
  }
  validate(cfg);
  return cfg;
}

inline Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "", "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

/// Every key with a round-trippable value, one per line.
inline std::string dump_config(const Config& c) {
  std::string out;
  for (const auto& [key, value] : c.dump_key_values()) {
    out += key + "=" + detail::format_double(value) + "\n";
  }
  return out;
}

}  // namespace semrelay
