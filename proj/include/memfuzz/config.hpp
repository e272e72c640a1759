#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "memfuzz/crossbar.hpp"
#include "memfuzz/device.hpp"
#include "memfuzz/error.hpp"
#include "memfuzz/pulsegen.hpp"
#include "memfuzz/shapes.hpp"

namespace memfuzz {

inline constexpr int kDefaultCalibrationPulses = 16;

/// Resolved run configuration. k_drift is always concrete here; a
/// `calibrate_n` request is turned into a value at load time.
struct Config {
  DeviceParams device;
  PulseTemplate pulses;
  double r_f = 62000.0;
  double v_read = kReadVoltage;
  std::size_t rows = 8;
  std::size_t cols = 1;
  double lo = 0.0;
  double hi = 1.0;

  ReadoutConfig readout() const { return {r_f, v_read, std::nullopt}; }
  InputDomain domain() const { return {lo, hi, rows}; }

  friend bool operator==(const Config&, const Config&) = default;
};

namespace detail {

using nlohmann::json;

inline void reject_unknown(const json& obj, const std::string& prefix, std::initializer_list<std::string_view> known) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const auto k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(prefix.empty() ? key : prefix + "." + key, "unknown key");
  }
}

inline const json* section(const json& root, const char* name) {
  if (!root.contains(name)) return nullptr;
  const json& s = root.at(name);
  if (!s.is_object()) throw ConfigError(name, "expected an object");
  return &s;
}

inline void read_number(const json* sec, const std::string& prefix, const char* key, double& dst) {
  if (sec == nullptr || !sec->contains(key)) return;
  const json& v = sec->at(key);
  if (!v.is_number()) throw ConfigError(prefix + "." + key, "expected a number");
  dst = v.get<double>();
  if (!std::isfinite(dst)) throw ConfigError(prefix + "." + key, "expected a finite number");
}

inline void read_count(const json* sec, const std::string& prefix, const char* key, long long& dst) {
  if (sec == nullptr || !sec->contains(key)) return;
  const json& v = sec->at(key);
  if (!v.is_number_integer()) throw ConfigError(prefix + "." + key, "expected an integer");
  dst = v.get<long long>();
}

inline void require(bool ok, const char* key, const char* what) {
  if (!ok) throw ConfigError(key, what);
}

}  // namespace detail

/// Parses and validates a config document. Absent keys take the default
/// device/pulse/readout values; an absent drift coefficient is calibrated
/// against the configured pulses for 16 traversal pulses.
inline Config parse_config(std::string_view text) {
  using detail::json;
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "config root must be an object");
  detail::reject_unknown(root, "", {"device", "pulses", "readout", "crossbar", "domain"});

  Config cfg;
  const json* dev = detail::section(root, "device");
  const json* pulses = detail::section(root, "pulses");
  const json* readout = detail::section(root, "readout");
  const json* xbar = detail::section(root, "crossbar");
  const json* domain = detail::section(root, "domain");
  if (dev) {
    detail::reject_unknown(*dev, "device", {"r_on_ohm", "r_off_ohm", "v_th_pos_V", "v_th_neg_V", "k_drift_perC", "calibrate_n"});
  }
  if (pulses) detail::reject_unknown(*pulses, "pulses", {"amplitude_V", "width_s", "period_s"});
  if (readout) detail::reject_unknown(*readout, "readout", {"r_f_ohm", "v_read_V"});
  if (xbar) detail::reject_unknown(*xbar, "crossbar", {"rows", "cols"});
  if (domain) detail::reject_unknown(*domain, "domain", {"lo", "hi"});

  auto& d = cfg.device;
  detail::read_number(dev, "device", "r_on_ohm", d.r_on);
  detail::read_number(dev, "device", "r_off_ohm", d.r_off);
  detail::read_number(dev, "device", "v_th_pos_V", d.v_th_pos);
  detail::read_number(dev, "device", "v_th_neg_V", d.v_th_neg);
  detail::require(d.r_on > 0.0, "device.r_on_ohm", "must be positive");
  detail::require(d.r_off > d.r_on, "device.r_off_ohm", "must exceed r_on_ohm");
  detail::require(d.v_th_pos > 0.0, "device.v_th_pos_V", "must be positive");
  detail::require(d.v_th_neg < 0.0, "device.v_th_neg_V", "must be negative");

  auto& p = cfg.pulses;
  detail::read_number(pulses, "pulses", "amplitude_V", p.amplitude);
  detail::read_number(pulses, "pulses", "width_s", p.width);
  detail::read_number(pulses, "pulses", "period_s", p.period);
  detail::require(p.width > 0.0, "pulses.width_s", "must be positive");
  detail::require(p.period > p.width, "pulses.period_s", "must exceed width_s");

  const bool has_k = dev && dev->contains("k_drift_perC");
  const bool has_n = dev && dev->contains("calibrate_n");
  if (has_k && has_n) throw ConfigError("device.calibrate_n", "conflicts with device.k_drift_perC");
  if (has_k) {
    detail::read_number(dev, "device", "k_drift_perC", d.k_drift);
    detail::require(d.k_drift > 0.0, "device.k_drift_perC", "must be positive");
  } else {
    long long n = kDefaultCalibrationPulses;
    detail::read_count(dev, "device", "calibrate_n", n);
    detail::require(n >= 2 && n <= 100000, "device.calibrate_n", "must lie in [2, 100000]");
    try {
      d.k_drift = calibrate_k_drift(d, p, static_cast<int>(n), p.default_dt());
    } catch (const Error& e) {
      throw ConfigError("device.calibrate_n", e.what());
    }
  }

  cfg.r_f = d.r_off;
  detail::read_number(readout, "readout", "r_f_ohm", cfg.r_f);
  detail::read_number(readout, "readout", "v_read_V", cfg.v_read);
  detail::require(cfg.r_f > 0.0, "readout.r_f_ohm", "must be positive");
  detail::require(std::abs(cfg.v_read) <= std::min(d.v_th_pos, -d.v_th_neg) / 2.0, "readout.v_read_V",
                  "magnitude must not exceed half the smaller threshold");

  long long rows = 8;
  long long cols = 1;
  detail::read_count(xbar, "crossbar", "rows", rows);
  detail::read_count(xbar, "crossbar", "cols", cols);
  detail::require(rows >= 1 && rows <= 1000000, "crossbar.rows", "must lie in [1, 1000000]");
  detail::require(cols >= 1 && cols <= 1000000, "crossbar.cols", "must lie in [1, 1000000]");
  cfg.rows = static_cast<std::size_t>(rows);
  cfg.cols = static_cast<std::size_t>(cols);

  detail::read_number(domain, "domain", "lo", cfg.lo);
  detail::read_number(domain, "domain", "hi", cfg.hi);
  detail::require(cfg.lo < cfg.hi, "domain.hi", "must exceed domain.lo");
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

/// Fully explicit document; parse_config(to_json(c).dump()) == c.
inline nlohmann::json to_json(const Config& c) {
  return {
      {"device",
       {{"r_on_ohm", c.device.r_on},
        {"r_off_ohm", c.device.r_off},
        {"v_th_pos_V", c.device.v_th_pos},
        {"v_th_neg_V", c.device.v_th_neg},
        {"k_drift_perC", c.device.k_drift}}},
      {"pulses", {{"amplitude_V", c.pulses.amplitude}, {"width_s", c.pulses.width}, {"period_s", c.pulses.period}}},
      {"readout", {{"r_f_ohm", c.r_f}, {"v_read_V", c.v_read}}},
      {"crossbar", {{"rows", c.rows}, {"cols", c.cols}}},
      {"domain", {{"lo", c.lo}, {"hi", c.hi}}},
  };
}

}  // namespace memfuzz
