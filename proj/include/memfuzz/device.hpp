#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "memfuzz/csv.hpp"
#include "memfuzz/error.hpp"
#include "memfuzz/waveform.hpp"

namespace memfuzz {

/// Drift coefficient under which 16 default write pulses (1.2 V, 50 ms wide,
/// 100 ms period, dt = 50 us) take a fresh device from x = 0 to x >= 0.999.
/// Frozen output of calibrate_k_drift(); tests re-derive it.
inline constexpr double kDefaultKDrift = 33854.190977269624;

/// Physical constants of one threshold-gated linear ion-drift memristor.
struct DeviceParams {
  double r_on = 3000.0;    // fully doped, ohm
  double r_off = 62000.0;  // fully undoped, ohm
  double v_th_pos = 1.0;   // V
  double v_th_neg = -1.0;  // V
  double k_drift = kDefaultKDrift;  // dx per coulomb
  bool gated = true;

  friend bool operator==(const DeviceParams&, const DeviceParams&) = default;
};

inline void validate(const DeviceParams& p) {
  if (!(p.r_on > 0.0) || !(p.r_on < p.r_off) || !std::isfinite(p.r_off)) {
    throw DomainError("device params require 0 < r_on < r_off");
  }
  if (!(p.v_th_neg < 0.0) || !(p.v_th_pos > 0.0) || !std::isfinite(p.v_th_pos) ||
      !std::isfinite(p.v_th_neg)) {
    throw DomainError("device params require v_th_neg < 0 < v_th_pos");
  }
  if (!(p.k_drift > 0.0) || !std::isfinite(p.k_drift)) {
    throw DomainError("device params require k_drift > 0");
  }
}

/// Normalized doped-region position x = w/D plus the running charge and
/// flux integrals.
struct DeviceState {
  double x = 0.0;
  double q = 0.0;    // C
  double phi = 0.0;  // V*s

  friend bool operator==(const DeviceState&, const DeviceState&) = default;
};

struct TracePoint {
  double t = 0.0;
  double v = 0.0;
  double i = 0.0;
  double x = 0.0;
  double m = 0.0;
};

/// Linear blend of r_on and r_off weighted by the doped fraction.
inline double memristance(const DeviceParams& p, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("state x = " + csv::num(x) + " outside [0, 1]");
  }
  return x * p.r_on + (1.0 - x) * p.r_off;
}

inline DeviceState fresh_state(const DeviceParams&) { return {}; }

namespace detail {

inline bool sub_threshold(const DeviceParams& p, double v) noexcept {
  return p.gated && v >= p.v_th_neg && v <= p.v_th_pos;
}

// One explicit Euler step without argument checks. Returns the pre-step current.
inline double euler_step(const DeviceParams& p, DeviceState& s, double v, double dt) noexcept {
  const double m = s.x * p.r_on + (1.0 - s.x) * p.r_off;
  const double i = v / m;
  if (!sub_threshold(p, v)) s.x = std::clamp(s.x + p.k_drift * i * dt, 0.0, 1.0);
  s.q += i * dt;
  s.phi += v * dt;
  return i;
}

inline void check_state(const DeviceState& s) {
  if (!(s.x >= 0.0 && s.x <= 1.0)) throw DomainError("device state x outside [0, 1]");
}

}  // namespace detail

/// Advances the state by one explicit Euler step of length dt under voltage v.
/// Inside the closed threshold window (gated mode) only q and phi move.
inline DeviceState step(const DeviceParams& p, DeviceState s, double v, double dt) {
  if (!(dt > 0.0)) throw DomainError("step requires dt > 0");
  detail::check_state(s);
  detail::euler_step(p, s, v, dt);
  return s;
}

/// Drives the device over the waveform and returns one trace point per
/// sample. Point k holds the state before the interval [t_k, t_k+1] is
/// integrated, so the last point carries the final state. Each interval
/// uses the waveform's nominal dt.
inline std::vector<TracePoint> simulate(const DeviceParams& p, DeviceState s, const Waveform& w) {
  validate(w);
  detail::check_state(s);
  std::vector<TracePoint> trace;
  trace.reserve(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    const auto& smp = w.samples[k];
    const double m = s.x * p.r_on + (1.0 - s.x) * p.r_off;
    trace.push_back({smp.t, smp.v, smp.v / m, s.x, m});
    if (k + 1 < w.size()) detail::euler_step(p, s, smp.v, w.dt);
  }
  return trace;
}

/// Same integration as simulate() but only the final state is kept.
inline DeviceState drive(const DeviceParams& p, DeviceState s, const Waveform& w) {
  validate(w);
  detail::check_state(s);
  for (std::size_t k = 0; k + 1 < w.size(); ++k) detail::euler_step(p, s, w.samples[k].v, w.dt);
  return s;
}

inline std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::string out = "t_s,v_V,i_A,x,m_ohm\n";
  for (const auto& tp : trace) csv::row(out, tp.t, tp.v, tp.i, tp.x, tp.m);
  return out;
}

/// Enclosed I-V loop area by the trapezoid rule, sum of i dv.
inline double loop_area(const std::vector<TracePoint>& trace) {
  double area = 0.0;
  for (std::size_t k = 1; k < trace.size(); ++k) {
    area += 0.5 * (trace[k].i + trace[k - 1].i) * (trace[k].v - trace[k - 1].v);
  }
  return area;
}

}  // namespace memfuzz
