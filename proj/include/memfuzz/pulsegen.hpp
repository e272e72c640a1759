#pragma once

#include <cmath>
#include <numbers>

#include "memfuzz/error.hpp"
#include "memfuzz/waveform.hpp"

namespace memfuzz {

inline constexpr double kWriteAmplitude = 1.2;   // V
inline constexpr double kResetAmplitude = -1.2;  // V
inline constexpr double kPulsePeriod = 0.1;      // s
inline constexpr double kPulseWidth = 0.05;      // s
inline constexpr double kReadVoltage = 0.2;      // V

/// Rectangular pulse shape without a repetition count.
struct PulseTemplate {
  double amplitude = kWriteAmplitude;
  double width = kPulseWidth;
  double period = kPulsePeriod;
  double baseline = 0.0;

  /// Euler step used when none is given: a thousandth of the pulse width.
  double default_dt() const noexcept { return width / 1000.0; }

  friend bool operator==(const PulseTemplate&, const PulseTemplate&) = default;
};

struct PulseTrainSpec {
  PulseTemplate pulse;
  int count = 0;
};

inline PulseTrainSpec with_count(const PulseTemplate& t, int count) { return {t, count}; }

namespace detail {

inline Waveform uniform_grid(double duration, double dt) {
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  Waveform w{.samples = {}, .dt = dt};
  w.samples.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) w.samples[k].t = static_cast<double>(k) * dt;
  return w;
}

inline void check_dt(double dt, double limit, const char* what) {
  if (!(dt > 0.0)) throw ResolutionError("dt must be positive");
  if (dt > limit * (1.0 + 1e-12)) {
    throw ResolutionError(std::string("dt too coarse for ") + what);
  }
}

}  // namespace detail

inline void validate(const PulseTemplate& t) {
  if (!(t.width > 0.0) || !(t.width < t.period) || !std::isfinite(t.period)) {
    throw DomainError("pulse template requires 0 < width < period");
  }
}

/// `count` rectangular pulses: amplitude on [j*period, j*period + width),
/// baseline elsewhere. The closing sample at t = count*period is baseline.
inline Waveform pulse_train(const PulseTrainSpec& spec, double dt) {
  const auto& p = spec.pulse;
  validate(p);
  if (spec.count < 0) throw DomainError("pulse count must be non-negative");
  detail::check_dt(dt, p.width / 10.0, "pulse width (need dt <= width/10)");

  Waveform w = detail::uniform_grid(spec.count * p.period, dt);
  const double tol = 1e-9 * dt;
  for (std::size_t k = 0; k + 1 < w.samples.size(); ++k) {
    const double t = w.samples[k].t;
    const double cycles = t / p.period;
    const double phase = (cycles - std::floor(cycles + tol / p.period)) * p.period;
    w.samples[k].v = phase < p.width - tol ? p.amplitude : p.baseline;
  }
  w.samples.back().v = p.baseline;
  return w;
}

/// Single rectangular pulse of amplitude v_read followed by one 0 V sample.
inline Waveform read_pulse(double v_read, double width, double dt) {
  if (!(width > 0.0)) throw DomainError("read pulse width must be positive");
  detail::check_dt(dt, width / 10.0, "read pulse width (need dt <= width/10)");
  Waveform w = detail::uniform_grid(width, dt);
  for (std::size_t k = 0; k + 1 < w.samples.size(); ++k) w.samples[k].v = v_read;
  return w;
}

/// amplitude * sin(2 pi freq t) over `cycles` whole periods.
inline Waveform sine_sweep(double amplitude, double freq, int cycles, double dt) {
  if (!(freq > 0.0)) throw DomainError("sine frequency must be positive");
  if (cycles < 1) throw DomainError("sine sweep needs at least one cycle");
  detail::check_dt(dt, 1.0 / (1000.0 * freq), "sine sweep (need dt <= 1/(1000 freq))");
  Waveform w = detail::uniform_grid(cycles / freq, dt);
  for (auto& s : w.samples) s.v = amplitude * std::sin(2.0 * std::numbers::pi * freq * s.t);
  return w;
}

/// Constant voltage held for `duration`.
inline Waveform constant(double v, double duration, double dt) {
  if (!(duration > 0.0)) throw DomainError("constant waveform needs positive duration");
  if (!(dt > 0.0) || dt > duration) throw ResolutionError("dt must lie in (0, duration]");
  Waveform w = detail::uniform_grid(duration, dt);
  for (auto& s : w.samples) s.v = v;
  return w;
}

}  // namespace memfuzz
