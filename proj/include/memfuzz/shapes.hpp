#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "memfuzz/crossbar.hpp"
#include "memfuzz/device.hpp"
#include "memfuzz/error.hpp"
#include "memfuzz/pulsegen.hpp"

namespace memfuzz {

struct Triangular {
  double a, b, c;
  friend bool operator==(const Triangular&, const Triangular&) = default;
};

struct Trapezoidal {
  double a, b, c, d;
  friend bool operator==(const Trapezoidal&, const Trapezoidal&) = default;
};

struct Gaussian {
  double center, sigma;
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

using ShapeSpec = std::variant<Triangular, Trapezoidal, Gaussian>;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline void validate(const ShapeSpec& spec) {
  std::visit(overloaded{
                 [](const Triangular& t) {
                   if (!(t.a <= t.b && t.b <= t.c && t.a < t.c)) {
                     throw DomainError("triangular shape requires a <= b <= c and a < c");
                   }
                 },
                 [](const Trapezoidal& t) {
                   if (!(t.a <= t.b && t.b <= t.c && t.c <= t.d && t.a < t.d)) {
                     throw DomainError("trapezoidal shape requires a <= b <= c <= d and a < d");
                   }
                 },
                 [](const Gaussian& g) {
                   if (!(g.sigma > 0.0)) throw DomainError("gaussian shape requires sigma > 0");
                 },
             },
             spec);
}

/// Membership value of the shape at x, in [0, 1].
inline double evaluate(const ShapeSpec& spec, double x) {
  return std::visit(overloaded{
                        [x](const Triangular& t) {
                          if (x < t.a || x > t.c) return 0.0;
                          if (x < t.b) return (x - t.a) / (t.b - t.a);
                          if (x == t.b) return 1.0;
                          return (t.c - x) / (t.c - t.b);
                        },
                        [x](const Trapezoidal& t) {
                          if (x < t.a || x > t.d) return 0.0;
                          if (x < t.b) return (x - t.a) / (t.b - t.a);
                          if (x <= t.c) return 1.0;
                          return (t.d - x) / (t.d - t.c);
                        },
                        [x](const Gaussian& g) {
                          const double z = (x - g.center) / g.sigma;
                          return std::exp(-0.5 * z * z);
                        },
                    },
                    spec);
}

/// Shape evaluated at each bin center of the domain.
inline std::vector<double> sample_shape(const ShapeSpec& spec, const InputDomain& domain) {
  validate(spec);
  validate(domain);
  std::vector<double> out(domain.levels);
  for (std::size_t i = 0; i < domain.levels; ++i) out[i] = evaluate(spec, domain.center(i));
  return out;
}

/// Inverse of conductance_mu: memristance realizing each target membership.
inline std::vector<double> targets_to_memristance(std::span<const double> targets, const DeviceParams& p) {
  const double g_min = 1.0 / p.r_off;
  const double g_max = 1.0 / p.r_on;
  std::vector<double> out;
  out.reserve(targets.size());
  for (const double mu : targets) {
    if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("target membership " + csv::num(mu) + " outside [0, 1]");
    const double m = 1.0 / (g_min + mu * (g_max - g_min));
    out.push_back(std::clamp(m, p.r_on, p.r_off));
  }
  return out;
}

/// Memristance after n = 0..n_max pulses of the template, each run starting
/// from a fresh device. Element n equals the result of simulating a
/// pulse_train of count n.
inline std::vector<double> pulse_response(const DeviceParams& p, const PulseTemplate& pulse, int n_max, double dt) {
  if (n_max < 0) throw DomainError("n_max must be non-negative");
  validate(p);
  const Waveform one = pulse_train(with_count(pulse, 1), dt);
  std::vector<double> m;
  m.reserve(static_cast<std::size_t>(n_max) + 1);
  DeviceState s = fresh_state(p);
  m.push_back(memristance(p, s.x));
  for (int n = 1; n <= n_max; ++n) {
    s = drive(p, s, one);
    m.push_back(memristance(p, s.x));
  }
  return m;
}

/// Index of the response closest to target_m; ties go to the smaller count.
inline int nearest_count(std::span<const double> response, double target_m) {
  int best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < response.size(); ++n) {
    const double err = std::abs(response[n] - target_m);
    if (err < best_err) {
      best_err = err;
      best = static_cast<int>(n);
    }
  }
  return best;
}

/// Pulse count in [0, n_max] whose fresh-state result lands closest to target_m.
inline int solve_pulse_schedule(const DeviceParams& p, const PulseTemplate& pulse, double target_m, int n_max,
                                double dt) {
  if (n_max < 0) throw DomainError("n_max must be non-negative");
  if (!(target_m >= p.r_on && target_m <= p.r_off)) {
    throw DomainError("target memristance " + csv::num(target_m) + " outside [r_on, r_off]");
  }
  const auto response = pulse_response(p, pulse, n_max, dt);
  return nearest_count(response, target_m);
}

struct CalibrationBounds {
  double lo = 0.0;
  double hi = 0.0;  // 0 selects 1 / (|amplitude| / r_off * width)
};

inline constexpr double kSaturatedState = 0.999;

/// Bisects k_drift (60 iterations) for the smallest value under which
/// n_traverse template pulses take a fresh device to x >= 0.999.
inline double calibrate_k_drift(DeviceParams p, const PulseTemplate& pulse, int n_traverse, double dt,
                                CalibrationBounds bounds = {}) {
  if (n_traverse < 2) throw DomainError("n_traverse must be at least 2");
  validate(pulse);
  p.k_drift = 1.0;
  validate(p);
  const Waveform train = pulse_train(with_count(pulse, n_traverse), dt);

  // Every write step moves x by at least k |v| / r_off dt, so this k
  // saturates within the first pulse.
  double hi = bounds.hi > 0.0 ? bounds.hi : p.r_off / (std::abs(pulse.amplitude) * pulse.width);
  double lo = bounds.lo;
  auto reaches = [&](double k) {
    p.k_drift = k;
    return drive(p, fresh_state(p), train).x >= kSaturatedState;
  };
  if (!(lo >= 0.0 && lo < hi)) throw CalibrationError("calibration bounds must satisfy 0 <= lo < hi");
  if ((lo > 0.0 && reaches(lo)) || !reaches(hi)) {
    throw CalibrationError("calibration bounds [" + csv::num(lo) + ", " + csv::num(hi) +
                           "] do not bracket the saturation point");
  }
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    (reaches(mid) ? hi : lo) = mid;
  }
  return hi;
}

struct LevelReport {
  std::size_t level = 0;
  double target_mu = 0.0;
  double target_m = 0.0;
  int pulses = 0;
  double achieved_m = 0.0;
  double achieved_mu = 0.0;
  double abs_error = 0.0;
};

struct SynthesisReport {
  std::vector<LevelReport> levels;
  // Largest membership change produced by one additional pulse over 0..n_max.
  double mu_quantum = 0.0;

  double max_abs_error() const {
    double e = 0.0;
    for (const auto& l : levels) e = std::max(e, l.abs_error);
    return e;
  }
};

inline double max_mu_quantum(const DeviceParams& p, std::span<const double> response) {
  double q = 0.0;
  for (std::size_t n = 1; n < response.size(); ++n) {
    q = std::max(q, std::abs(conductance_mu(p, response[n]) - conductance_mu(p, response[n - 1])));
  }
  return q;
}

/// Programs one crossbar column so its levels follow the shape. Each cell is
/// reset and then receives the pulse count whose memristance is closest to
/// the level's target.
inline SynthesisReport synthesize(Crossbar& xbar, std::size_t col, const ShapeSpec& spec, const InputDomain& domain,
                                  const PulseTemplate& pulse, int n_max, const ReadoutConfig& cfg, double dt) {
  xbar.check_domain(domain);
  validate(cfg, xbar.params());
  if (col >= xbar.cols()) throw DomainError("column " + std::to_string(col) + " out of range");
  const auto targets = sample_shape(spec, domain);
  const auto target_m = targets_to_memristance(targets, xbar.params());
  const auto response = pulse_response(xbar.params(), pulse, n_max, dt);

  SynthesisReport report;
  report.mu_quantum = max_mu_quantum(xbar.params(), response);
  for (std::size_t level = 0; level < domain.levels; ++level) {
    const int n = nearest_count(response, target_m[level]);
    xbar.reset_cell(level, col);
    xbar.program_cell(level, col, with_count(pulse, n), dt);
    const auto reading = xbar.read_level(col, level, cfg);
    LevelReport lr;
    lr.level = level;
    lr.target_mu = targets[level];
    lr.target_m = target_m[level];
    lr.pulses = n;
    lr.achieved_m = xbar.memristance(level, col);
    lr.achieved_mu = reading.mu_rescaled;
    lr.abs_error = std::abs(lr.achieved_mu - lr.target_mu);
    report.levels.push_back(lr);
  }
  return report;
}

inline std::string synthesis_csv(const SynthesisReport& report) {
  std::string out = "level,target_mu,target_m_ohm,pulses,achieved_m_ohm,achieved_mu,abs_error\n";
  for (const auto& l : report.levels) {
    csv::row(out, l.level, l.target_mu, l.target_m, l.pulses, l.achieved_m, l.achieved_mu, l.abs_error);
  }
  return out;
}

}  // namespace memfuzz
