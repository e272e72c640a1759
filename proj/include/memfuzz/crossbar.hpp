#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "memfuzz/device.hpp"
#include "memfuzz/error.hpp"
#include "memfuzz/pulsegen.hpp"

namespace memfuzz {

/// Constant-conductance extra summing input (the R_c branch).
struct ShuntBranch {
  double r_c = 0.0;  // ohm
  double v_c = 0.0;  // V
};

/// Ideal inverting summing-amplifier readout of one column.
struct ReadoutConfig {
  double r_f = 62000.0;
  double v_read = kReadVoltage;
  std::optional<ShuntBranch> shunt;
};

/// Feedback resistor equal to r_off, 0.2 V reads, no shunt.
inline ReadoutConfig default_readout(const DeviceParams& p) { return {p.r_off, kReadVoltage, std::nullopt}; }

inline void validate(const ReadoutConfig& cfg, const DeviceParams& p) {
  if (!(cfg.r_f > 0.0) || !std::isfinite(cfg.r_f)) throw DomainError("readout r_f must be positive");
  const double bound = std::min(p.v_th_pos, -p.v_th_neg) / 2.0;
  if (!(std::abs(cfg.v_read) <= bound)) {
    throw DomainError("readout |v_read| must not exceed half the smaller threshold (" + csv::num(bound) + " V)");
  }
  if (cfg.shunt && !(cfg.shunt->r_c > 0.0)) throw DomainError("shunt r_c must be positive");
}

/// Crisp input range split into `levels` equal one-hot bins.
struct InputDomain {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t levels = 8;

  double bin_width() const noexcept { return (hi - lo) / static_cast<double>(levels); }
  double center(std::size_t level) const noexcept {
    return lo + (static_cast<double>(level) + 0.5) * bin_width();
  }
};

inline void validate(const InputDomain& d) {
  if (!(d.lo < d.hi) || !std::isfinite(d.lo) || !std::isfinite(d.hi)) {
    throw DomainError("input domain requires lo < hi");
  }
  if (d.levels < 2) throw DomainError("input domain requires at least 2 levels");
}

/// Bin index of x. Lower bin edges are inclusive; x == hi maps to the last bin.
inline std::size_t discretize(const InputDomain& d, double x) {
  validate(d);
  if (!(x >= d.lo && x <= d.hi)) {
    throw DomainError("input " + csv::num(x) + " outside [" + csv::num(d.lo) + ", " + csv::num(d.hi) + "]");
  }
  const double scaled = (x - d.lo) / (d.hi - d.lo) * static_cast<double>(d.levels);
  const auto idx = static_cast<std::size_t>(std::floor(scaled));
  return std::min(idx, d.levels - 1);
}

/// Membership degree affine in conductance: 1/r_off -> 0, 1/r_on -> 1.
inline double conductance_mu(const DeviceParams& p, double m) {
  const double g_min = 1.0 / p.r_off;
  const double g_max = 1.0 / p.r_on;
  return (1.0 / m - g_min) / (g_max - g_min);
}

struct MembershipReading {
  std::size_t row = 0;
  double v_out = 0.0;
  double mu_raw = 0.0;
  double mu_rescaled = 0.0;
};

/// rows x cols grid of memristors sharing one parameter set.
class Crossbar {
 public:
  Crossbar(std::size_t rows, std::size_t cols, DeviceParams params = {})
      : rows_(rows), cols_(cols), params_(params) {
    if (rows == 0 || cols == 0) throw DomainError("crossbar dimensions must be positive");
    validate(params_);
    cells_.assign(rows * cols, fresh_state(params_));
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const DeviceParams& params() const noexcept { return params_; }

  const DeviceState& cell(std::size_t row, std::size_t col) const { return cells_[index(row, col)]; }
  double memristance(std::size_t row, std::size_t col) const {
    return memfuzz::memristance(params_, cell(row, col).x);
  }

  /// Drives only the addressed cell with the pulse train; no half-select
  /// disturbance reaches the other cells. Pulses are applied one period at a
  /// time, which integrates exactly the same steps as the full train.
  void program_cell(std::size_t row, std::size_t col, const PulseTrainSpec& spec, double dt) {
    const std::size_t at = index(row, col);
    if (spec.count < 0) throw DomainError("pulse count must be non-negative");
    const Waveform one = pulse_train(with_count(spec.pulse, 1), dt);
    DeviceState s = cells_[at];
    for (int n = 0; n < spec.count; ++n) s = drive(params_, s, one);
    cells_[at] = s;
  }

  /// Ideal reset to x = 0.
  void reset_cell(std::size_t row, std::size_t col) { cells_[index(row, col)] = fresh_state(params_); }

  /// Virtual-ground summer: v_out = -r_f * (sum_j v_read / M_j + v_c / r_c).
  double read_column(std::size_t col, std::span<const std::size_t> active_rows, const ReadoutConfig& cfg) const {
    validate(cfg, params_);
    if (active_rows.empty()) throw DomainError("read_column needs at least one active row");
    std::vector<std::size_t> seen(active_rows.begin(), active_rows.end());
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw DomainError("duplicate active row");
    }
    double current = 0.0;
    for (const std::size_t row : active_rows) current += cfg.v_read / memristance(row, col);
    if (cfg.shunt) current += cfg.shunt->v_c / cfg.shunt->r_c;
    return -cfg.r_f * current;
  }

  /// One-hot read of the bin containing x.
  MembershipReading fuzzify(std::size_t col, const InputDomain& domain, double x, const ReadoutConfig& cfg) const {
    check_domain(domain);
    return read_level(col, discretize(domain, x), cfg);
  }

  MembershipReading read_level(std::size_t col, std::size_t row, const ReadoutConfig& cfg) const {
    const std::size_t active[] = {row};
    MembershipReading r;
    r.row = row;
    r.v_out = read_column(col, active, cfg);
    r.mu_raw = std::abs(r.v_out) / (cfg.v_read * params_.r_off / params_.r_on);
    r.mu_rescaled = conductance_mu(params_, memristance(row, col));
    return r;
  }

  void check_domain(const InputDomain& domain) const {
    validate(domain);
    if (domain.levels != rows_) {
      throw DomainError("input domain has " + std::to_string(domain.levels) + " levels but crossbar has " +
                        std::to_string(rows_) + " rows");
    }
  }

 private:
  std::size_t index(std::size_t row, std::size_t col) const {
    if (row >= rows_ || col >= cols_) {
      throw DomainError("cell (" + std::to_string(row) + ", " + std::to_string(col) + ") outside " +
                        std::to_string(rows_) + "x" + std::to_string(cols_) + " crossbar");
    }
    return row * cols_ + col;
  }

  std::size_t rows_;
  std::size_t cols_;
  DeviceParams params_;
  std::vector<DeviceState> cells_;
};

struct SweepRow {
  std::size_t level = 0;
  double x_center = 0.0;
  MembershipReading reading;
};

/// Reads every level of one column at its bin center.
inline std::vector<SweepRow> membership_sweep(const Crossbar& xbar, std::size_t col, const InputDomain& domain,
                                              const ReadoutConfig& cfg) {
  xbar.check_domain(domain);
  std::vector<SweepRow> rows;
  rows.reserve(domain.levels);
  for (std::size_t level = 0; level < domain.levels; ++level) {
    const double xc = domain.center(level);
    rows.push_back({level, xc, xbar.fuzzify(col, domain, xc, cfg)});
  }
  return rows;
}

inline std::string membership_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "level,x_center,v_out_V,mu_raw,mu_rescaled\n";
  for (const auto& r : rows) {
    csv::row(out, r.level, r.x_center, r.reading.v_out, r.reading.mu_raw, r.reading.mu_rescaled);
  }
  return out;
}

inline std::string crossbar_csv(const Crossbar& xbar) {
  std::string out = "row,col,x,m_ohm\n";
  for (std::size_t r = 0; r < xbar.rows(); ++r) {
    for (std::size_t c = 0; c < xbar.cols(); ++c) csv::row(out, r, c, xbar.cell(r, c).x, xbar.memristance(r, c));
  }
  return out;
}

}  // namespace memfuzz
