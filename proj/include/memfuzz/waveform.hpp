#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "memfuzz/csv.hpp"
#include "memfuzz/error.hpp"

namespace memfuzz {

struct Sample {
  double t = 0.0;  // s
  double v = 0.0;  // V
};

// Pre-sampled voltage signal on a uniform grid starting at t = 0.
struct Waveform {
  std::vector<Sample> samples;
  double dt = 0.0;  // nominal spacing, s

  double duration() const noexcept { return samples.empty() ? 0.0 : samples.back().t; }
  std::size_t size() const noexcept { return samples.size(); }
};

// Throws FormatError unless the waveform is non-empty, starts at 0, has
// strictly increasing timestamps and spacing within 1e-9 of dt (plus the
// rounding of the timestamps themselves).
inline void validate(const Waveform& w) {
  if (w.samples.empty()) throw FormatError("waveform has no samples");
  if (!(w.dt > 0.0) || !std::isfinite(w.dt)) throw FormatError("waveform dt must be positive");
  if (w.samples.front().t != 0.0) throw FormatError("waveform must start at t = 0");
  for (std::size_t k = 1; k < w.samples.size(); ++k) {
    const double gap = w.samples[k].t - w.samples[k - 1].t;
    if (!(gap > 0.0)) {
      throw FormatError("waveform timestamps not strictly increasing at sample " + std::to_string(k));
    }
    const double slack = 1e-9 * w.dt + 8.0 * std::numeric_limits<double>::epsilon() * w.samples[k].t;
    if (std::abs(gap - w.dt) > slack) {
      throw FormatError("waveform spacing not uniform at sample " + std::to_string(k));
    }
  }
}

// Time-shifts `tail` to start where `head` ends and joins them; the shared
// boundary sample is taken from `tail`. Both must share the same dt.
inline Waveform concatenate(const Waveform& head, const Waveform& tail) {
  if (head.dt != tail.dt) throw DomainError("cannot concatenate waveforms with different dt");
  if (head.samples.empty()) return tail;
  Waveform out{.samples = {}, .dt = head.dt};
  out.samples.reserve(head.size() + tail.size() - 1);
  out.samples.assign(head.samples.begin(), head.samples.end() - 1);
  const std::size_t offset = head.size() - 1;
  for (std::size_t k = 0; k < tail.size(); ++k) {
    out.samples.push_back({static_cast<double>(offset + k) * head.dt, tail.samples[k].v});
  }
  return out;
}

inline std::string waveform_csv(const Waveform& w) {
  std::string out = "t_s,v_V\n";
  for (const auto& s : w.samples) csv::row(out, s.t, s.v);
  return out;
}

}  // namespace memfuzz
