#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "memfuzz/device.hpp"
#include "memfuzz/pulsegen.hpp"

using namespace memfuzz;
using Catch::Approx;

namespace {

double min_v(const Waveform& w) {
  double m = w.samples.front().v;
  for (const auto& s : w.samples) m = std::min(m, s.v);
  return m;
}

double max_abs_v(const Waveform& w) {
  double m = 0.0;
  for (const auto& s : w.samples) m = std::max(m, std::abs(s.v));
  return m;
}

}  // namespace

TEST_CASE("pulse_train: three pulses at 100 ms", "[pulsegen]") {
  const auto w = pulse_train({{1.2, 0.05, 0.1, 0.0}, 3}, 5e-5);
  CHECK_NOTHROW(validate(w));
  CHECK(w.duration() == Approx(0.3).epsilon(1e-12));
  std::size_t high = 0;
  for (const auto& s : w.samples) high += s.v == 1.2;
  CHECK(high == 3000);  // 3 x 50 ms at 50 us
  CHECK(w.samples.front().v == 1.2);
  CHECK(w.samples.back().v == 0.0);
  CHECK(w.samples[999].v == 1.2);
  CHECK(w.samples[1000].v == 0.0);
  CHECK(w.samples[2000].v == 1.2);
}

TEST_CASE("pulse_train: zero count and reset pulses", "[pulsegen]") {
  const auto empty = pulse_train({{1.2, 0.05, 0.1, 0.25}, 0}, 1e-3);
  REQUIRE(empty.size() == 1);
  CHECK(empty.samples[0].t == 0.0);
  CHECK(empty.samples[0].v == 0.25);

  const auto reset = pulse_train({{-1.2, 0.05, 0.1, 0.0}, 1}, 1e-3);
  CHECK(min_v(reset) == -1.2);
}

TEST_CASE("pulse_train: errors", "[pulsegen]") {
  CHECK_THROWS_AS(pulse_train({{1.2, 0.05, 0.1, 0.0}, 1}, 0.01), ResolutionError);
  CHECK_NOTHROW(pulse_train({{1.2, 0.05, 0.1, 0.0}, 1}, 0.005));
  CHECK_THROWS_AS(pulse_train({{1.2, 0.1, 0.1, 0.0}, 1}, 1e-3), DomainError);
  CHECK_THROWS_AS(pulse_train({{1.2, 0.05, 0.1, 0.0}, -1}, 1e-3), DomainError);
}

TEST_CASE("read_pulse", "[pulsegen]") {
  CHECK(max_abs_v(read_pulse(0.2, 0.01, 1e-4)) == 0.2);
  CHECK(max_abs_v(read_pulse(0.0, 0.01, 1e-4)) == 0.0);
  const auto w = read_pulse(0.2, 0.01, 1e-3);
  CHECK(std::count_if(w.samples.begin(), w.samples.end(), [](const Sample& s) { return s.v == 0.2; }) == 10);
  CHECK_THROWS_AS(read_pulse(0.2, 0.01, 2e-3), ResolutionError);
}

TEST_CASE("sine_sweep", "[pulsegen]") {
  const auto w = sine_sweep(1.5, 1.0, 1, 1e-3);
  CHECK(w.duration() == Approx(1.0));
  CHECK(w.samples.front().v == 0.0);
  CHECK(max_abs_v(sine_sweep(0.0, 1.0, 3, 1e-3)) == 0.0);
  CHECK_THROWS_AS(sine_sweep(1.5, 1.0, 1, 2e-3), ResolutionError);
  CHECK_THROWS_AS(sine_sweep(1.5, 1.0, 0, 1e-3), DomainError);
}

TEST_CASE("sine_sweep integrates to zero flux", "[pulsegen][property]") {
  DeviceParams p;
  for (double amp : {0.5, 1.5, 3.0}) {
    for (int cycles : {1, 2, 5}) {
      const auto w = sine_sweep(amp, 2.0, cycles, 1e-4);
      const auto s = drive(p, fresh_state(p), w);
      CHECK(std::abs(s.phi) < 1e-9 * amp * w.duration());
    }
  }
}

TEST_CASE("generated waveforms satisfy the structural invariants", "[pulsegen][property]") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double period = 0.001 + 0.2 * u(rng);
    const double width = period * (0.05 + 0.9 * u(rng));
    const double dt = width / (10.0 + 200.0 * u(rng));
    const int count = static_cast<int>(8 * u(rng));
    const auto w = pulse_train({{2.0 * u(rng) - 1.0, width, period, 0.0}, count}, dt);
    REQUIRE_NOTHROW(validate(w));
    CHECK(w.duration() == Approx(count * period).margin(dt));
    const double freq = 1.0 + u(rng);
    REQUIRE_NOTHROW(validate(sine_sweep(u(rng), freq, 1 + trial % 3, (1e-5 + 9e-4 * u(rng)) / freq)));
  }
}

TEST_CASE("split pulse trains drive to the identical state", "[pulsegen][property]") {
  DeviceParams p;
  const PulseTemplate t;
  const double dt = t.default_dt();
  for (auto [a, b] : {std::pair{3, 4}, std::pair{1, 10}, std::pair{0, 5}, std::pair{7, 0}}) {
    const auto joined = concatenate(pulse_train(with_count(t, a), dt), pulse_train(with_count(t, b), dt));
    const auto whole = pulse_train(with_count(t, a + b), dt);
    REQUIRE(joined.size() == whole.size());
    CHECK(drive(p, fresh_state(p), joined) == drive(p, fresh_state(p), whole));
  }
}

TEST_CASE("waveform CSV", "[pulsegen]") {
  const auto text = waveform_csv(read_pulse(0.2, 0.01, 1e-3));
  CHECK(text.rfind("t_s,v_V\n0,0.2\n", 0) == 0);
}
