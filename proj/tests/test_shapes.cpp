#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "memfuzz/shapes.hpp"

using namespace memfuzz;
using Catch::Approx;

namespace {

// Reference solver: one independent simulation per candidate count.
int brute_force_schedule(const DeviceParams& p, const PulseTemplate& t, double target_m, int n_max, double dt) {
  int best = 0;
  double best_err = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const auto trace = simulate(p, fresh_state(p), pulse_train(with_count(t, n), dt));
    const double err = std::abs(trace.back().m - target_m);
    if (n == 0 || err < best_err) {
      best = n;
      best_err = err;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("shape evaluation", "[shapes]") {
  CHECK(evaluate(Triangular{0, 0.5, 1}, 0.25) == 0.5);
  CHECK(evaluate(Triangular{0, 0.5, 1}, 0.5) == 1.0);
  CHECK(evaluate(Triangular{0, 0.5, 1}, 1.5) == 0.0);
  CHECK(evaluate(Triangular{0, 0, 1}, 0.0) == 1.0);
  CHECK(evaluate(Trapezoidal{0, 0.2, 0.4, 1.0}, 0.3) == 1.0);
  CHECK(evaluate(Trapezoidal{0, 0.2, 0.4, 1.0}, 0.7) == Approx(0.5));
  CHECK(evaluate(Gaussian{0.3, 0.1}, 0.4) == Approx(std::exp(-0.5)));

  CHECK_THROWS_AS(validate(ShapeSpec{Triangular{0.5, 0.2, 1}}), DomainError);
  CHECK_THROWS_AS(validate(ShapeSpec{Triangular{0.5, 0.5, 0.5}}), DomainError);
  CHECK_THROWS_AS(validate(ShapeSpec{Trapezoidal{0, 0.5, 0.4, 1}}), DomainError);
  CHECK_THROWS_AS(validate(ShapeSpec{Gaussian{0, 0}}), DomainError);
}

TEST_CASE("sample_shape at bin centers", "[shapes]") {
  const InputDomain d{0.0, 1.0, 8};
  const auto tri = sample_shape(Triangular{0, 0.5, 1}, d);
  REQUIRE(tri.size() == 8);
  CHECK(tri[3] == Approx(0.875));
  const auto g = sample_shape(Gaussian{d.center(5), 0.1}, d);
  CHECK(g[5] == 1.0);
  for (const double v : sample_shape(Trapezoidal{0, 0, 1, 1}, d)) CHECK(v == 1.0);
}

TEST_CASE("property: shape samples stay in [0, 1] and symmetric triangles are palindromes", "[shapes][property]") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double lo = -5.0 + 10.0 * u(rng);
    const double hi = lo + 0.1 + 10.0 * u(rng);
    const std::size_t levels = 2 * (1 + rng() % 32);
    const InputDomain d{lo, hi, levels};
    const double mid = 0.5 * (lo + hi);
    const double half = (hi - lo) * (0.05 + u(rng));
    const auto tri = sample_shape(Triangular{mid - half, mid, mid + half}, d);
    for (std::size_t i = 0; i < levels; ++i) {
      REQUIRE(tri[i] >= 0.0);
      REQUIRE(tri[i] <= 1.0);
      REQUIRE(tri[i] == Approx(tri[levels - 1 - i]).margin(1e-9));
    }
    const auto g = sample_shape(Gaussian{lo + (hi - lo) * u(rng), 0.01 + u(rng)}, d);
    for (const double v : g) REQUIRE((v >= 0.0 && v <= 1.0));
  }
}

TEST_CASE("targets_to_memristance", "[shapes]") {
  const DeviceParams p;
  const auto m = targets_to_memristance(std::vector<double>{1.0, 0.0, 0.5}, p);
  CHECK(m[0] == Approx(3000.0).epsilon(1e-12));
  CHECK(m[1] == Approx(62000.0).epsilon(1e-12));
  CHECK(m[2] == Approx(1.0 / ((1.0 / 62000.0 + 1.0 / 3000.0) / 2.0)).epsilon(1e-12));
  CHECK(m[2] == Approx(5723.1).margin(0.05));
  CHECK_THROWS_AS(targets_to_memristance(std::vector<double>{1.1}, p), DomainError);
}

TEST_CASE("property: conductance normalization round-trips", "[shapes][property]") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    DeviceParams p;
    p.r_on = 100.0 + 1e4 * u(rng);
    p.r_off = p.r_on * (1.5 + 100.0 * u(rng));
    const double mu = u(rng);
    const double m = targets_to_memristance(std::vector<double>{mu}, p)[0];
    REQUIRE(m >= p.r_on);
    REQUIRE(m <= p.r_off);
    REQUIRE(conductance_mu(p, m) == Approx(mu).epsilon(1e-12).margin(1e-15));
  }
}

TEST_CASE("pulse_response matches independent full-train simulations", "[shapes]") {
  const DeviceParams p;
  const PulseTemplate t;
  const auto response = pulse_response(p, t, 20, t.default_dt());
  for (int n = 0; n <= 20; ++n) {
    const auto s = drive(p, fresh_state(p), pulse_train(with_count(t, n), t.default_dt()));
    CHECK(response[n] == memristance(p, s.x));
  }
  CHECK_THROWS_AS(pulse_response(p, t, -1, t.default_dt()), DomainError);
}

TEST_CASE("solve_pulse_schedule edge targets", "[shapes]") {
  const DeviceParams p;
  const PulseTemplate t;
  const double dt = t.default_dt();
  CHECK(solve_pulse_schedule(p, t, p.r_off, 64, dt) == 0);

  // Smallest count that reaches the clamp, found by forward simulation.
  int first_clamped = -1;
  for (int n = 0; n <= 64 && first_clamped < 0; ++n) {
    if (drive(p, fresh_state(p), pulse_train(with_count(t, n), dt)).x == 1.0) first_clamped = n;
  }
  REQUIRE(first_clamped == 17);
  CHECK(solve_pulse_schedule(p, t, p.r_on, 64, dt) == first_clamped);
  CHECK(solve_pulse_schedule(p, t, p.r_on, 5, dt) == 5);

  CHECK_THROWS_AS(solve_pulse_schedule(p, t, 1000.0, 64, dt), DomainError);
  CHECK_THROWS_AS(solve_pulse_schedule(p, t, 5000.0, -1, dt), DomainError);
}

TEST_CASE("solve_pulse_schedule agrees with brute force on random targets", "[shapes][oracle]") {
  const DeviceParams p;
  const PulseTemplate t;
  const double dt = t.default_dt();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> target(p.r_on, p.r_off);
  for (int trial = 0; trial < 20; ++trial) {
    const double m = target(rng);
    CAPTURE(m);
    CHECK(solve_pulse_schedule(p, t, m, 24, dt) == brute_force_schedule(p, t, m, 24, dt));
  }
}

TEST_CASE("property: solver optimality over the whole sweep", "[shapes][property]") {
  const DeviceParams p;
  const PulseTemplate t;
  const auto response = pulse_response(p, t, 64, t.default_dt());
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> target(p.r_on, p.r_off);
  for (int trial = 0; trial < 500; ++trial) {
    const double m = trial == 0 ? response[5] : target(rng);
    const int n = nearest_count(response, m);
    for (std::size_t k = 0; k < response.size(); ++k) {
      REQUIRE(std::abs(response[k] - m) >= std::abs(response[n] - m));
      if (static_cast<int>(k) < n) REQUIRE(std::abs(response[k] - m) > std::abs(response[n] - m));
    }
  }
}

TEST_CASE("calibrate_k_drift", "[shapes]") {
  DeviceParams p;
  const PulseTemplate t;
  const double dt = t.default_dt();
  const double k16 = calibrate_k_drift(p, t, 16, dt);

  p.k_drift = k16;
  const auto after15 = drive(p, fresh_state(p), pulse_train(with_count(t, 15), dt));
  const auto after16 = drive(p, fresh_state(p), pulse_train(with_count(t, 16), dt));
  CHECK(after15.x < kSaturatedState);
  CHECK(after16.x >= kSaturatedState);

  const double k2 = calibrate_k_drift(p, t, 2, dt);
  CHECK(k2 / k16 == Approx(8.0).epsilon(0.01));

  double prev = k2;
  for (int n : {3, 5, 8, 12, 20}) {
    const double k = calibrate_k_drift(p, t, n, dt);
    CHECK(k < prev);
    prev = k;
  }
}

TEST_CASE("calibrate_k_drift errors", "[shapes]") {
  const DeviceParams p;
  PulseTemplate t;
  CHECK_THROWS_AS(calibrate_k_drift(p, t, 1, t.default_dt()), DomainError);
  CHECK_THROWS_AS(calibrate_k_drift(p, t, 16, t.default_dt(), {1.0, 2.0}), CalibrationError);
  CHECK_THROWS_AS(calibrate_k_drift(p, t, 16, t.default_dt(), {1e6, 2e6}), CalibrationError);
  t.amplitude = 0.8;  // sub-threshold: no k can saturate
  CHECK_THROWS_AS(calibrate_k_drift(p, t, 16, t.default_dt()), CalibrationError);
}

TEST_CASE("synthesize: zero shape leaves the column fresh", "[shapes]") {
  Crossbar x(8, 1);
  const auto report = synthesize(x, 0, Trapezoidal{5, 6, 7, 8}, {0, 1, 8}, PulseTemplate{}, 64,
                                 default_readout(x.params()), PulseTemplate{}.default_dt());
  for (const auto& l : report.levels) {
    CHECK(l.target_mu == 0.0);
    CHECK(l.pulses == 0);
    CHECK(x.memristance(l.level, 0) == 62000.0);
  }
}

TEST_CASE("synthesize: triangle is unimodal and within the pulse quantum", "[shapes]") {
  Crossbar x(8, 1);
  const PulseTemplate t;
  const auto report = synthesize(x, 0, Triangular{0, 0.5, 1}, {0, 1, 8}, t, 64, default_readout(x.params()),
                                 t.default_dt());
  REQUIRE(report.levels.size() == 8);
  std::vector<double> mu;
  for (const auto& l : report.levels) {
    mu.push_back(l.achieved_mu);
    CHECK(l.abs_error == Approx(std::abs(l.achieved_mu - l.target_mu)));
    CHECK(l.abs_error <= report.mu_quantum);
    CHECK(l.achieved_m == x.memristance(l.level, 0));
  }
  const auto peak = std::max_element(mu.begin(), mu.end()) - mu.begin();
  for (long i = 1; i <= peak; ++i) CHECK(mu[i] >= mu[i - 1]);
  for (long i = peak + 1; i < 8; ++i) CHECK(mu[i] <= mu[i - 1]);
  CHECK(mu.front() < mu[peak]);
  CHECK(mu.back() < mu[peak]);
  // The quantum is the largest single-pulse membership jump in the sweep.
  const auto response = pulse_response(x.params(), t, 64, t.default_dt());
  double q = 0.0;
  for (std::size_t n = 1; n < response.size(); ++n) {
    q = std::max(q, conductance_mu(x.params(), response[n]) - conductance_mu(x.params(), response[n - 1]));
  }
  CHECK(report.mu_quantum == q);
}

TEST_CASE("synthesize: short pulses reach half-quantum accuracy", "[shapes]") {
  PulseTemplate fine;
  fine.width = kPulseWidth / 200.0;
  fine.period = kPulsePeriod / 200.0;
  Crossbar x(8, 1);
  const auto report = synthesize(x, 0, Triangular{0, 0.5, 1}, {0, 1, 8}, fine, 4096, default_readout(x.params()),
                                 fine.default_dt());
  CHECK(report.max_abs_error() <= report.mu_quantum / 2);
  CHECK(report.max_abs_error() < 0.05);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(report.levels[i].pulses == Approx(report.levels[7 - i].pulses).margin(1));
    if (i > 0) CHECK(report.levels[i].achieved_mu > report.levels[i - 1].achieved_mu);
  }
}

TEST_CASE("synthesize: errors", "[shapes]") {
  Crossbar x(8, 2);
  const PulseTemplate t;
  const auto cfg = default_readout(x.params());
  CHECK_THROWS_AS(synthesize(x, 0, Triangular{0, 0.5, 1}, {0, 1, 4}, t, 64, cfg, t.default_dt()), DomainError);
  CHECK_THROWS_AS(synthesize(x, 2, Triangular{0, 0.5, 1}, {0, 1, 8}, t, 64, cfg, t.default_dt()), DomainError);
  CHECK_THROWS_AS(synthesize(x, 0, Triangular{0, 0.5, 1}, {0, 1, 8}, t, -1, cfg, t.default_dt()), DomainError);
}

TEST_CASE("synthesis report CSV", "[shapes]") {
  SynthesisReport r;
  r.levels.push_back({0, 0.5, 5723.5, 3, 6000.0, 0.45, 0.05});
  CHECK(synthesis_csv(r) ==
        "level,target_mu,target_m_ohm,pulses,achieved_m_ohm,achieved_mu,abs_error\n0,0.5,5723.5,3,6000,0.45,0.05\n");
}
