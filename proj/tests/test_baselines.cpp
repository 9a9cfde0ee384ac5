#include <algorithm>
#include <cmath>
#include <random>

#include "cpofdm/analysis.hpp"
#include "cpofdm/baselines.hpp"
#include "doctest.h"

using namespace cpofdm;

namespace {

std::size_t argmax(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

ComplexVector random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexVector x(n);
  for (auto& v : x) v = {g(rng), g(rng)};
  return x;
}

}  // namespace

TEST_CASE("chirp has unit modulus") {
  const auto lfm = lfm_waveform(512, 50e6, 512 / 50e6);
  CHECK(lfm.samples.size() == 512);
  CHECK(lfm.bandwidth_hz * lfm.duration_s == doctest::Approx(512.0));
  for (const auto& v : lfm.samples) CHECK(std::abs(std::abs(v) - 1.0) < 1e-14);
}

TEST_CASE("zero sweep gives a constant phase") {
  const auto lfm = lfm_waveform(64, 0.0, 1e-6);
  for (const auto& v : lfm.samples) CHECK(std::abs(v - lfm.samples[0]) < 1e-15);
}

TEST_CASE("chirp instantaneous frequency sweeps -B/2 to B/2") {
  const double b = 50e6, t = 512 / 50e6;
  const auto lfm = lfm_waveform(512, b, t);
  const double ts = t / 512.0;
  const auto freq = [&](std::size_t n) {
    return std::arg(lfm.samples[n + 1] * std::conj(lfm.samples[n])) / (2.0 * kPi * ts);
  };
  // phase step stays inside (-pi, pi] for the 1/B sampling used here
  CHECK(freq(0) == doctest::Approx(-b / 2.0).epsilon(0.01));
  CHECK(freq(510) == doctest::Approx(b / 2.0).epsilon(0.01));
  for (std::size_t n = 1; n < 511; ++n) CHECK(freq(n) > freq(n - 1));
}

TEST_CASE("chirp preconditions") {
  CHECK_THROWS_AS(lfm_waveform(1, 1e6, 1e-6), std::invalid_argument);
  CHECK_THROWS_AS(lfm_waveform(8, 1e6, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lfm_waveform(8, -1.0, 1e-6), std::invalid_argument);
}

TEST_CASE("matched filter of a signal with itself is its energy") {
  const auto x = random_vector(100, 1);
  double energy = 0.0;
  for (const auto& v : x) energy += std::norm(v);
  const auto out = matched_filter_profile(x, x);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == doctest::Approx(energy).epsilon(1e-12));
}

TEST_CASE("matched filter peaks at the delay") {
  const auto ref = lfm_waveform(128, 10e6, 128 / 10e6).samples;
  for (std::size_t d : {0u, 5u, 37u}) {
    ComplexVector rx(128 + 40);
    for (std::size_t n = 0; n < 128; ++n) rx[n + d] = ref[n];
    CHECK(argmax(matched_filter_profile(rx, ref)) == d);
  }
}

TEST_CASE("matched filter ignores a global phase") {
  const auto ref = random_vector(32, 2);
  auto rx = random_vector(80, 3);
  const auto a = matched_filter_profile(rx, ref);
  for (auto& v : rx) v *= std::polar(1.0, 1.234);
  const auto b = matched_filter_profile(rx, ref);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
}

TEST_CASE("matched filter rejects a reference longer than the input") {
  const auto x = random_vector(4, 1);
  const auto y = random_vector(5, 1);
  CHECK_THROWS_AS(matched_filter_profile(x, y), std::invalid_argument);
  CHECK_THROWS_AS(matched_filter_profile(x, ComplexVector{}), std::invalid_argument);
}

TEST_CASE("oversampled chirp autocorrelation first sidelobe is near -13.2 dB") {
  // time-bandwidth product 50 over 512 samples: about 10 samples per resolution cell
  const auto s = lfm_waveform(512, 50e6, 1e-6).samples;
  // full two-sided autocorrelation by brute force
  std::vector<double> r(2 * 512 - 1);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto lag = static_cast<long>(i) - 511;
    cplx acc{};
    for (long n = 0; n < 512; ++n) {
      const long m = n + lag;
      if (m >= 0 && m < 512) acc += s[static_cast<std::size_t>(m)] * std::conj(s[static_cast<std::size_t>(n)]);
    }
    r[i] = std::abs(acc);
  }
  const std::size_t peak = 511;
  std::size_t k = peak + 1;
  while (k + 1 < r.size() && r[k + 1] < r[k]) ++k;  // first null
  while (k + 1 < r.size() && r[k + 1] > r[k]) ++k;  // first sidelobe
  const double level = magnitude_db(r[k] / r[peak]);
  CHECK(level == doctest::Approx(-13.2).epsilon(0.03));
}

TEST_CASE("critically sampled chirp matches its closed-form autocorrelation") {
  // with B T = N the phase is pi (n - N/2)^2 / N, so |r(k)| = |sin(pi k (N-k) / N) / sin(pi k / N)|
  const std::size_t n = 512;
  const auto lfm = lfm_waveform(n, 50e6, static_cast<double>(n) / 50e6);
  Scene scene{ComplexVector(61), 0.0, 0.0};
  scene.h[40] = 1.0;
  const auto profile = lfm_profile(scene, lfm, 0.0, 1);
  REQUIRE(profile.size() == 61);
  CHECK(profile[40] == doctest::Approx(512.0).epsilon(1e-12));
  const double nn = static_cast<double>(n);
  for (std::size_t lag = 0; lag < 61; ++lag) {
    if (lag == 40) continue;
    const double k = std::abs(static_cast<double>(lag) - 40.0);
    const double expected = std::abs(std::sin(kPi * k * (nn - k) / nn) / std::sin(kPi * k / nn));
    CHECK(profile[lag] == doctest::Approx(expected).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("peak normalization") {
  const std::vector<double> v{0.5, 2.0, 0.0, 1.0};
  const auto db = normalize_peak_db(v);
  CHECK(db[1] == 0.0);
  CHECK(db[0] == doctest::Approx(20.0 * std::log10(0.25)));
  CHECK(db[2] == -300.0);
  CHECK_THROWS_AS(normalize_peak_db(std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("conventional OFDM baseline peaks at the target with visible sidelobes") {
  const RadarParams params{3e9, 50e6, 512, 4, 4};
  const auto geom = ArrayGeometry::half_wavelength_ula(params);
  const auto weights = design_subcarrier_weights(WaveformConfig::with_default_roots(512, 4, 61));
  Scene scene{ComplexVector(61), deg_to_rad(30.0), deg_to_rad(20.0)};
  scene.h[40] = 1.0;
  const auto profile = conventional_ofdm_profile(scene, weights, geom, params, 0.0, 1);
  REQUIRE(profile.size() == 61);
  CHECK(argmax(profile) == 40);
  const std::vector<std::size_t> main{40};
  CHECK(pslr_db(profile, main) > -60.0);
}

TEST_CASE("LFM baseline peaks at the target with visible sidelobes") {
  Scene scene{ComplexVector(61), 0.0, 0.0};
  scene.h[40] = 1.0;
  const auto lfm = lfm_waveform(512, 50e6, 512 / 50e6);
  const auto profile = lfm_profile(scene, lfm, 0.0, 1);
  CHECK(argmax(profile) == 40);
  const std::vector<std::size_t> main{40};
  const double pslr = pslr_db(profile, main);
  CHECK(pslr > -60.0);
  CHECK(pslr < -20.0);
}

TEST_CASE("baselines are deterministic under noise") {
  Scene scene{ComplexVector(61), 0.0, 0.0};
  scene.h[10] = 1.0;
  const auto lfm = lfm_waveform(512, 50e6, 512 / 50e6);
  CHECK(lfm_profile(scene, lfm, 0.1, 9) == lfm_profile(scene, lfm, 0.1, 9));
  CHECK(lfm_profile(scene, lfm, 0.1, 9) != lfm_profile(scene, lfm, 0.1, 10));
}
