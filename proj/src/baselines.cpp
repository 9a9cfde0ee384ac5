#include "cpofdm/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cpofdm/receiver.hpp"

namespace cpofdm {

LfmWaveform lfm_waveform(std::size_t n_samples, double bandwidth_hz, double duration_s) {
  if (n_samples < 2) throw std::invalid_argument("lfm_waveform: N must be >= 2");
  if (!(duration_s > 0.0) || !(bandwidth_hz >= 0.0)) {
    throw std::invalid_argument("lfm_waveform: need T > 0 and B >= 0");
  }
  const double rate = bandwidth_hz / duration_s;
  const double step = duration_s / static_cast<double>(n_samples);
  LfmWaveform lfm{ComplexVector(n_samples), bandwidth_hz, duration_s};
  for (std::size_t n = 0; n < n_samples; ++n) {
    const double t = static_cast<double>(n) * step - duration_s / 2.0;
    lfm.samples[n] = std::polar(1.0, kPi * rate * t * t);
  }
  return lfm;
}

std::vector<double> matched_filter_profile(std::span<const cplx> rx, std::span<const cplx> ref) {
  if (ref.empty() || rx.size() < ref.size()) {
    throw std::invalid_argument("matched_filter_profile: need len(rx) >= len(ref) > 0");
  }
  std::vector<double> out(rx.size() - ref.size() + 1);
  for (std::size_t lag = 0; lag < out.size(); ++lag) {
    cplx acc{};
    for (std::size_t n = 0; n < ref.size(); ++n) acc += rx[n + lag] * std::conj(ref[n]);
    out[lag] = std::abs(acc);
  }
  return out;
}

std::vector<double> normalize_peak_db(std::span<const double> magnitudes) {
  const double peak = magnitudes.empty() ? 0.0 : *std::max_element(magnitudes.begin(), magnitudes.end());
  if (!(peak > 0.0)) throw std::invalid_argument("normalize_peak_db: all-zero profile");
  std::vector<double> out(magnitudes.size());
  std::transform(magnitudes.begin(), magnitudes.end(), out.begin(), [peak](double v) {
    return v > 0.0 ? std::max(-300.0, magnitude_db(v / peak)) : -300.0;
  });
  return out;
}

std::vector<double> conventional_ofdm_profile(const Scene& scene, const SubcarrierWeights& weights,
                                              const ArrayGeometry& geom, const RadarParams& params,
                                              double noise_power, std::uint64_t seed,
                                              double velocity_error) {
  const auto tx = synthesize_tx(weights, 1);
  auto capture = simulate_echo(tx, scene, geom, params, noise_power, seed);
  capture = apply_doppler_residue(std::move(capture), velocity_error, params);
  const auto z = receive_dbf(capture, geom, params, scene.doa);
  const auto reference = equivalent_transmit_signal(tx, geom, params, scene.dod);
  return matched_filter_profile(z, reference);
}

std::vector<double> lfm_profile(const Scene& scene, const LfmWaveform& lfm, double noise_power,
                                std::uint64_t seed) {
  require_finite(scene.h, "scene coefficients");
  const auto& s = lfm.samples;
  ComplexVector echo(s.size() + scene.n_cells() - 1);
  for (std::size_t l : scene.support()) {
    for (std::size_t n = 0; n < s.size(); ++n) echo[n + l] += scene.h[l] * s[n];
  }
  if (noise_power > 0.0) {
    const auto noise = complex_gaussian(echo.size(), noise_power, seed);
    for (std::size_t i = 0; i < echo.size(); ++i) echo[i] += noise[i];
  }
  return matched_filter_profile(echo, s);
}

}  // namespace cpofdm
