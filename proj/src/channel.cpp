#include "cpofdm/channel.hpp"

#include <stdexcept>
#include <string>

namespace cpofdm {

std::vector<std::size_t> Scene::support() const {
  std::vector<std::size_t> cells;
  for (std::size_t l = 0; l < h.size(); ++l) {
    if (h[l] != cplx{}) cells.push_back(l);
  }
  return cells;
}

namespace {

void check_dimensions(const TxWaveformSet& tx, const ArrayGeometry& geom,
                      const RadarParams& params) {
  if (tx.n_tx() != params.n_tx || geom.tx_offsets.size() != params.n_tx) {
    throw std::invalid_argument("transmit antenna count mismatch between waveform, array and params");
  }
  if (geom.rx_offsets.size() != params.n_rx) {
    throw std::invalid_argument("receive antenna count mismatch between array and params");
  }
  if (tx.body_len() != params.n_subcarriers) {
    throw std::invalid_argument("waveform body length differs from N");
  }
}

}  // namespace

ComplexVector equivalent_transmit_signal(const TxWaveformSet& tx, const ArrayGeometry& geom,
                                         const RadarParams& params, double dod) {
  if (geom.tx_offsets.size() != tx.n_tx()) {
    throw std::invalid_argument("equivalent_transmit_signal: antenna count mismatch");
  }
  const auto a_t = steering_vector(geom.tx_offsets, dod, params.wavelength());
  ComplexVector b(tx.length());
  for (std::size_t m = 0; m < tx.n_tx(); ++m) {
    const auto u = tx.row(m);
    for (std::size_t n = 0; n < b.size(); ++n) b[n] += a_t[m] * u[n];
  }
  return b;
}

RxCapture simulate_echo(const TxWaveformSet& tx, const Scene& scene, const ArrayGeometry& geom,
                        const RadarParams& params, double noise_power, std::uint64_t seed) {
  check_dimensions(tx, geom, params);
  require_finite(scene.h, "scene coefficients");
  if (!(noise_power >= 0.0)) throw std::invalid_argument("noise power must be >= 0");

  const auto b = equivalent_transmit_signal(tx, geom, params, scene.dod);
  const auto a_r = steering_vector(geom.rx_offsets, scene.doa, params.wavelength());

  // y(n) = sum_l h(l) b(n - l); b is zero outside its transmitted length
  const std::size_t n_cells = scene.n_cells();
  ComplexVector y(b.size() + n_cells - 1);
  for (std::size_t l : scene.support()) {
    for (std::size_t n = 0; n < b.size(); ++n) y[n + l] += scene.h[l] * b[n];
  }

  RxCapture capture;
  capture.n_rx = params.n_rx;
  capture.n_samples = y.size();
  capture.samples.resize(capture.n_rx * capture.n_samples);
  capture.noise_power = noise_power;
  capture.seed = seed;
  for (std::size_t q = 0; q < capture.n_rx; ++q) {
    auto row = capture.row(q);
    for (std::size_t n = 0; n < y.size(); ++n) row[n] = a_r[q] * y[n];
  }
  if (noise_power > 0.0) {
    const auto noise = complex_gaussian(capture.samples.size(), noise_power, seed);
    for (std::size_t i = 0; i < noise.size(); ++i) capture.samples[i] += noise[i];
  }
  return capture;
}

RxCapture simulate_rx(const TxWaveformSet& tx, const Scene& scene, const ArrayGeometry& geom,
                      const RadarParams& params, double noise_power, std::uint64_t seed) {
  if (scene.n_cells() != tx.cp_len() + 1) {
    throw std::invalid_argument("scene has " + std::to_string(scene.n_cells()) +
                                " cells but the waveform CP supports " +
                                std::to_string(tx.cp_len() + 1));
  }
  return simulate_echo(tx, scene, geom, params, noise_power, seed);
}

double doppler_shift_hz(double velocity_error, const RadarParams& params) {
  return 2.0 * velocity_error * params.carrier_hz / kPropagationSpeed;
}

RxCapture apply_doppler_residue(RxCapture capture, double velocity_error,
                                const RadarParams& params) {
  const double shift = doppler_shift_hz(velocity_error, params);
  if (shift == 0.0) return capture;
  const double step = 2.0 * kPi * shift * params.sample_period();
  for (std::size_t q = 0; q < capture.n_rx; ++q) {
    auto row = capture.row(q);
    for (std::size_t n = 0; n < row.size(); ++n) {
      row[n] *= std::polar(1.0, step * static_cast<double>(n));
    }
  }
  capture.doppler_residue_hz += shift;
  return capture;
}

}  // namespace cpofdm
