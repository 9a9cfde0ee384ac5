#pragma once

// Discrete baseband echo synthesis for a scene of integer-delay scatterers.

#include <cstddef>
#include <cstdint>
#include <span>

#include "cpofdm/geometry.hpp"
#include "cpofdm/numerics.hpp"
#include "cpofdm/waveform.hpp"

namespace cpofdm {

struct Scene {
  ComplexVector h;   // h(l), one coefficient per range cell of the tracking zone
  double dod = 0.0;  // radians
  double doa = 0.0;  // radians

  std::size_t n_cells() const { return h.size(); }
  /// Indices l with h(l) != 0.
  std::vector<std::size_t> support() const;
};

/// Q rows of per-antenna samples, row-major.
struct RxCapture {
  std::size_t n_rx = 0;
  std::size_t n_samples = 0;
  ComplexVector samples;
  double noise_power = 0.0;
  std::uint64_t seed = 0;
  double doppler_residue_hz = 0.0;

  std::span<const cplx> row(std::size_t q) const {
    return {samples.data() + q * n_samples, n_samples};
  }
  std::span<cplx> row(std::size_t q) { return {samples.data() + q * n_samples, n_samples}; }
};

/// b(n) = sum_m a_t[m] u_m(n) over the full transmitted length (CP included).
ComplexVector equivalent_transmit_signal(const TxWaveformSet& tx, const ArrayGeometry& geom,
                                         const RadarParams& params, double dod);

/// Linear propagation of `tx` through the scene: each antenna row has
/// tx.length() + L - 1 samples. No constraint between L and the CP length;
/// used directly by the no-CP baseline.
RxCapture simulate_echo(const TxWaveformSet& tx, const Scene& scene, const ArrayGeometry& geom,
                        const RadarParams& params, double noise_power, std::uint64_t seed);

/// simulate_echo for a CP waveform matched to the scene (L = cp_len + 1),
/// giving N + 2L - 2 samples per antenna. noise_power = 0 is noiseless.
/// Throws std::invalid_argument on any dimension mismatch.
RxCapture simulate_rx(const TxWaveformSet& tx, const Scene& scene, const ArrayGeometry& geom,
                      const RadarParams& params, double noise_power, std::uint64_t seed);

/// 2 dv f_c / c.
double doppler_shift_hz(double velocity_error, const RadarParams& params);

/// Multiplies sample n of every antenna by exp(j 2 pi f_d n T_s).
RxCapture apply_doppler_residue(RxCapture capture, double velocity_error,
                                const RadarParams& params);

}  // namespace cpofdm
