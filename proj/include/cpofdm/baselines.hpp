#pragma once

// Matched-filter range compression for the comparison waveforms: OFDM
// without a cyclic prefix and a linear FM chirp.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cpofdm/channel.hpp"
#include "cpofdm/geometry.hpp"
#include "cpofdm/numerics.hpp"
#include "cpofdm/waveform.hpp"

namespace cpofdm {

struct LfmWaveform {
  ComplexVector samples;
  double bandwidth_hz = 0.0;
  double duration_s = 0.0;
};

/// Symmetric up-chirp s(n) = exp(j pi (B/T) (n T_s - T/2)^2), T_s = T / N.
LfmWaveform lfm_waveform(std::size_t n_samples, double bandwidth_hz, double duration_s);

/// |sum_n rx(n + l) conj(ref(n))| for l = 0 .. len(rx) - len(ref). Raw
/// magnitudes; see normalize_peak_db for the reported form.
std::vector<double> matched_filter_profile(std::span<const cplx> rx, std::span<const cplx> ref);

/// 20 log10(v / max v), floored at -300 dB for exact zeros.
std::vector<double> normalize_peak_db(std::span<const double> magnitudes);

/// OFDM body without CP, DBF at the true arrival angle, matched filter
/// against the N-sample equivalent transmit signal b(n). One lag per scene cell.
std::vector<double> conventional_ofdm_profile(const Scene& scene, const SubcarrierWeights& weights,
                                              const ArrayGeometry& geom, const RadarParams& params,
                                              double noise_power, std::uint64_t seed,
                                              double velocity_error = 0.0);

/// Single-channel (post-beamforming) chirp echo of the scene, matched
/// filtered against the chirp. One lag per scene cell.
std::vector<double> lfm_profile(const Scene& scene, const LfmWaveform& lfm, double noise_power,
                                std::uint64_t seed);

}  // namespace cpofdm
