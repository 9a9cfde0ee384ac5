#pragma once

// Experiment drivers behind the command-line tool. Every artifact carries
// the config hash and the noise seed; output bytes depend only on the config.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpofdm/config.hpp"
#include "cpofdm/receiver.hpp"

namespace cpofdm {

inline constexpr std::string_view kVersion = "1.0.0";

/// Human-readable description of the velocity-residue model, recorded in
/// run metadata.
inline constexpr std::string_view kDopplerModel =
    "common phase ramp exp(j 2 pi f_d n T_s), f_d = 2 dv f_c / c, c = 3e8 m/s";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Independent noisy trials of the CP pipeline: trial t uses seed
/// mix_seed(seed, t). `visit` sees the trials in index order.
void for_each_trial(const TxWaveformSet& tx, const SubcarrierWeights& weights, const Scene& scene,
                    const ArrayGeometry& geom, const RadarParams& params,
                    const PointingEstimate& est, double noise_power, std::uint64_t seed,
                    std::size_t trials,
                    const std::function<void(std::size_t, const RangeProfile&)>& visit);

/// Writes the artifacts of cfg.experiment into out_dir (created if needed)
/// and returns their paths. Throws IoError when a file cannot be written.
std::vector<std::filesystem::path> run(const RunConfig& cfg, const std::filesystem::path& out_dir);

/// Transmit waveforms as CSV (antenna, n, re, im) with provenance header.
std::string waveform_csv(const RunConfig& cfg);

}  // namespace cpofdm
