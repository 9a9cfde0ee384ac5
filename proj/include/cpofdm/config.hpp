#pragma once

// Run configuration: JSON loading with positioned diagnostics, defaults
// matching the reference scenario (f_c = 3 GHz, B = 50 MHz, N = 512,
// M = Q = 4, L = 61, point target at cell 40, DOD 30 deg, DOA 20 deg).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cpofdm/channel.hpp"
#include "cpofdm/geometry.hpp"
#include "cpofdm/receiver.hpp"
#include "cpofdm/waveform.hpp"

namespace cpofdm {

enum class Experiment { profile, compare_baselines, doppler_sweep, pointing_sweep, periodicity };

std::string_view to_string(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

struct Diagnostic {
  std::string path;  // JSON pointer of the offending value, "" for the document
  std::size_t line = 0;  // 1-based; 0 when unknown
  std::size_t column = 0;
  std::string message;

  std::string format(std::string_view file) const;
};

struct AntennaCount {
  std::size_t n_tx = 0;
  std::size_t n_rx = 0;
};

struct RunConfig {
  RadarParams params;
  WaveformConfig waveform;
  ArrayGeometry array;
  bool array_is_default = true;  // half-wavelength ULA rebuilt per antenna count in sweeps
  Scene scene;                   // angles in radians
  PointingEstimate pointing;     // radians; defaults to the true angles
  double noise_power = 0.0;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  Experiment experiment = Experiment::profile;

  std::vector<double> velocity_errors{0.5, 1.0, 2.0};  // m/s
  std::vector<double> pointing_errors_deg{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  std::vector<AntennaCount> antenna_counts{{4, 2}, {4, 4}, {4, 8}, {2, 4}, {8, 4}};

  std::string canonical;  // normalized JSON echo of every field, hashed for provenance

  std::uint64_t hash() const;
  std::string hash_hex() const;
};

struct LoadResult {
  std::optional<RunConfig> config;
  std::vector<Diagnostic> diagnostics;
};

/// Parses and validates. `config` is set only when diagnostics is empty.
LoadResult load_config(std::string_view text);

/// Re-checks every module invariant on an assembled config; empty iff valid.
std::vector<Diagnostic> validate(const RunConfig& config);

/// Rebuilds the canonical JSON echo from the structured fields.
std::string canonical_json(const RunConfig& config);

/// Reference-scenario config used when a field is omitted.
RunConfig default_config();

}  // namespace cpofdm
