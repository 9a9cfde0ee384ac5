#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cpofdm/numerics.hpp"

namespace cpofdm {

/// Propagation speed used for every wavelength, range-cell and Doppler
/// conversion.
inline constexpr double kPropagationSpeed = 3.0e8;

struct RadarParams {
  double carrier_hz = 0.0;
  double bandwidth_hz = 0.0;
  std::size_t n_subcarriers = 0;  // N
  std::size_t n_tx = 0;           // M
  std::size_t n_rx = 0;           // Q

  double wavelength() const { return kPropagationSpeed / carrier_hz; }
  double subcarrier_spacing() const { return bandwidth_hz / static_cast<double>(n_subcarriers); }
  double sample_period() const { return 1.0 / bandwidth_hz; }
  double range_resolution() const { return kPropagationSpeed / (2.0 * bandwidth_hz); }

  void validate() const;
};

/// Element offsets from the reference element, in meters.
struct ArrayGeometry {
  std::vector<double> tx_offsets;
  std::vector<double> rx_offsets;

  void validate() const;

  /// Half-wavelength uniform linear arrays sized from params.
  static ArrayGeometry half_wavelength_ula(const RadarParams& params);
};

std::vector<double> make_ula(std::size_t count, double spacing);

/// Narrowband steering vector: element i = exp(-j (2 pi / lambda) d_i sin(angle)).
ComplexVector steering_vector(std::span<const double> offsets, double angle, double wavelength);

/// ceil(extent / resolution): range cells spanned by a target of the given length.
std::size_t occupied_cells(double extent, double resolution);

double deg_to_rad(double degrees);
double rad_to_deg(double radians);

}  // namespace cpofdm
