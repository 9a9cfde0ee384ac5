#include "cpofdm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cpofdm {

void RadarParams::validate() const {
  if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz)) {
    throw std::invalid_argument("carrier frequency must be > 0");
  }
  if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
    throw std::invalid_argument("bandwidth must be > 0");
  }
  if (n_tx < 1) throw std::invalid_argument("transmit antenna count M must be >= 1");
  if (n_rx < 1) throw std::invalid_argument("receive antenna count Q must be >= 1");
  if (n_subcarriers < n_tx) throw std::invalid_argument("subcarrier count N must be >= M");
}

namespace {

void check_offsets(const std::vector<double>& offsets, const char* side) {
  if (offsets.empty()) {
    throw std::invalid_argument(std::string(side) + " array must have at least one element");
  }
  if (offsets.front() != 0.0) {
    throw std::invalid_argument(std::string(side) + " array offset of element 0 must be 0");
  }
  for (double d : offsets) {
    if (!std::isfinite(d) || d < 0.0) {
      throw std::invalid_argument(std::string(side) + " array offsets must be finite and >= 0");
    }
  }
}

}  // namespace

void ArrayGeometry::validate() const {
  check_offsets(tx_offsets, "transmit");
  check_offsets(rx_offsets, "receive");
}

ArrayGeometry ArrayGeometry::half_wavelength_ula(const RadarParams& params) {
  const double spacing = params.wavelength() / 2.0;
  return {make_ula(params.n_tx, spacing), make_ula(params.n_rx, spacing)};
}

std::vector<double> make_ula(std::size_t count, double spacing) {
  if (count < 1) throw std::invalid_argument("make_ula: count must be >= 1");
  if (!(spacing > 0.0)) throw std::invalid_argument("make_ula: spacing must be > 0");
  std::vector<double> offsets(count);
  for (std::size_t i = 0; i < count; ++i) offsets[i] = static_cast<double>(i) * spacing;
  return offsets;
}

ComplexVector steering_vector(std::span<const double> offsets, double angle, double wavelength) {
  if (!(wavelength > 0.0)) throw std::invalid_argument("steering_vector: wavelength must be > 0");
  if (!(std::abs(angle) < kPi / 2.0)) {
    throw std::invalid_argument("steering_vector: |angle| must be < pi/2");
  }
  const double k = 2.0 * kPi / wavelength * std::sin(angle);
  ComplexVector out(offsets.size());
  std::transform(offsets.begin(), offsets.end(), out.begin(),
                 [k](double d) { return std::polar(1.0, -k * d); });
  return out;
}

std::size_t occupied_cells(double extent, double resolution) {
  if (!(extent >= 0.0)) throw std::invalid_argument("occupied_cells: extent must be >= 0");
  if (!(resolution > 0.0)) throw std::invalid_argument("occupied_cells: resolution must be > 0");
  return static_cast<std::size_t>(std::ceil(extent / resolution));
}

double deg_to_rad(double degrees) { return degrees * kPi / 180.0; }

double rad_to_deg(double radians) { return radians * 180.0 / kPi; }

}  // namespace cpofdm
