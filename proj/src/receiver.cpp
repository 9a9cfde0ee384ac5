#include "cpofdm/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cpofdm {

ComplexVector receive_dbf(const RxCapture& capture, const ArrayGeometry& geom,
                          const RadarParams& params, double doa_est) {
  if (geom.rx_offsets.size() != capture.n_rx) {
    throw std::invalid_argument("receive_dbf: capture has " + std::to_string(capture.n_rx) +
                                " rows but the array has " +
                                std::to_string(geom.rx_offsets.size()) + " elements");
  }
  const auto a_r = steering_vector(geom.rx_offsets, doa_est, params.wavelength());
  ComplexVector z(capture.n_samples);
  for (std::size_t q = 0; q < capture.n_rx; ++q) {
    const cplx w = std::conj(a_r[q]);
    const auto row = capture.row(q);
    for (std::size_t n = 0; n < z.size(); ++n) z[n] += w * row[n];
  }
  return z;
}

ComplexVector remove_cp(std::span<const cplx> z, std::size_t n_cells, std::size_t n_subcarriers) {
  if (n_cells < 1) throw std::invalid_argument("remove_cp: L must be >= 1");
  if (z.size() < n_subcarriers + n_cells - 1) {
    throw std::invalid_argument("remove_cp: input shorter than N + L - 1");
  }
  const auto first = z.begin() + static_cast<std::ptrdiff_t>(n_cells - 1);
  return {first, first + static_cast<std::ptrdiff_t>(n_subcarriers)};
}

ComplexVector equivalent_spectrum(const SubcarrierWeights& weights, const ArrayGeometry& geom,
                                  const RadarParams& params, double dod) {
  if (geom.tx_offsets.size() != weights.n_tx()) {
    throw std::invalid_argument("equivalent_spectrum: antenna count mismatch");
  }
  const auto a_t = steering_vector(geom.tx_offsets, dod, params.wavelength());
  ComplexVector spectrum(weights.n_subcarriers());
  for (std::size_t m = 0; m < weights.n_tx(); ++m) {
    const auto u = weights.row(m);
    for (std::size_t k = 0; k < spectrum.size(); ++k) spectrum[k] += a_t[m] * u[k];
  }
  return spectrum;
}

RangeProfile reconstruct(std::span<const cplx> z_bar, std::span<const cplx> spectrum,
                         std::size_t n_rx, std::size_t n_cells) {
  const std::size_t n = z_bar.size();
  if (n == 0 || spectrum.size() != n) {
    throw std::invalid_argument("reconstruct: z_bar and spectrum must have equal non-zero length");
  }
  if (n_rx < 1 || n_cells < 1) throw std::invalid_argument("reconstruct: Q and L must be >= 1");

  CompensatedSum<double> energy;
  for (const auto& b : spectrum) energy.add(std::norm(b));
  const double floor = 1e-12 * std::sqrt(energy.value() / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    if (!(std::abs(spectrum[k]) >= floor) || floor == 0.0) {
      throw SpectrumSingularError("equivalent spectrum vanishes at bin " + std::to_string(k));
    }
  }

  auto z_spec = dft_unitary(z_bar, Direction::forward);
  const double gain = static_cast<double>(n_rx) * std::sqrt(static_cast<double>(n));
  const std::size_t shift = n_cells - 1;
  for (std::size_t k = 0; k < n; ++k) {
    // exp(j 2 pi (L-1) k / N), exponent reduced mod N
    const double angle = 2.0 * kPi * static_cast<double>((shift * k) % n) / static_cast<double>(n);
    z_spec[k] /= gain * spectrum[k] * std::polar(1.0, angle);
  }

  RangeProfile profile;
  profile.h_hat = dft_unitary(z_spec, Direction::inverse);
  profile.meta.n_subcarriers = n;
  profile.meta.n_rx = n_rx;
  profile.meta.n_cells = n_cells;
  return profile;
}

RangeProfile reconstruct_with_pointing_error(const RxCapture& capture,
                                             const SubcarrierWeights& weights,
                                             const ArrayGeometry& geom, const RadarParams& params,
                                             const PointingEstimate& est, std::size_t n_cells) {
  const auto z = receive_dbf(capture, geom, params, est.doa_est);
  const auto z_bar = remove_cp(z, n_cells, weights.n_subcarriers());
  const auto spectrum = equivalent_spectrum(weights, geom, params, est.dod_est);
  auto profile = reconstruct(z_bar, spectrum, capture.n_rx, n_cells);
  profile.meta.n_tx = weights.n_tx();
  profile.meta.dod = est.dod_est;
  profile.meta.doa = est.doa_est;
  profile.meta.seed = capture.seed;
  return profile;
}

}  // namespace cpofdm
