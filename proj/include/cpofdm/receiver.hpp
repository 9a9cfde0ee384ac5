#pragma once

// Receive beamforming, CP removal and IRCI-free range reconstruction.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "cpofdm/channel.hpp"
#include "cpofdm/geometry.hpp"
#include "cpofdm/numerics.hpp"
#include "cpofdm/waveform.hpp"

namespace cpofdm {

/// Raised when the equivalent spectrum has a (near-)zero bin and division
/// by it would be meaningless.
class SpectrumSingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Beam-pointing angles assumed by the receiver, radians.
struct PointingEstimate {
  double dod_est = 0.0;
  double doa_est = 0.0;
};

struct ProfileMeta {
  std::size_t n_subcarriers = 0;
  std::size_t n_tx = 0;
  std::size_t n_rx = 0;
  std::size_t n_cells = 0;
  double dod = 0.0;
  double doa = 0.0;
  std::uint64_t seed = 0;
};

struct RangeProfile {
  ComplexVector h_hat;  // length N
  ProfileMeta meta;
};

/// z(n) = A_r^H(doa_est) x(n), length equal to the capture row length.
ComplexVector receive_dbf(const RxCapture& capture, const ArrayGeometry& geom,
                          const RadarParams& params, double doa_est);

/// The N samples starting at index L - 1.
ComplexVector remove_cp(std::span<const cplx> z, std::size_t n_cells, std::size_t n_subcarriers);

/// B(k) = sum_m exp(-j 2 pi f_c gamma_m) U_m(k) for departure angle dod.
ComplexVector equivalent_spectrum(const SubcarrierWeights& weights, const ArrayGeometry& geom,
                                  const RadarParams& params, double dod);

/// h_hat = IDFT( DFT(z_bar)(k) / (Q sqrt(N) B(k) exp(j 2 pi (L-1) k / N)) ).
/// Only n_subcarriers, n_rx and n_cells of the returned meta are filled.
/// Throws SpectrumSingularError if |B(k)| < 1e-12 * rms(B) for any k.
RangeProfile reconstruct(std::span<const cplx> z_bar, std::span<const cplx> spectrum,
                         std::size_t n_rx, std::size_t n_cells);

/// Full receive chain at the estimated angles: DBF toward doa_est, CP
/// removal, division by the spectrum synthesized toward dod_est. With
/// est equal to the true angles this is the matched IRCI-free reconstruction.
RangeProfile reconstruct_with_pointing_error(const RxCapture& capture,
                                             const SubcarrierWeights& weights,
                                             const ArrayGeometry& geom, const RadarParams& params,
                                             const PointingEstimate& est, std::size_t n_cells);

}  // namespace cpofdm
