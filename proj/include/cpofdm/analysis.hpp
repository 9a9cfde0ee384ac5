#pragma once

// Closed-form performance predictions and the empirical metrics used to
// check them.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "cpofdm/channel.hpp"
#include "cpofdm/geometry.hpp"
#include "cpofdm/numerics.hpp"
#include "cpofdm/receiver.hpp"

namespace cpofdm {

class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |h|^2 / (sigma^2 / (Q N^2) * sum_k 1/|B(k)|^2). All linear.
double predicted_snr(cplx h, double noise_power, std::span<const cplx> spectrum, std::size_t n_rx);

/// Q M N |h|^2 / sigma^2, the flat-spectrum optimum.
double max_snr(cplx h, double noise_power, std::size_t n_rx, std::size_t n_tx,
               std::size_t n_subcarriers);

/// Per-cell reconstruction noise variance sigma^2 / (Q M N) of the flat design.
double reconstruction_noise_variance(double noise_power, std::size_t n_rx, std::size_t n_tx,
                                     std::size_t n_subcarriers);

struct PointingErrorReport {
  cplx q_tilde;     // sum_q exp(j 2 pi f_c dbeta_q)
  cplx m_tilde;     // sum_m exp(j 2 pi f_c dgamma_m)
  ComplexVector w;  // w_0 .. w_{M-1}
  double snr_loss = 1.0;  // linear, Q^2 M^2 / (|Q~|^2 |M~|^2)
  double snr_loss_db = 0.0;
};

/// Closed-form range-profile weights and SNR loss for beam-pointing errors.
PointingErrorReport pointing_weights(const ArrayGeometry& geom, const RadarParams& params,
                                     double true_dod, double true_doa,
                                     const PointingEstimate& est);

/// |Q~|^2 |M~|^2 N |h|^2 / (Q M sigma^2).
double snr_error(const PointingErrorReport& report, cplx h, double noise_power,
                 const RadarParams& params);

/// Sample mean and unbiased variance (about the mean) of complex samples,
/// accumulated with compensated summation.
struct CellStatistics {
  cplx mean;
  double variance = 0.0;
  std::size_t count = 0;
};
CellStatistics cell_statistics(std::span<const cplx> samples);

/// h_hat(cell) across all trials.
ComplexVector collect_cell(std::span<const RangeProfile> trials, std::size_t cell);

/// |h(cell)|^2 / var(h_hat(cell) - h(cell)). Needs >= 100 trials; returns
/// +infinity when the variance is exactly zero (noiseless trials).
double empirical_snr(std::span<const RangeProfile> trials, const Scene& scene, std::size_t cell);
double empirical_snr(std::span<const cplx> cell_samples, cplx truth);

/// |mean|^2 / variance, for cells whose expected value is a scaled truth
/// (pointing errors). Needs >= 100 samples.
double empirical_snr_about_mean(std::span<const cplx> cell_samples);

/// 20 log10(max outside mainlobe / max inside mainlobe), floored at -300 dB.
double pslr_db(std::span<const double> profile, std::span<const std::size_t> mainlobe);
std::vector<double> magnitudes(std::span<const cplx> x);

/// Least-squares complex gain of each length-n0 period i relative to period
/// 0 over the given support cells (indices in [0, n0)). Entry 0 is 1.
/// Throws DegenerateError if period 0 carries no energy over the support.
ComplexVector periodicity_check(const RangeProfile& profile, std::size_t n0, std::size_t n_tx,
                                std::span<const std::size_t> support);

/// Scatterers submerged by sidelobes: support cells l whose true level
/// |h(l)| / max|h| does not exceed the profile's sidelobe floor (largest
/// response outside the support, relative to the profile peak).
std::vector<std::size_t> masked_cells(std::span<const double> profile, std::span<const cplx> h);

/// |normalized correlation| between the reconstruction error h_hat - h in
/// period i and in period 0, for i = 0 .. M-1. Entry 0 is 1; values near 1
/// mean the later periods repeat the first. Throws DegenerateError if
/// period 0 has no error energy.
std::vector<double> period_coherence(const RangeProfile& profile, std::span<const cplx> h,
                                     std::size_t n0, std::size_t n_tx);

}  // namespace cpofdm
