#include "cpofdm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cpofdm {
namespace {

constexpr std::size_t kMinTrials = 100;

}  // namespace

double predicted_snr(cplx h, double noise_power, std::span<const cplx> spectrum,
                     std::size_t n_rx) {
  if (!(noise_power > 0.0)) throw std::invalid_argument("predicted_snr: noise power must be > 0");
  if (spectrum.empty() || n_rx < 1) throw std::invalid_argument("predicted_snr: empty spectrum");
  CompensatedSum<double> inverse_power;
  for (const auto& b : spectrum) {
    const double p = std::norm(b);
    if (p == 0.0) throw std::invalid_argument("predicted_snr: zero spectrum bin");
    inverse_power.add(1.0 / p);
  }
  const auto n = static_cast<double>(spectrum.size());
  const double variance = noise_power / (static_cast<double>(n_rx) * n * n) * inverse_power.value();
  return std::norm(h) / variance;
}

double max_snr(cplx h, double noise_power, std::size_t n_rx, std::size_t n_tx,
               std::size_t n_subcarriers) {
  if (!(noise_power > 0.0)) throw std::invalid_argument("max_snr: noise power must be > 0");
  return static_cast<double>(n_rx * n_tx * n_subcarriers) * std::norm(h) / noise_power;
}

double reconstruction_noise_variance(double noise_power, std::size_t n_rx, std::size_t n_tx,
                                     std::size_t n_subcarriers) {
  return noise_power / static_cast<double>(n_rx * n_tx * n_subcarriers);
}

PointingErrorReport pointing_weights(const ArrayGeometry& geom, const RadarParams& params,
                                     double true_dod, double true_doa,
                                     const PointingEstimate& est) {
  geom.validate();
  const double k = 2.0 * kPi / params.wavelength();
  const double tx_sine_error = std::sin(est.dod_est) - std::sin(true_dod);
  const double rx_sine_error = std::sin(est.doa_est) - std::sin(true_doa);

  PointingErrorReport report;
  // 2 pi f_c dbeta_q = (2 pi / lambda) d_r(q) (sin theta0 - sin theta)
  for (double d : geom.rx_offsets) report.q_tilde += std::polar(1.0, k * d * rx_sine_error);

  const std::size_t m_count = geom.tx_offsets.size();
  ComplexVector tx_phase(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    tx_phase[m] = std::polar(1.0, k * geom.tx_offsets[m] * tx_sine_error);
    report.m_tilde += tx_phase[m];
  }

  const auto q = static_cast<double>(geom.rx_offsets.size());
  const auto mm = static_cast<double>(m_count);
  report.w.resize(m_count);
  for (std::size_t i = 0; i < m_count; ++i) {
    cplx acc{};
    for (std::size_t m = 0; m < m_count; ++m) {
      const double angle = -2.0 * kPi * static_cast<double>((m * i) % m_count) / mm;
      acc += tx_phase[m] * std::polar(1.0, angle);
    }
    report.w[i] = report.q_tilde / (mm * q) * acc;
  }

  report.snr_loss = (q * q * mm * mm) / (std::norm(report.q_tilde) * std::norm(report.m_tilde));
  report.snr_loss_db = power_db(report.snr_loss);
  return report;
}

double snr_error(const PointingErrorReport& report, cplx h, double noise_power,
                 const RadarParams& params) {
  if (!(noise_power > 0.0)) throw std::invalid_argument("snr_error: noise power must be > 0");
  const auto q = static_cast<double>(params.n_rx);
  const auto m = static_cast<double>(params.n_tx);
  const auto n = static_cast<double>(params.n_subcarriers);
  return std::norm(report.q_tilde) * std::norm(report.m_tilde) * n * std::norm(h) /
         (q * m * noise_power);
}

CellStatistics cell_statistics(std::span<const cplx> samples) {
  if (samples.size() < 2) throw std::invalid_argument("cell_statistics: need >= 2 samples");
  CompensatedSum<cplx> sum;
  for (const auto& v : samples) sum.add(v);
  const auto count = static_cast<double>(samples.size());
  CellStatistics stats;
  stats.count = samples.size();
  stats.mean = sum.value() / count;
  CompensatedSum<double> squares;
  for (const auto& v : samples) squares.add(std::norm(v - stats.mean));
  stats.variance = squares.value() / (count - 1.0);
  return stats;
}

ComplexVector collect_cell(std::span<const RangeProfile> trials, std::size_t cell) {
  ComplexVector samples;
  samples.reserve(trials.size());
  for (const auto& t : trials) {
    if (cell >= t.h_hat.size()) throw std::invalid_argument("collect_cell: cell out of range");
    samples.push_back(t.h_hat[cell]);
  }
  return samples;
}

double empirical_snr(std::span<const cplx> cell_samples, cplx truth) {
  if (cell_samples.size() < kMinTrials) {
    throw std::invalid_argument("empirical_snr: need at least " + std::to_string(kMinTrials) +
                                " trials");
  }
  ComplexVector error(cell_samples.begin(), cell_samples.end());
  for (auto& e : error) e -= truth;
  const auto stats = cell_statistics(error);
  if (stats.variance == 0.0) return std::numeric_limits<double>::infinity();
  return std::norm(truth) / stats.variance;
}

double empirical_snr(std::span<const RangeProfile> trials, const Scene& scene, std::size_t cell) {
  const cplx truth = cell < scene.h.size() ? scene.h[cell] : cplx{};
  return empirical_snr(collect_cell(trials, cell), truth);
}

double empirical_snr_about_mean(std::span<const cplx> cell_samples) {
  if (cell_samples.size() < kMinTrials) {
    throw std::invalid_argument("empirical_snr_about_mean: need at least " +
                                std::to_string(kMinTrials) + " trials");
  }
  const auto stats = cell_statistics(cell_samples);
  if (stats.variance == 0.0) return std::numeric_limits<double>::infinity();
  return std::norm(stats.mean) / stats.variance;
}

std::vector<double> magnitudes(std::span<const cplx> x) {
  std::vector<double> out(x.size());
  std::transform(x.begin(), x.end(), out.begin(), [](const cplx& v) { return std::abs(v); });
  return out;
}

double pslr_db(std::span<const double> profile, std::span<const std::size_t> mainlobe) {
  if (mainlobe.empty()) throw std::invalid_argument("pslr_db: empty mainlobe");
  std::vector<bool> in_main(profile.size(), false);
  double peak = 0.0;
  for (std::size_t i : mainlobe) {
    if (i >= profile.size()) throw std::invalid_argument("pslr_db: mainlobe index out of range");
    in_main[i] = true;
    peak = std::max(peak, profile[i]);
  }
  double sidelobe = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (!in_main[i]) sidelobe = std::max(sidelobe, profile[i]);
  }
  if (peak == 0.0 && sidelobe == 0.0) throw std::invalid_argument("pslr_db: all-zero profile");
  if (peak == 0.0) return std::numeric_limits<double>::infinity();
  if (sidelobe == 0.0) return -300.0;
  return std::max(-300.0, magnitude_db(sidelobe / peak));
}

ComplexVector periodicity_check(const RangeProfile& profile, std::size_t n0, std::size_t n_tx,
                                std::span<const std::size_t> support) {
  const auto& h = profile.h_hat;
  if (n0 == 0 || n_tx == 0 || h.size() != n0 * n_tx) {
    throw std::invalid_argument("periodicity_check: profile length must equal N0 * M");
  }
  if (support.empty()) throw std::invalid_argument("periodicity_check: empty support");
  CompensatedSum<double> reference;
  for (std::size_t n : support) {
    if (n >= n0) throw std::invalid_argument("periodicity_check: support must lie in [0, N0)");
    reference.add(std::norm(h[n]));
  }
  if (!(reference.value() > 0.0)) {
    throw DegenerateError("periodicity_check: reference period carries no energy");
  }
  // g_i = argmin_g sum_n |h(n + i N0) - g h(n)|^2
  ComplexVector gains(n_tx);
  for (std::size_t i = 0; i < n_tx; ++i) {
    CompensatedSum<cplx> cross;
    for (std::size_t n : support) cross.add(h[n + i * n0] * std::conj(h[n]));
    gains[i] = cross.value() / reference.value();
  }
  return gains;
}

std::vector<std::size_t> masked_cells(std::span<const double> profile, std::span<const cplx> h) {
  if (h.empty() || profile.size() < h.size()) {
    throw std::invalid_argument("masked_cells: profile shorter than the scene");
  }
  double strongest = 0.0;
  for (const auto& v : h) strongest = std::max(strongest, std::abs(v));
  if (strongest == 0.0) throw std::invalid_argument("masked_cells: empty scene");
  const double peak = *std::max_element(profile.begin(), profile.end());
  if (!(peak > 0.0)) throw std::invalid_argument("masked_cells: all-zero profile");
  double floor = 0.0;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (i >= h.size() || h[i] == cplx{}) floor = std::max(floor, profile[i]);
  }
  std::vector<std::size_t> masked;
  for (std::size_t l = 0; l < h.size(); ++l) {
    if (h[l] != cplx{} && std::abs(h[l]) / strongest <= floor / peak) masked.push_back(l);
  }
  return masked;
}

std::vector<double> period_coherence(const RangeProfile& profile, std::span<const cplx> h,
                                     std::size_t n0, std::size_t n_tx) {
  const auto& est = profile.h_hat;
  if (n0 == 0 || n_tx == 0 || est.size() != n0 * n_tx || h.size() > n0) {
    throw std::invalid_argument("period_coherence: profile length must equal N0 * M, scene within N0");
  }
  ComplexVector error(est);
  for (std::size_t l = 0; l < h.size(); ++l) error[l] -= h[l];
  CompensatedSum<double> reference;
  for (std::size_t n = 0; n < n0; ++n) reference.add(std::norm(error[n]));
  if (!(reference.value() > 0.0)) throw DegenerateError("period_coherence: no error in period 0");
  std::vector<double> out(n_tx);
  for (std::size_t i = 0; i < n_tx; ++i) {
    CompensatedSum<cplx> cross;
    CompensatedSum<double> energy;
    for (std::size_t n = 0; n < n0; ++n) {
      cross.add(error[n + i * n0] * std::conj(error[n]));
      energy.add(std::norm(error[n + i * n0]));
    }
    out[i] = energy.value() > 0.0
                 ? std::abs(cross.value()) / std::sqrt(reference.value() * energy.value())
                 : 0.0;
  }
  return out;
}

}  // namespace cpofdm
