#include "cpofdm/waveform.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cpofdm {

void WaveformConfig::validate() const {
  using std::to_string;
  if (n_tx == 0) throw std::invalid_argument("transmit antenna count M must be >= 1");
  if (n_subcarriers % n_tx != 0) {
    throw std::invalid_argument("N must be multiple of M (N=" + to_string(n_subcarriers) +
                                ", M=" + to_string(n_tx) + ")");
  }
  const std::size_t n0 = subcarriers_per_tx();
  if (n0 < 2) throw std::invalid_argument("N0 = N/M must be >= 2");
  if (n_cells < 1) throw std::invalid_argument("tracking zone L must be >= 1");
  if (n_cells >= n0) {
    throw std::invalid_argument("tracking zone must satisfy L < N0 to avoid range aliasing (L=" +
                                to_string(n_cells) + ", N0=" + to_string(n0) + ")");
  }
  if (roots.size() != n_tx) {
    throw std::invalid_argument("expected one Zadoff-Chu root per transmit antenna");
  }
  for (std::size_t root : roots) {
    if (root == 0 || root >= n0 || std::gcd(root, n0) != 1) {
      throw std::invalid_argument("Zadoff-Chu root " + to_string(root) +
                                  " must satisfy 0 < mu < N0 and gcd(mu, N0) = 1");
    }
  }
}

WaveformConfig WaveformConfig::with_default_roots(std::size_t n_subcarriers, std::size_t n_tx,
                                                  std::size_t n_cells) {
  WaveformConfig cfg{n_subcarriers, n_tx, n_cells, {}};
  if (n_tx > 0 && n_subcarriers % n_tx == 0 && n_subcarriers / n_tx >= 2) {
    cfg.roots = default_roots(n_subcarriers / n_tx, n_tx);
  }
  return cfg;
}

std::vector<std::size_t> default_roots(std::size_t n0, std::size_t count) {
  std::vector<std::size_t> coprime;
  for (std::size_t r = 1; r < n0; ++r) {
    if (std::gcd(r, n0) == 1) coprime.push_back(r);
  }
  if (coprime.empty()) throw std::invalid_argument("default_roots: N0 must be >= 2");
  std::vector<std::size_t> roots(count);
  for (std::size_t m = 0; m < count; ++m) roots[m] = coprime[m % coprime.size()];
  return roots;
}

std::vector<double> zadoff_chu_phases(std::size_t n0, std::size_t root) {
  if (n0 < 2) throw std::invalid_argument("zadoff_chu_phases: N0 must be >= 2");
  if (root == 0 || root >= n0 || std::gcd(root, n0) != 1) {
    throw std::invalid_argument("zadoff_chu_phases: root must be in (0, N0) and coprime to N0");
  }
  const std::size_t parity = n0 % 2;
  std::vector<double> phases(n0);
  for (std::size_t p = 0; p < n0; ++p) {
    const double q = static_cast<double>((p + parity) * p) * static_cast<double>(root);
    phases[p] = -kPi * q / static_cast<double>(n0);
  }
  return phases;
}

namespace {

// exp(j phi_p) with the integer (p + parity) p mu reduced mod 2 N0 first, so
// the argument to sin/cos stays in (-2 pi, 0] regardless of N0 and mu.
ComplexVector zadoff_chu_unit_sequence(std::size_t n0, std::size_t root) {
  const std::size_t parity = n0 % 2;
  const std::size_t modulus = 2 * n0;
  ComplexVector seq(n0);
  for (std::size_t p = 0; p < n0; ++p) {
    const std::size_t q = (p + parity) * p % modulus * root % modulus;
    seq[p] = std::polar(1.0, -kPi * static_cast<double>(q) / static_cast<double>(n0));
  }
  return seq;
}

}  // namespace

SubcarrierWeights::SubcarrierWeights(std::size_t n_tx, std::size_t n_subcarriers)
    : n_tx_(n_tx), n_subcarriers_(n_subcarriers), data_(n_tx * n_subcarriers) {}

SubcarrierWeights design_subcarrier_weights(const WaveformConfig& cfg, PhaseMode mode) {
  cfg.validate();
  const std::size_t m_count = cfg.n_tx;
  const std::size_t n0 = cfg.subcarriers_per_tx();
  const double amplitude = std::sqrt(static_cast<double>(m_count));
  SubcarrierWeights weights(m_count, cfg.n_subcarriers);
  for (std::size_t m = 0; m < m_count; ++m) {
    const auto unit = mode == PhaseMode::zadoff_chu ? zadoff_chu_unit_sequence(n0, cfg.roots[m])
                                                    : ComplexVector(n0, cplx(1.0, 0.0));
    for (std::size_t p = 0; p < n0; ++p) weights.at(m, m_count * p + m) = amplitude * unit[p];
  }
  return weights;
}

TxWaveformSet::TxWaveformSet(std::size_t n_tx, std::size_t body_len, std::size_t cp_len)
    : n_tx_(n_tx), body_len_(body_len), cp_len_(cp_len), data_(n_tx * (body_len + cp_len)) {}

TxWaveformSet synthesize_tx(const SubcarrierWeights& weights, std::size_t n_cells) {
  const std::size_t n = weights.n_subcarriers();
  if (n_cells < 1) throw std::invalid_argument("synthesize_tx: L must be >= 1");
  if (weights.n_tx() == 0 || n_cells >= n / weights.n_tx()) {
    throw std::invalid_argument("synthesize_tx: L must be < N0");
  }
  TxWaveformSet tx(weights.n_tx(), n, n_cells - 1);
  for (std::size_t m = 0; m < weights.n_tx(); ++m) {
    const auto body = dft_unitary(weights.row(m), Direction::inverse);
    auto row = tx.row(m);
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = body[i % n];
  }
  return tx;
}

double papr_db(std::span<const cplx> x) {
  if (x.empty()) throw std::invalid_argument("papr_db: empty input");
  double peak = 0.0;
  CompensatedSum<double> total;
  for (const auto& v : x) {
    const double p = std::norm(v);
    peak = std::max(peak, p);
    total.add(p);
  }
  if (peak == 0.0) throw std::invalid_argument("papr_db: all-zero input");
  const double mean = total.value() / static_cast<double>(x.size());
  // constant-modulus input can round to peak < mean by an ulp
  return std::max(0.0, power_db(peak / mean));
}

}  // namespace cpofdm
