#pragma once

// Interleaved Zadoff-Chu subcarrier weighting and CP-extended OFDM synthesis.
//
// Antenna m owns the subcarriers k = M p + m (p = 0 .. N0-1) with weight
// sqrt(M) exp(j phi_{m,p}); phi is a length-N0 Zadoff-Chu phase sequence.
// Because the supports interleave, every antenna's time sequence is a
// modulated N0-point IDFT of a CAZAC sequence and therefore has constant
// modulus.

#include <cstddef>
#include <span>
#include <vector>

#include "cpofdm/numerics.hpp"

namespace cpofdm {

struct WaveformConfig {
  std::size_t n_subcarriers = 0;  // N
  std::size_t n_tx = 0;           // M
  std::size_t n_cells = 0;        // L, tracking-zone range cells
  std::vector<std::size_t> roots; // mu_m, one per transmit antenna

  std::size_t subcarriers_per_tx() const { return n_tx == 0 ? 0 : n_subcarriers / n_tx; }

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  /// Config with roots filled by default_roots().
  static WaveformConfig with_default_roots(std::size_t n_subcarriers, std::size_t n_tx,
                                           std::size_t n_cells);
};

/// m-th smallest positive integer coprime to n0, for m = 0 .. count-1.
/// Wraps around when fewer than `count` such integers exist.
std::vector<std::size_t> default_roots(std::size_t n0, std::size_t count);

/// phi_p = -(pi / n0) (p + (n0 mod 2)) mu p, p = 0 .. n0-1.
std::vector<double> zadoff_chu_phases(std::size_t n0, std::size_t root);

/// M x N complex weights U_m(k), row-major.
class SubcarrierWeights {
 public:
  SubcarrierWeights(std::size_t n_tx, std::size_t n_subcarriers);

  std::size_t n_tx() const { return n_tx_; }
  std::size_t n_subcarriers() const { return n_subcarriers_; }

  cplx& at(std::size_t m, std::size_t k) { return data_[m * n_subcarriers_ + k]; }
  const cplx& at(std::size_t m, std::size_t k) const { return data_[m * n_subcarriers_ + k]; }
  std::span<const cplx> row(std::size_t m) const {
    return {data_.data() + m * n_subcarriers_, n_subcarriers_};
  }

 private:
  std::size_t n_tx_;
  std::size_t n_subcarriers_;
  ComplexVector data_;
};

enum class PhaseMode {
  zadoff_chu,
  zero,  // all phases forced to 0; structural tests only
};

SubcarrierWeights design_subcarrier_weights(const WaveformConfig& cfg,
                                            PhaseMode mode = PhaseMode::zadoff_chu);

/// M rows of N + cp_len samples each. Row m is the N-periodic extension of
/// the unitary IDFT of U_m: u_m(n) = IDFT(U_m)(n mod N).
class TxWaveformSet {
 public:
  TxWaveformSet(std::size_t n_tx, std::size_t body_len, std::size_t cp_len);

  std::size_t n_tx() const { return n_tx_; }
  std::size_t body_len() const { return body_len_; }
  std::size_t cp_len() const { return cp_len_; }
  std::size_t length() const { return body_len_ + cp_len_; }

  std::span<cplx> row(std::size_t m) { return {data_.data() + m * length(), length()}; }
  std::span<const cplx> row(std::size_t m) const {
    return {data_.data() + m * length(), length()};
  }

 private:
  std::size_t n_tx_;
  std::size_t body_len_;
  std::size_t cp_len_;
  ComplexVector data_;
};

/// Synthesizes the M transmit sequences with a cyclic prefix of n_cells - 1.
TxWaveformSet synthesize_tx(const SubcarrierWeights& weights, std::size_t n_cells);

/// 10 log10(max |x|^2 / mean |x|^2). Throws on empty or all-zero input.
double papr_db(std::span<const cplx> x);

}  // namespace cpofdm
