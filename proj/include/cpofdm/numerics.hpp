#pragma once

// Complex-vector primitives shared by every stage of the pipeline: unitary
// DFT/IDFT, a seeded complex Gaussian source and compensated summation.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <type_traits>
#include <vector>

namespace cpofdm {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

enum class Direction { forward, inverse };

/// Unitary DFT with 1/sqrt(N) scaling in both directions.
/// forward:  X(k) = N^{-1/2} sum_n x(n) exp(-j 2 pi n k / N)
/// inverse:  x(n) = N^{-1/2} sum_k X(k) exp(+j 2 pi n k / N)
/// Radix-2 for power-of-two lengths, Bluestein otherwise.
/// Throws std::invalid_argument on empty input.
ComplexVector dft_unitary(std::span<const cplx> x, Direction direction);

/// Direct O(N^2) evaluation of the same transform. Used as a reference.
ComplexVector dft_direct(std::span<const cplx> x, Direction direction);

/// Name of the pseudo-random algorithm behind complex_gaussian, recorded in
/// run metadata.
inline constexpr std::string_view kNoiseGenerator = "mt19937_64+box-muller";

/// n i.i.d. circularly-symmetric CN(0, variance) samples; real and imaginary
/// parts each carry variance/2. Bit-identical for a given seed.
ComplexVector complex_gaussian(std::size_t n, double variance, std::uint64_t seed);

/// splitmix64 finalizer, used to derive per-trial seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

/// Throws std::invalid_argument if x is empty or holds a NaN/Inf component.
void require_finite(std::span<const cplx> x, std::string_view what);

double power_db(double linear);
double magnitude_db(double magnitude);

/// Neumaier-compensated running sum.
template <typename T>
class CompensatedSum {
 public:
  void add(T value) {
    T t = sum_ + value;
    if constexpr (std::is_same_v<T, cplx>) {
      compensation_ += cplx(kahan_term(sum_.real(), value.real(), t.real()),
                            kahan_term(sum_.imag(), value.imag(), t.imag()));
    } else {
      compensation_ += kahan_term(sum_, value, t);
    }
    sum_ = t;
  }
  T value() const { return sum_ + compensation_; }

 private:
  static double kahan_term(double sum, double value, double t) {
    return std::abs(sum) >= std::abs(value) ? (sum - t) + value : (value - t) + sum;
  }
  T sum_{};
  T compensation_{};
};

}  // namespace cpofdm
