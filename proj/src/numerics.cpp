#include "cpofdm/numerics.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace cpofdm {
namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double direction_sign(Direction direction) {
  return direction == Direction::forward ? -1.0 : 1.0;
}

// exp(sign * j 2 pi i / n) for i in [0, n)
std::vector<cplx> unit_roots(std::size_t n, double sign) {
  std::vector<cplx> roots(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * kPi * static_cast<double>(i) / static_cast<double>(n);
    roots[i] = cplx(std::cos(angle), sign * std::sin(angle));
  }
  return roots;
}

// In-place unnormalized radix-2 transform, exponent sign given by `sign`.
void radix2(std::vector<cplx>& a, double sign) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  const auto roots = unit_roots(n, sign);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx t = roots[k * stride] * a[start + k + half];
        a[start + k + half] = a[start + k] - t;
        a[start + k] += t;
      }
    }
  }
}

// Chirp-z evaluation for arbitrary n, unnormalized.
std::vector<cplx> bluestein(std::span<const cplx> x, double sign) {
  const std::size_t n = x.size();
  std::size_t m = 1;
  while (m < 2 * n - 1) m <<= 1;

  // chirp[i] = exp(sign * j pi i^2 / n); i^2 reduced mod 2n keeps the angle small
  std::vector<cplx> chirp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t sq = i * i % (2 * n);
    const double angle = kPi * static_cast<double>(sq) / static_cast<double>(n);
    chirp[i] = cplx(std::cos(angle), sign * std::sin(angle));
  }

  std::vector<cplx> a(m), b(m);
  for (std::size_t i = 0; i < n; ++i) a[i] = x[i] * chirp[i];
  b[0] = std::conj(chirp[0]);
  for (std::size_t i = 1; i < n; ++i) b[i] = b[m - i] = std::conj(chirp[i]);

  radix2(a, -1.0);
  radix2(b, -1.0);
  for (std::size_t i = 0; i < m; ++i) a[i] *= b[i];
  radix2(a, 1.0);

  std::vector<cplx> out(n);
  const double inv_m = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * chirp[i] * inv_m;
  return out;
}

}  // namespace

ComplexVector dft_unitary(std::span<const cplx> x, Direction direction) {
  if (x.empty()) throw std::invalid_argument("dft_unitary: empty input");
  const double sign = direction_sign(direction);
  ComplexVector out;
  if (is_power_of_two(x.size())) {
    out.assign(x.begin(), x.end());
    radix2(out, sign);
  } else {
    out = bluestein(x, sign);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
  for (auto& v : out) v *= scale;
  return out;
}

ComplexVector dft_direct(std::span<const cplx> x, Direction direction) {
  if (x.empty()) throw std::invalid_argument("dft_direct: empty input");
  const std::size_t n = x.size();
  const auto roots = unit_roots(n, direction_sign(direction));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{};
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * roots[(i * k) % n];
    out[k] = acc * scale;
  }
  return out;
}

ComplexVector complex_gaussian(std::size_t n, double variance, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("complex_gaussian: n must be >= 1");
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("complex_gaussian: variance must be > 0");
  }
  std::mt19937_64 engine(seed);
  // uniform on (0, 1], 53-bit resolution
  auto uniform = [&engine] {
    return (static_cast<double>(engine() >> 11) + 1.0) * 0x1.0p-53;
  };
  const double scale = std::sqrt(variance);
  ComplexVector out(n);
  for (auto& v : out) {
    const double radius = std::sqrt(-std::log(uniform()));
    const double angle = 2.0 * kPi * uniform();
    v = cplx(scale * radius * std::cos(angle), scale * radius * std::sin(angle));
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

void require_finite(std::span<const cplx> x, std::string_view what) {
  if (x.empty()) throw std::invalid_argument(std::string(what) + ": empty vector");
  const bool finite = std::all_of(x.begin(), x.end(), [](const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
  if (!finite) throw std::invalid_argument(std::string(what) + ": non-finite element");
}

double power_db(double linear) { return 10.0 * std::log10(linear); }

double magnitude_db(double magnitude) { return 20.0 * std::log10(magnitude); }

}  // namespace cpofdm
