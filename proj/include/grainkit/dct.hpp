#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace grainkit::dct {

inline constexpr int kSize = 64;
inline constexpr int kArea = kSize * kSize;
// Basis constants are round(2^kMatrixBits * orthonormal DCT-II basis).
inline constexpr int kMatrixBits = 20;
// Coefficients (forward output, inverse input) are fixed point in the
// orthonormal scale with this many fractional bits.
inline constexpr int kCoeffFracBits = 8;

using Matrix64 = std::array<std::array<std::int32_t, kSize>, kSize>;

const Matrix64& matrix64();

// Integer 2-D 64x64 DCT-II. Row-major blocks. Samples are expected within
// +-2^10; all accumulation is 64-bit so there is no overflow for that domain.
void forward64(std::span<const std::int32_t, kArea> samples, std::span<std::int32_t, kArea> coeffs);
void inverse64(std::span<const std::int32_t, kArea> coeffs, std::span<std::int32_t, kArea> samples);

// Orthonormal floating-point DCT-II of size n x n (n <= 64) via separable
// basis products. Thread-safe after construction.
class FloatDct {
 public:
  explicit FloatDct(int n);

  int size() const { return n_; }
  // Basis value for frequency k at sample position x.
  double basis(int k, int x) const { return basis_[static_cast<std::size_t>(k) * n_ + x]; }

  void forward(std::span<const double> in, std::span<double> out) const;
  void inverse(std::span<const double> in, std::span<double> out) const;

 private:
  int n_;
  std::vector<double> basis_;
};

}  // namespace grainkit::dct
