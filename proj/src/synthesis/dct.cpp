#include "grainkit/dct.hpp"

#include <cmath>
#include <numbers>

namespace grainkit::dct {

namespace {

constexpr Matrix64 kMatrix = {{
#include "dct64_table.inc"
}};

constexpr int kHalf = kSize / 2;

inline std::int64_t round_shift(std::int64_t v, int shift) {
  return (v + (std::int64_t{1} << (shift - 1))) >> shift;
}

// out[r][k] = round(sum_n T[k][n] * in[r][n] / 2^shift), written transposed
// (out[k][r]) so two calls give a full 2-D transform. Even/odd symmetry of the
// basis halves the multiply count.
void forward_pass(const std::int32_t* in, std::int32_t* out, int shift) {
  std::int64_t even[kHalf];
  std::int64_t odd[kHalf];
  for (int r = 0; r < kSize; ++r) {
    const std::int32_t* v = in + r * kSize;
    for (int n = 0; n < kHalf; ++n) {
      even[n] = static_cast<std::int64_t>(v[n]) + v[kSize - 1 - n];
      odd[n] = static_cast<std::int64_t>(v[n]) - v[kSize - 1 - n];
    }
    for (int k = 0; k < kSize; ++k) {
      const std::int64_t* src = (k & 1) ? odd : even;
      const std::int32_t* t = kMatrix[k].data();
      std::int64_t acc = 0;
      for (int n = 0; n < kHalf; ++n) {
        acc += static_cast<std::int64_t>(t[n]) * src[n];
      }
      out[k * kSize + r] = static_cast<std::int32_t>(round_shift(acc, shift));
    }
  }
}

// out[r][n] = round(sum_k T[k][n] * in[r][k] / 2^shift), written transposed.
void inverse_pass(const std::int32_t* in, std::int32_t* out, int shift) {
  std::int64_t even[kHalf];
  std::int64_t odd[kHalf];
  for (int r = 0; r < kSize; ++r) {
    const std::int32_t* c = in + r * kSize;
    for (int n = 0; n < kHalf; ++n) {
      even[n] = 0;
      odd[n] = 0;
    }
    for (int k = 0; k < kSize; k += 2) {
      const std::int64_t ce = c[k];
      const std::int64_t co = c[k + 1];
      const std::int32_t* te = kMatrix[k].data();
      const std::int32_t* to = kMatrix[k + 1].data();
      for (int n = 0; n < kHalf; ++n) {
        even[n] += static_cast<std::int64_t>(te[n]) * ce;
        odd[n] += static_cast<std::int64_t>(to[n]) * co;
      }
    }
    for (int n = 0; n < kHalf; ++n) {
      out[n * kSize + r] = static_cast<std::int32_t>(round_shift(even[n] + odd[n], shift));
      out[(kSize - 1 - n) * kSize + r] = static_cast<std::int32_t>(round_shift(even[n] - odd[n], shift));
    }
  }
}

}  // namespace

const Matrix64& matrix64() { return kMatrix; }

void forward64(std::span<const std::int32_t, kArea> samples, std::span<std::int32_t, kArea> coeffs) {
  std::array<std::int32_t, kArea> tmp;
  // Rows first (result transposed), then the former columns.
  forward_pass(samples.data(), tmp.data(), kMatrixBits - kCoeffFracBits);
  forward_pass(tmp.data(), coeffs.data(), kMatrixBits);
}

void inverse64(std::span<const std::int32_t, kArea> coeffs, std::span<std::int32_t, kArea> samples) {
  std::array<std::int32_t, kArea> tmp;
  inverse_pass(coeffs.data(), tmp.data(), kMatrixBits);
  inverse_pass(tmp.data(), samples.data(), kMatrixBits + kCoeffFracBits);
}

FloatDct::FloatDct(int n) : n_(n), basis_(static_cast<std::size_t>(n) * n) {
  for (int k = 0; k < n; ++k) {
    const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n);
    for (int x = 0; x < n; ++x) {
      basis_[static_cast<std::size_t>(k) * n + x] = scale * std::cos(std::numbers::pi * (2 * x + 1) * k / (2.0 * n));
    }
  }
}

void FloatDct::forward(std::span<const double> in, std::span<double> out) const {
  const int n = n_;
  std::array<double, kArea> tmp;
  // tmp[y][k] = sum_x B[k][x] in[y][x]
  for (int y = 0; y < n; ++y) {
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int x = 0; x < n; ++x) {
        acc += basis(k, x) * in[static_cast<std::size_t>(y) * n + x];
      }
      tmp[static_cast<std::size_t>(y) * n + k] = acc;
    }
  }
  // out[l][k] = sum_y B[l][y] tmp[y][k]
  for (int l = 0; l < n; ++l) {
    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int y = 0; y < n; ++y) {
        acc += basis(l, y) * tmp[static_cast<std::size_t>(y) * n + k];
      }
      out[static_cast<std::size_t>(l) * n + k] = acc;
    }
  }
}

void FloatDct::inverse(std::span<const double> in, std::span<double> out) const {
  const int n = n_;
  std::array<double, kArea> tmp;
  // tmp[l][x] = sum_k B[k][x] in[l][k]
  for (int l = 0; l < n; ++l) {
    for (int x = 0; x < n; ++x) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) {
        acc += basis(k, x) * in[static_cast<std::size_t>(l) * n + k];
      }
      tmp[static_cast<std::size_t>(l) * n + x] = acc;
    }
  }
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      double acc = 0.0;
      for (int l = 0; l < n; ++l) {
        acc += basis(l, y) * tmp[static_cast<std::size_t>(l) * n + x];
      }
      out[static_cast<std::size_t>(y) * n + x] = acc;
    }
  }
}

}  // namespace grainkit::dct
