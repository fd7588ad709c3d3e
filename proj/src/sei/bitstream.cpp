#include "grainkit/bitstream.hpp"

#include <bit>
#include <string>

#include "grainkit/error.hpp"

namespace grainkit {

void BitWriter::write_bits(std::uint32_t value, int count) {
  for (int i = count - 1; i >= 0; --i) {
    if (bits_ % 8 == 0) {
      bytes_.push_back(0);
    }
    if ((value >> i) & 1u) {
      bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (bits_ % 8));
    }
    ++bits_;
  }
}

void BitWriter::write_ue(std::uint32_t value) {
  const std::uint64_t code = static_cast<std::uint64_t>(value) + 1;
  const int length = std::bit_width(code) - 1;
  write_bits(0, length);
  // code has length+1 significant bits; write them in two halves to stay within 32.
  write_bits(1, 1);
  write_bits(static_cast<std::uint32_t>(code - (std::uint64_t{1} << length)), length);
}

void BitWriter::write_se(std::int32_t value) {
  const std::int64_t v = value;
  write_ue(static_cast<std::uint32_t>(v > 0 ? 2 * v - 1 : -2 * v));
}

void BitWriter::write_trailing_bits() {
  write_bits(1, 1);
  while (bits_ % 8 != 0) {
    write_bits(0, 1);
  }
}

std::uint32_t BitReader::read_bits(int count) {
  if (static_cast<std::size_t>(count) > bits_left()) {
    throw ValidationError("truncated SEI payload: need " + std::to_string(count) + " bit(s) at bit offset " +
                          std::to_string(pos_));
  }
  std::uint32_t value = 0;
  for (int i = 0; i < count; ++i) {
    const std::uint8_t byte = data_[pos_ / 8];
    value = (value << 1) | ((byte >> (7 - pos_ % 8)) & 1u);
    ++pos_;
  }
  return value;
}

std::uint32_t BitReader::read_ue() {
  const std::size_t start = pos_;
  int leading_zeros = 0;
  while (read_bits(1) == 0) {
    if (++leading_zeros > 31) {
      throw ValidationError("invalid exp-Golomb code at bit offset " + std::to_string(start));
    }
  }
  const std::uint64_t suffix = read_bits(leading_zeros);
  const std::uint64_t value = (std::uint64_t{1} << leading_zeros) - 1 + suffix;
  if (value > 0xFFFFFFFFull) {
    throw ValidationError("exp-Golomb value overflow at bit offset " + std::to_string(start));
  }
  return static_cast<std::uint32_t>(value);
}

std::int32_t BitReader::read_se() {
  const std::uint32_t k = read_ue();
  const std::int64_t magnitude = (static_cast<std::int64_t>(k) + 1) / 2;
  return static_cast<std::int32_t>((k & 1u) ? magnitude : -magnitude);
}

void BitReader::read_trailing_bits() {
  const std::size_t start = pos_;
  if (read_bits(1) != 1) {
    throw ValidationError("missing stop bit at bit offset " + std::to_string(start));
  }
  while (pos_ % 8 != 0) {
    if (read_bits(1) != 0) {
      throw ValidationError("non-zero alignment bit at bit offset " + std::to_string(pos_ - 1));
    }
  }
  if (bits_left() != 0) {
    throw ValidationError("trailing data after SEI payload at bit offset " + std::to_string(pos_));
  }
}

}  // namespace grainkit
