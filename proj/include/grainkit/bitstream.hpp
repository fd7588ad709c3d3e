#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace grainkit {

// MSB-first bit writer with H.26x-style exp-Golomb codes.
class BitWriter {
 public:
  void write_bits(std::uint32_t value, int count);
  void write_flag(bool flag) { write_bits(flag ? 1u : 0u, 1); }
  void write_ue(std::uint32_t value);
  void write_se(std::int32_t value);
  // rbsp_trailing_bits: a stop bit then zero bits up to the byte boundary.
  void write_trailing_bits();

  std::size_t bit_count() const { return bits_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

// Reads what BitWriter produces. Every failure throws ValidationError naming
// the bit offset at which it happened.
class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint32_t read_bits(int count);
  bool read_flag() { return read_bits(1) != 0; }
  std::uint32_t read_ue();
  std::int32_t read_se();
  void read_trailing_bits();

  std::size_t position() const { return pos_; }
  std::size_t bits_left() const { return data_.size() * 8 - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace grainkit
