#include "grainkit/sidecar.hpp"

#include <array>
#include <fstream>
#include <string>

#include "grainkit/error.hpp"

namespace grainkit {

void write_sidecar_record(std::ostream& out, const SeiRecord& record) {
  if (record.payload.size() > 0xFFFF) {
    throw IoError("SEI payload of " + std::to_string(record.payload.size()) + " bytes exceeds the u16 length field");
  }
  const std::uint32_t idx = record.frame_index;
  const auto len = static_cast<std::uint16_t>(record.payload.size());
  const std::array<std::uint8_t, 6> head = {
      static_cast<std::uint8_t>(idx), static_cast<std::uint8_t>(idx >> 8),  static_cast<std::uint8_t>(idx >> 16),
      static_cast<std::uint8_t>(idx >> 24), static_cast<std::uint8_t>(len), static_cast<std::uint8_t>(len >> 8)};
  out.write(reinterpret_cast<const char*>(head.data()), head.size());
  out.write(reinterpret_cast<const char*>(record.payload.data()), static_cast<std::streamsize>(len));
  if (!out) {
    throw IoError("failed to write sidecar record for frame " + std::to_string(idx));
  }
}

std::optional<SeiRecord> read_sidecar_record(std::istream& in) {
  std::array<std::uint8_t, 6> head{};
  in.read(reinterpret_cast<char*>(head.data()), head.size());
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got == 0) {
    return std::nullopt;
  }
  if (got != head.size()) {
    throw IoError("truncated sidecar record header (" + std::to_string(got) + " of 6 bytes)");
  }
  SeiRecord rec;
  rec.frame_index = static_cast<std::uint32_t>(head[0]) | (static_cast<std::uint32_t>(head[1]) << 8) |
                    (static_cast<std::uint32_t>(head[2]) << 16) | (static_cast<std::uint32_t>(head[3]) << 24);
  const std::size_t len = static_cast<std::size_t>(head[4]) | (static_cast<std::size_t>(head[5]) << 8);
  rec.payload.resize(len);
  in.read(reinterpret_cast<char*>(rec.payload.data()), static_cast<std::streamsize>(len));
  if (static_cast<std::size_t>(in.gcount()) != len) {
    throw IoError("truncated sidecar payload for frame " + std::to_string(rec.frame_index));
  }
  return rec;
}

std::vector<SeiRecord> read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open sidecar '" + path.string() + "'");
  }
  std::vector<SeiRecord> records;
  while (auto r = read_sidecar_record(in)) {
    records.push_back(std::move(*r));
  }
  return records;
}

void write_sidecar(const std::filesystem::path& path, const std::vector<SeiRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot create sidecar '" + path.string() + "'");
  }
  for (const auto& r : records) {
    write_sidecar_record(out, r);
  }
}

}  // namespace grainkit
