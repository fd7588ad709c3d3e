#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace grainkit {

// One FGC SEI payload bound to a frame. On disk (".fgs"): a plain sequence of
// records, each { frame_index u32 LE, payload_len u16 LE, payload bytes }.
struct SeiRecord {
  std::uint32_t frame_index = 0;
  std::vector<std::uint8_t> payload;

  bool operator==(const SeiRecord&) const = default;
};

void write_sidecar_record(std::ostream& out, const SeiRecord& record);

// Returns nullopt at a clean end of stream; throws IoError on a truncated record.
std::optional<SeiRecord> read_sidecar_record(std::istream& in);

std::vector<SeiRecord> read_sidecar(const std::filesystem::path& path);
void write_sidecar(const std::filesystem::path& path, const std::vector<SeiRecord>& records);

}  // namespace grainkit
