#ifndef DCRDT_SNAPSHOT_HPP
#define DCRDT_SNAPSHOT_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>

#include "dcrdt/codec.hpp"

namespace dcrdt {

// File-backed durable store. Each put writes a complete snapshot to a
// temporary file and renames it over the target, so a crash leaves either
// the previous snapshot or the new one, never a torn write.
//
// Snapshot layout: magic, format version, payload type tag, then the
// canonical encoding of the durable payload.
class FileSnapshotStore {
 public:
  static constexpr uint64_t kMagic = 0x64435244534e5031ULL;  // "dCRDSNP1"
  static constexpr uint64_t kVersion = 1;

  explicit FileSnapshotStore(std::filesystem::path path)
      : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }

  void put_atomic(Tag payload_tag, std::string_view payload) const {
    Encoder e;
    e.tag(Tag::snapshot);
    e.u64(kMagic);
    e.u64(kVersion);
    e.tag(payload_tag);
    e.u64(payload.size());

    std::filesystem::path tmp = path_;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open " + tmp.string());
      out.write(e.bytes().data(), static_cast<std::streamsize>(e.size()));
      out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
      out.flush();
      if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path_);
  }

  struct Snapshot {
    Tag payload_tag;
    std::string payload;
  };

  std::optional<Snapshot> load() const {
    std::ifstream in(path_, std::ios::binary);
    if (!in) return std::nullopt;
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    Decoder d(bytes);
    d.expect(Tag::snapshot);
    if (d.u64() != kMagic) d.fail("bad snapshot magic");
    if (d.u64() != kVersion) d.fail("unsupported snapshot version");
    Tag tag = d.peek_tag();
    d.expect(tag);
    uint64_t n = d.count("snapshot payload length");
    if (n != d.remaining()) d.fail("snapshot payload length mismatch");
    Snapshot s;
    s.payload_tag = tag;
    s.payload = bytes.substr(bytes.size() - d.remaining(), n);
    return s;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace dcrdt

#endif  // DCRDT_SNAPSHOT_HPP
