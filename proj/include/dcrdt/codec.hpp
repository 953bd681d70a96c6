#ifndef DCRDT_CODEC_HPP
#define DCRDT_CODEC_HPP

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dcrdt {

// Wire tags. Every encoded value starts with its tag byte; decoding is typed,
// so tags act as integrity checks rather than self-description.
enum class Tag : uint8_t {
  u64 = 0x01,
  i64 = 0x02,
  boolean = 0x03,
  text = 0x04,
  replica = 0x05,
  dot = 0x06,

  pair = 0x10,
  lex_pair = 0x11,
  max_value = 0x12,

  gcounter = 0x20,
  pncounter = 0x21,
  lexcounter = 0x22,
  gset = 0x23,
  twopset = 0x24,
  awlwwset = 0x25,

  causal_context = 0x30,
  dot_set = 0x31,
  dot_fun = 0x32,
  dot_map = 0x33,
  causal = 0x34,

  ewflag = 0x40,
  mvreg = 0x41,
  awset = 0x42,
  rwset = 0x43,
  ormap = 0x44,

  msg_basic = 0x50,
  msg_delta = 0x51,
  msg_ack = 0x52,

  snapshot = 0x60,
};

inline bool known_tag(uint8_t b) {
  switch (static_cast<Tag>(b)) {
    case Tag::u64:
    case Tag::i64:
    case Tag::boolean:
    case Tag::text:
    case Tag::replica:
    case Tag::dot:
    case Tag::pair:
    case Tag::lex_pair:
    case Tag::max_value:
    case Tag::gcounter:
    case Tag::pncounter:
    case Tag::lexcounter:
    case Tag::gset:
    case Tag::twopset:
    case Tag::awlwwset:
    case Tag::causal_context:
    case Tag::dot_set:
    case Tag::dot_fun:
    case Tag::dot_map:
    case Tag::causal:
    case Tag::ewflag:
    case Tag::mvreg:
    case Tag::awset:
    case Tag::rwset:
    case Tag::ormap:
    case Tag::msg_basic:
    case Tag::msg_delta:
    case Tag::msg_ack:
    case Tag::snapshot:
      return true;
  }
  return false;
}

class codec_error : public std::runtime_error {
 public:
  codec_error(const std::string& what, size_t offset)
      : std::runtime_error(what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// Deterministic byte sink. Naturals are fixed-width big-endian, strings are
// length-prefixed, so the encoding of a value never depends on how it was
// constructed.
class Encoder {
 public:
  void clear() { buf_.clear(); }

  void tag(Tag t) { buf_.push_back(static_cast<char>(t)); }

  void u64(uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) {
      buf_.push_back(static_cast<char>((v >> shift) & 0xff));
    }
  }

  void i64(int64_t v) { u64(static_cast<uint64_t>(v)); }

  void boolean(bool b) { buf_.push_back(b ? '\x01' : '\x00'); }

  void text(std::string_view s) {
    u64(s.size());
    buf_.append(s.data(), s.size());
  }

  const std::string& bytes() const { return buf_; }
  size_t size() const { return buf_.size(); }

 private:
  std::string buf_;
};

class Decoder {
 public:
  explicit Decoder(std::string_view in) : in_(in) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw codec_error(what, pos_);
  }

  void expect(Tag t) {
    uint8_t b = byte();
    if (b == static_cast<uint8_t>(t)) return;
    pos_ -= 1;
    if (!known_tag(b)) fail("unknown type tag 0x" + hex_byte(b));
    fail("type tag mismatch: expected 0x" +
         hex_byte(static_cast<uint8_t>(t)) + ", found 0x" + hex_byte(b));
  }

  // Looks at the next tag without consuming it.
  Tag peek_tag() const {
    need(1, "unexpected end of input");
    uint8_t b = static_cast<uint8_t>(in_[pos_]);
    if (!known_tag(b)) fail("unknown type tag 0x" + hex_byte(b));
    return static_cast<Tag>(b);
  }

  uint64_t u64() {
    need(8, "truncated u64");
    uint64_t v = 0;
    for (int k = 0; k < 8; ++k) {
      v = (v << 8) | static_cast<uint8_t>(in_[pos_ + k]);
    }
    pos_ += 8;
    return v;
  }

  int64_t i64() { return static_cast<int64_t>(u64()); }

  bool boolean() {
    uint8_t b = byte();
    if (b > 1) {
      pos_ -= 1;
      fail("invalid boolean byte");
    }
    return b == 1;
  }

  std::string text() {
    uint64_t n = count("string length");
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }

  // Reads a u64 count and rejects counts that cannot fit in the remaining
  // input, so malformed headers fail instead of driving huge allocations.
  uint64_t count(const char* what) {
    uint64_t n = u64();
    if (n > remaining()) fail(std::string(what) + " exceeds input");
    return n;
  }

  size_t remaining() const { return in_.size() - pos_; }
  size_t offset() const { return pos_; }
  bool done() const { return pos_ == in_.size(); }

  void expect_done() {
    if (!done()) fail("trailing bytes after value");
  }

 private:
  uint8_t byte() {
    need(1, "unexpected end of input");
    return static_cast<uint8_t>(in_[pos_++]);
  }

  void need(size_t n, const char* what) const {
    if (in_.size() - pos_ < n) throw codec_error(what, pos_);
  }

  static std::string hex_byte(uint8_t b) {
    static const char* digits = "0123456789abcdef";
    return {digits[b >> 4], digits[b & 0xf]};
  }

  std::string_view in_;
  size_t pos_ = 0;
};

// Scalar element codec, specialized per key/element type usable inside
// sets and maps.
template <typename T>
struct ScalarCodec;

template <>
struct ScalarCodec<uint64_t> {
  static void encode(Encoder& e, uint64_t v) {
    e.tag(Tag::u64);
    e.u64(v);
  }
  static uint64_t decode(Decoder& d) {
    d.expect(Tag::u64);
    return d.u64();
  }
};

template <>
struct ScalarCodec<std::string> {
  static void encode(Encoder& e, const std::string& s) {
    e.tag(Tag::text);
    e.text(s);
  }
  static std::string decode(Decoder& d) {
    d.expect(Tag::text);
    return d.text();
  }
};

template <>
struct ScalarCodec<bool> {
  static void encode(Encoder& e, bool b) {
    e.tag(Tag::boolean);
    e.boolean(b);
  }
  static bool decode(Decoder& d) {
    d.expect(Tag::boolean);
    return d.boolean();
  }
};

template <typename T>
std::string encode_bytes(const T& v) {
  Encoder e;
  v.encode(e);
  return e.bytes();
}

template <typename T>
size_t encoded_size(const T& v) {
  thread_local Encoder e;
  e.clear();
  v.encode(e);
  return e.size();
}

template <typename T>
T decode_bytes(std::string_view bytes) {
  Decoder d(bytes);
  T v = T::decode(d);
  d.expect_done();
  return v;
}

// 128-bit FNV-1a over the canonical encoding; used for state digests.
struct Digest {
  uint64_t hi = 0;
  uint64_t lo = 0;

  bool operator==(const Digest&) const = default;

  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out(32, '0');
    uint64_t parts[2] = {hi, lo};
    for (int p = 0; p < 2; ++p) {
      for (int k = 0; k < 16; ++k) {
        out[p * 16 + k] = digits[(parts[p] >> (60 - 4 * k)) & 0xf];
      }
    }
    return out;
  }
};

inline Digest digest_bytes(std::string_view bytes) {
  using u128 = unsigned __int128;
  u128 hash = (u128(0x6c62272e07bb0142ULL) << 64) | 0x62b821756295c58dULL;
  const u128 prime = (u128(0x0000000001000000ULL) << 64) | 0x000000000000013bULL;
  for (char c : bytes) {
    hash ^= static_cast<uint8_t>(c);
    hash *= prime;
  }
  return {static_cast<uint64_t>(hash >> 64), static_cast<uint64_t>(hash)};
}

template <typename T>
std::string digest_hex(const T& v) {
  return digest_bytes(encode_bytes(v)).hex();
}

}  // namespace dcrdt

#endif  // DCRDT_CODEC_HPP
