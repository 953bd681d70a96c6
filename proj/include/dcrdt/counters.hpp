#ifndef DCRDT_COUNTERS_HPP
#define DCRDT_COUNTERS_HPP

#include <cstdint>
#include <map>
#include <stdexcept>

#include "dcrdt/lattice.hpp"

namespace dcrdt {

// Grow-only counter: per-replica increment tallies, join is pointwise max.
// Zero-valued entries are never materialized; an unmapped replica reads 0.
class GCounter {
 public:
  GCounter() = default;

  static GCounter from_entries(std::map<ReplicaId, uint64_t> entries) {
    for (const auto& [id, n] : entries) {
      if (n == 0) throw std::invalid_argument("GCounter entry must be positive");
    }
    GCounter c;
    c.entries_ = std::move(entries);
    return c;
  }

  // inc returns just the updated entry: {i ↦ m(i)+1}.
  static GCounter inc_delta(const ReplicaId& i, const GCounter& m) {
    GCounter d;
    d.entries_[i] = m.entry(i) + 1;
    return d;
  }

  uint64_t entry(const ReplicaId& i) const {
    auto it = entries_.find(i);
    return it == entries_.end() ? 0 : it->second;
  }

  uint64_t value() const {
    uint64_t sum = 0;
    for (const auto& [id, n] : entries_) sum += n;
    return sum;
  }

  size_t entry_count() const { return entries_.size(); }
  const std::map<ReplicaId, uint64_t>& entries() const { return entries_; }

  bool join_with(const GCounter& o) {
    bool changed = false;
    for (const auto& [id, n] : o.entries_) {
      auto [it, inserted] = entries_.emplace(id, n);
      if (inserted) {
        changed = true;
      } else if (it->second < n) {
        it->second = n;
        changed = true;
      }
    }
    return changed;
  }

  bool leq(const GCounter& o) const {
    for (const auto& [id, n] : entries_) {
      if (n > o.entry(id)) return false;
    }
    return true;
  }

  bool operator==(const GCounter&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::gcounter);
    e.u64(entries_.size());
    for (const auto& [id, n] : entries_) {
      ScalarCodec<ReplicaId>::encode(e, id);
      e.u64(n);
    }
  }

  static GCounter decode(Decoder& d) {
    d.expect(Tag::gcounter);
    GCounter c;
    uint64_t n = d.count("GCounter entry count");
    const ReplicaId* prev = nullptr;
    for (uint64_t k = 0; k < n; ++k) {
      ReplicaId id = ScalarCodec<ReplicaId>::decode(d);
      uint64_t v = d.u64();
      if (v == 0) d.fail("GCounter entry is zero");
      if (prev && !(*prev < id)) d.fail("GCounter keys out of order");
      prev = &entries_insert(c, std::move(id), v);
    }
    return c;
  }

 private:
  static const ReplicaId& entries_insert(GCounter& c, ReplicaId id, uint64_t v) {
    auto it = c.entries_.emplace_hint(c.entries_.end(), std::move(id), v);
    return it->first;
  }

  std::map<ReplicaId, uint64_t> entries_;
};

// Positive-negative counter: a pair of grow-only counters, one for
// increments and one for decrements.
class PNCounter {
 public:
  PNCounter() = default;
  PNCounter(GCounter pos, GCounter neg)
      : pos_(std::move(pos)), neg_(std::move(neg)) {}

  static PNCounter inc_delta(const ReplicaId& i, const PNCounter& m) {
    return PNCounter(GCounter::inc_delta(i, m.pos_), GCounter{});
  }

  static PNCounter dec_delta(const ReplicaId& i, const PNCounter& m) {
    return PNCounter(GCounter{}, GCounter::inc_delta(i, m.neg_));
  }

  int64_t value() const {
    return static_cast<int64_t>(pos_.value()) -
           static_cast<int64_t>(neg_.value());
  }

  const GCounter& pos() const { return pos_; }
  const GCounter& neg() const { return neg_; }

  bool join_with(const PNCounter& o) {
    bool a = pos_.join_with(o.pos_);
    bool b = neg_.join_with(o.neg_);
    return a || b;
  }

  bool leq(const PNCounter& o) const {
    return pos_.leq(o.pos_) && neg_.leq(o.neg_);
  }

  bool operator==(const PNCounter&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::pncounter);
    pos_.encode(e);
    neg_.encode(e);
  }

  static PNCounter decode(Decoder& d) {
    d.expect(Tag::pncounter);
    GCounter pos = GCounter::decode(d);
    GCounter neg = GCounter::decode(d);
    return PNCounter(std::move(pos), std::move(neg));
  }

 private:
  GCounter pos_;
  GCounter neg_;
};

// Counter over lexicographic pairs, as used by Cassandra-style counters.
// Each entry pairs a decrement epoch with the running value; decrements bump
// the epoch so the decremented value wins the lexicographic join. Entry
// arithmetic is componentwise addition, which is distinct from the join.
class LexCounter {
 public:
  using Entry = LexPair<MaxNat, MaxInt>;

  LexCounter() = default;

  static LexCounter from_entries(std::map<ReplicaId, Entry> entries) {
    for (const auto& [id, p] : entries) {
      if (p == Entry{}) throw std::invalid_argument("LexCounter entry is bottom");
    }
    LexCounter c;
    c.entries_ = std::move(entries);
    return c;
  }

  static LexCounter inc_delta(const ReplicaId& i, const LexCounter& m) {
    return shifted(i, m, 0, 1);
  }

  static LexCounter dec_delta(const ReplicaId& i, const LexCounter& m) {
    return shifted(i, m, 1, -1);
  }

  Entry entry(const ReplicaId& i) const {
    auto it = entries_.find(i);
    return it == entries_.end() ? Entry{} : it->second;
  }

  int64_t value() const {
    int64_t sum = 0;
    for (const auto& [id, p] : entries_) sum += p.second.value;
    return sum;
  }

  size_t entry_count() const { return entries_.size(); }
  const std::map<ReplicaId, Entry>& entries() const { return entries_; }

  bool join_with(const LexCounter& o) {
    bool changed = false;
    for (const auto& [id, p] : o.entries_) {
      auto [it, inserted] = entries_.emplace(id, p);
      if (inserted) {
        changed = true;
      } else if (it->second.join_with(p)) {
        changed = true;
      }
    }
    return changed;
  }

  bool operator==(const LexCounter&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::lexcounter);
    e.u64(entries_.size());
    for (const auto& [id, p] : entries_) {
      ScalarCodec<ReplicaId>::encode(e, id);
      p.encode(e);
    }
  }

  static LexCounter decode(Decoder& d) {
    d.expect(Tag::lexcounter);
    LexCounter c;
    uint64_t n = d.count("LexCounter entry count");
    const ReplicaId* prev = nullptr;
    for (uint64_t k = 0; k < n; ++k) {
      ReplicaId id = ScalarCodec<ReplicaId>::decode(d);
      Entry p = Entry::decode(d);
      if (p == Entry{}) d.fail("LexCounter entry is bottom");
      if (prev && !(*prev < id)) d.fail("LexCounter keys out of order");
      auto it = c.entries_.emplace_hint(c.entries_.end(), std::move(id), p);
      prev = &it->first;
    }
    return c;
  }

 private:
  static LexCounter shifted(const ReplicaId& i, const LexCounter& m,
                            uint64_t dfirst, int64_t dsecond) {
    Entry cur = m.entry(i);
    Entry next{MaxNat{cur.first.value + dfirst},
               MaxInt{cur.second.value + dsecond}};
    LexCounter d;
    d.entries_[i] = next;
    return d;
  }

  std::map<ReplicaId, Entry> entries_;
};

}  // namespace dcrdt

#endif  // DCRDT_COUNTERS_HPP
