#ifndef DCRDT_SETS_HPP
#define DCRDT_SETS_HPP

#include <cstdint>
#include <map>
#include <set>

#include "dcrdt/lattice.hpp"

namespace dcrdt {

// Grow-only set; join is union. The insert delta is just the singleton.
template <Element E>
class GSet {
 public:
  GSet() = default;
  explicit GSet(std::set<E> items) : items_(std::move(items)) {}

  static GSet insert_delta(const E& e, const GSet&) { return GSet({e}); }

  bool contains(const E& e) const { return items_.count(e) != 0; }
  const std::set<E>& elements() const { return items_; }
  size_t size() const { return items_.size(); }

  bool join_with(const GSet& o) {
    bool changed = false;
    for (const E& e : o.items_) {
      changed |= items_.insert(e).second;
    }
    return changed;
  }

  bool leq(const GSet& o) const {
    for (const E& e : items_) {
      if (!o.contains(e)) return false;
    }
    return true;
  }

  bool operator==(const GSet&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::gset);
    e.u64(items_.size());
    for (const E& x : items_) ScalarCodec<E>::encode(e, x);
  }

  static GSet decode(Decoder& d) {
    d.expect(Tag::gset);
    GSet s;
    uint64_t n = d.count("GSet element count");
    for (uint64_t k = 0; k < n; ++k) {
      E x = ScalarCodec<E>::decode(d);
      if (!s.items_.empty() && !(*s.items_.rbegin() < x)) {
        d.fail("GSet elements out of order");
      }
      s.items_.insert(s.items_.end(), std::move(x));
    }
    return s;
  }

 private:
  std::set<E> items_;
};

// Two-phase set: a pair of grow-only sets for added and removed elements.
// Removal is permanent; a removed element can never be re-added.
template <Element E>
class TwoPSet {
 public:
  TwoPSet() = default;
  TwoPSet(GSet<E> added, GSet<E> removed)
      : added_(std::move(added)), removed_(std::move(removed)) {}

  static TwoPSet insert_delta(const E& e, const TwoPSet&) {
    return TwoPSet(GSet<E>({e}), GSet<E>{});
  }

  static TwoPSet remove_delta(const E& e, const TwoPSet&) {
    return TwoPSet(GSet<E>{}, GSet<E>({e}));
  }

  bool contains(const E& e) const {
    return added_.contains(e) && !removed_.contains(e);
  }

  std::set<E> elements() const {
    std::set<E> out;
    for (const E& e : added_.elements()) {
      if (!removed_.contains(e)) out.insert(out.end(), e);
    }
    return out;
  }

  const GSet<E>& added() const { return added_; }
  const GSet<E>& removed() const { return removed_; }

  bool join_with(const TwoPSet& o) {
    bool a = added_.join_with(o.added_);
    bool b = removed_.join_with(o.removed_);
    return a || b;
  }

  bool leq(const TwoPSet& o) const {
    return added_.leq(o.added_) && removed_.leq(o.removed_);
  }

  bool operator==(const TwoPSet&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::twopset);
    added_.encode(e);
    removed_.encode(e);
  }

  static TwoPSet decode(Decoder& d) {
    d.expect(Tag::twopset);
    GSet<E> added = GSet<E>::decode(d);
    GSet<E> removed = GSet<E>::decode(d);
    return TwoPSet(std::move(added), std::move(removed));
  }

 private:
  GSet<E> added_;
  GSet<E> removed_;
};

// Add-wins last-writer-wins set. Elements are tagged with a caller-supplied
// timestamp and a presence flag; higher timestamps win and ties resolve to
// presence because false < true under the boolean join.
template <Element E>
class AWLWWSet {
 public:
  using Entry = LexPair<MaxNat, BoolOr>;

  AWLWWSet() = default;

  // The caller is responsible for supplying monotone timestamps; the library
  // never reorders them. See LwwClock for a per-process helper.
  static AWLWWSet insert_delta(const E& e, uint64_t t, const AWLWWSet&) {
    return tagged(e, t, true);
  }

  static AWLWWSet remove_delta(const E& e, uint64_t t, const AWLWWSet&) {
    return tagged(e, t, false);
  }

  bool contains(const E& e) const {
    auto it = entries_.find(e);
    return it != entries_.end() && it->second.second.value;
  }

  std::set<E> elements() const {
    std::set<E> out;
    for (const auto& [e, p] : entries_) {
      if (p.second.value) out.insert(out.end(), e);
    }
    return out;
  }

  Entry entry(const E& e) const {
    auto it = entries_.find(e);
    return it == entries_.end() ? Entry{} : it->second;
  }

  const std::map<E, Entry>& entries() const { return entries_; }

  bool join_with(const AWLWWSet& o) {
    bool changed = false;
    for (const auto& [e, p] : o.entries_) {
      auto [it, inserted] = entries_.emplace(e, p);
      if (inserted) {
        changed = true;
      } else if (it->second.join_with(p)) {
        changed = true;
      }
    }
    return changed;
  }

  bool operator==(const AWLWWSet&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::awlwwset);
    e.u64(entries_.size());
    for (const auto& [x, p] : entries_) {
      ScalarCodec<E>::encode(e, x);
      p.encode(e);
    }
  }

  static AWLWWSet decode(Decoder& d) {
    d.expect(Tag::awlwwset);
    AWLWWSet s;
    uint64_t n = d.count("AWLWWSet entry count");
    for (uint64_t k = 0; k < n; ++k) {
      E x = ScalarCodec<E>::decode(d);
      Entry p = Entry::decode(d);
      if (!s.entries_.empty() && !(s.entries_.rbegin()->first < x)) {
        d.fail("AWLWWSet keys out of order");
      }
      s.entries_.emplace_hint(s.entries_.end(), std::move(x), p);
    }
    return s;
  }

 private:
  static AWLWWSet tagged(const E& e, uint64_t t, bool present) {
    AWLWWSet d;
    d.entries_[e] = Entry{MaxNat{t}, BoolOr{present}};
    return d;
  }

  std::map<E, Entry> entries_;
};

// Per-process monotone timestamp source for LWW clients. next() never
// repeats or goes backwards; observe() folds in timestamps seen elsewhere.
class LwwClock {
 public:
  uint64_t next() { return ++last_; }

  void observe(uint64_t t) {
    if (t > last_) last_ = t;
  }

  uint64_t last() const { return last_; }

 private:
  uint64_t last_ = 0;
};

}  // namespace dcrdt

#endif  // DCRDT_SETS_HPP
