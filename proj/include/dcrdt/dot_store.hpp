#ifndef DCRDT_DOT_STORE_HPP
#define DCRDT_DOT_STORE_HPP

#include <map>
#include <set>

#include "dcrdt/causal_context.hpp"
#include "dcrdt/lattice.hpp"

namespace dcrdt {

// A dot store is the data container of a causal state: it holds the live
// dots (and any per-dot payload) and can enumerate them. The lattice is not
// on the store alone but on the (store, context) pair; see Causal<T> below.
template <typename T>
concept DotStoreType =
    std::regular<T> &&
    requires(const T& s, std::set<Dot>& out, const CausalContext& c) {
      s.collect_dots(out);
      { s.is_bottom() } -> std::convertible_to<bool>;
      { T::causal_join(s, c, s, c) } -> std::same_as<T>;
    };

template <typename S>
std::set<Dot> dots(const S& store) {
  std::set<Dot> out;
  store.collect_dots(out);
  return out;
}

// Plain set of dots.
class DotSet {
 public:
  DotSet() = default;
  explicit DotSet(std::set<Dot> dots) : dots_(std::move(dots)) {}

  static DotSet singleton(const Dot& d) { return DotSet({d}); }

  void add(const Dot& d) { dots_.insert(d); }
  bool contains(const Dot& d) const { return dots_.count(d) != 0; }
  size_t size() const { return dots_.size(); }
  const std::set<Dot>& set() const { return dots_; }

  bool is_bottom() const { return dots_.empty(); }
  void collect_dots(std::set<Dot>& out) const {
    out.insert(dots_.begin(), dots_.end());
  }

  // (s ∩ s') ∪ (s ∖ c') ∪ (s' ∖ c): a dot present on one side only survives
  // iff the other side has not seen it.
  static DotSet causal_join(const DotSet& a, const CausalContext& ca,
                            const DotSet& b, const CausalContext& cb) {
    DotSet out;
    for (const Dot& d : a.dots_) {
      if (b.contains(d) || !cb.contains(d)) out.dots_.insert(out.dots_.end(), d);
    }
    for (const Dot& d : b.dots_) {
      if (!a.contains(d) && !ca.contains(d)) out.dots_.insert(d);
    }
    return out;
  }

  bool operator==(const DotSet&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::dot_set);
    e.u64(dots_.size());
    for (const Dot& d : dots_) ScalarCodec<Dot>::encode(e, d);
  }

  static DotSet decode(Decoder& d) {
    d.expect(Tag::dot_set);
    DotSet s;
    uint64_t n = d.count("DotSet dot count");
    for (uint64_t k = 0; k < n; ++k) {
      Dot dot = ScalarCodec<Dot>::decode(d);
      if (!s.dots_.empty() && !(*s.dots_.rbegin() < dot)) {
        d.fail("DotSet dots out of order");
      }
      s.dots_.insert(s.dots_.end(), std::move(dot));
    }
    return s;
  }

 private:
  std::set<Dot> dots_;
};

// Map from dots to values of some lattice V; entries never hold bottom.
template <Lattice V>
class DotFun {
 public:
  DotFun() = default;

  void put(const Dot& d, V v) {
    if (is_bottom_value(v)) return;
    entries_[d] = std::move(v);
  }

  bool contains(const Dot& d) const { return entries_.count(d) != 0; }
  size_t size() const { return entries_.size(); }
  const std::map<Dot, V>& entries() const { return entries_; }

  bool is_bottom() const { return entries_.empty(); }
  void collect_dots(std::set<Dot>& out) const {
    for (const auto& [d, v] : entries_) out.insert(d);
  }

  // Dots in common join their values; one-sided dots survive iff unseen by
  // the other context.
  static DotFun causal_join(const DotFun& a, const CausalContext& ca,
                            const DotFun& b, const CausalContext& cb) {
    DotFun out;
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    while (ia != a.entries_.end() || ib != b.entries_.end()) {
      if (ib == b.entries_.end() ||
          (ia != a.entries_.end() && ia->first < ib->first)) {
        if (!cb.contains(ia->first)) out.entries_.emplace(ia->first, ia->second);
        ++ia;
      } else if (ia == a.entries_.end() || ib->first < ia->first) {
        if (!ca.contains(ib->first)) out.entries_.emplace(ib->first, ib->second);
        ++ib;
      } else {
        out.entries_.emplace(ia->first, join(ia->second, ib->second));
        ++ia;
        ++ib;
      }
    }
    return out;
  }

  bool operator==(const DotFun&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::dot_fun);
    e.u64(entries_.size());
    for (const auto& [d, v] : entries_) {
      ScalarCodec<Dot>::encode(e, d);
      v.encode(e);
    }
  }

  static DotFun decode(Decoder& d) {
    d.expect(Tag::dot_fun);
    DotFun f;
    uint64_t n = d.count("DotFun entry count");
    for (uint64_t k = 0; k < n; ++k) {
      Dot dot = ScalarCodec<Dot>::decode(d);
      V v = V::decode(d);
      if (is_bottom_value(v)) d.fail("DotFun entry is bottom");
      if (!f.entries_.empty() && !(f.entries_.rbegin()->first < dot)) {
        d.fail("DotFun dots out of order");
      }
      f.entries_.emplace_hint(f.entries_.end(), std::move(dot), std::move(v));
    }
    return f;
  }

 private:
  static bool is_bottom_value(const V& v) { return v == V{}; }

  std::map<Dot, V> entries_;
};

// Map from keys to nested dot stores; keys with bottom stores are absent.
template <Element K, DotStoreType V>
class DotMap {
 public:
  DotMap() = default;

  void put(const K& k, V v) {
    if (v.is_bottom()) return;
    entries_[k] = std::move(v);
  }

  bool contains(const K& k) const { return entries_.count(k) != 0; }

  V value_or_bottom(const K& k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? V{} : it->second;
  }

  size_t size() const { return entries_.size(); }
  const std::map<K, V>& entries() const { return entries_; }

  std::set<K> keys() const {
    std::set<K> out;
    for (const auto& [k, v] : entries_) out.insert(out.end(), k);
    return out;
  }

  bool is_bottom() const { return entries_.empty(); }
  void collect_dots(std::set<Dot>& out) const {
    for (const auto& [k, v] : entries_) v.collect_dots(out);
  }

  // Per-key recursive join against the whole-map contexts; keys whose joined
  // store comes out bottom are dropped.
  static DotMap causal_join(const DotMap& a, const CausalContext& ca,
                            const DotMap& b, const CausalContext& cb) {
    DotMap out;
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    const V bottom{};
    while (ia != a.entries_.end() || ib != b.entries_.end()) {
      const K* key;
      const V* va = &bottom;
      const V* vb = &bottom;
      if (ib == b.entries_.end() ||
          (ia != a.entries_.end() && ia->first < ib->first)) {
        key = &ia->first;
        va = &ia->second;
        ++ia;
      } else if (ia == a.entries_.end() || ib->first < ia->first) {
        key = &ib->first;
        vb = &ib->second;
        ++ib;
      } else {
        key = &ia->first;
        va = &ia->second;
        vb = &ib->second;
        ++ia;
        ++ib;
      }
      V merged = V::causal_join(*va, ca, *vb, cb);
      if (!merged.is_bottom()) {
        out.entries_.emplace_hint(out.entries_.end(), *key, std::move(merged));
      }
    }
    return out;
  }

  bool operator==(const DotMap&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::dot_map);
    e.u64(entries_.size());
    for (const auto& [k, v] : entries_) {
      ScalarCodec<K>::encode(e, k);
      v.encode(e);
    }
  }

  static DotMap decode(Decoder& d) {
    d.expect(Tag::dot_map);
    DotMap m;
    uint64_t n = d.count("DotMap entry count");
    for (uint64_t i = 0; i < n; ++i) {
      K k = ScalarCodec<K>::decode(d);
      V v = V::decode(d);
      if (v.is_bottom()) d.fail("DotMap entry is bottom");
      if (!m.entries_.empty() && !(m.entries_.rbegin()->first < k)) {
        d.fail("DotMap keys out of order");
      }
      m.entries_.emplace_hint(m.entries_.end(), std::move(k), std::move(v));
    }
    return m;
  }

 private:
  std::map<K, V> entries_;
};

// State of a causal datatype: a dot store paired with the causal context of
// every event the state has observed. A dot in the context but absent from
// the store records a removal without a tombstone.
template <DotStoreType T>
class Causal {
 public:
  Causal() = default;
  Causal(T store, CausalContext context)
      : store_(std::move(store)), context_(std::move(context)) {}

  const T& store() const { return store_; }
  const CausalContext& context() const { return context_; }

  bool join_with(const Causal& o) {
    T merged = T::causal_join(store_, context_, o.store_, o.context_);
    bool store_changed = !(merged == store_);
    store_ = std::move(merged);
    bool context_changed = context_.join_with(o.context_);
    return store_changed || context_changed;
  }

  bool is_bottom() const { return store_.is_bottom() && context_.empty(); }

  // Reachable states keep every live dot inside the context.
  bool invariant_holds() const {
    for (const Dot& d : dots(store_)) {
      if (!context_.contains(d)) return false;
    }
    return true;
  }

  bool operator==(const Causal&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::causal);
    store_.encode(e);
    context_.encode(e);
  }

  static Causal decode(Decoder& d) {
    d.expect(Tag::causal);
    T store = T::decode(d);
    CausalContext context = CausalContext::decode(d);
    return Causal(std::move(store), std::move(context));
  }

 private:
  T store_;
  CausalContext context_;
};

}  // namespace dcrdt

#endif  // DCRDT_DOT_STORE_HPP
