#ifndef DCRDT_CAUSAL_CONTEXT_HPP
#define DCRDT_CAUSAL_CONTEXT_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <set>

#include "dcrdt/lattice.hpp"

namespace dcrdt {

// Unique identifier of one update event: a replica id plus a sequence number
// starting at 1.
struct Dot {
  ReplicaId replica;
  uint64_t counter = 0;

  auto operator<=>(const Dot&) const = default;
};

template <>
struct ScalarCodec<Dot> {
  static void encode(Encoder& e, const Dot& d) {
    e.tag(Tag::dot);
    e.text(d.replica.name);
    e.u64(d.counter);
  }
  static Dot decode(Decoder& d) {
    d.expect(Tag::dot);
    Dot out;
    out.replica.name = d.text();
    out.counter = d.u64();
    if (out.counter == 0) d.fail("dot counter must be >= 1");
    return out;
  }
};

// Set of observed dots, stored compressed: a version vector holding the
// maximal contiguous prefix per replica plus a cloud of non-contiguous dots.
// All operations are defined on the denoted dot set
//   {(j,n) | 1 <= n <= vector(j)} ∪ cloud
// and the representation is canonical: after every mutation the cloud holds
// no dot at or below the vector and no dot immediately following it, so
// structural equality coincides with denotation equality.
class CausalContext {
 public:
  CausalContext() = default;

  static CausalContext from_dots(const std::set<Dot>& dots) {
    CausalContext c;
    c.cloud_ = dots;
    c.compact();
    return c;
  }

  bool contains(const Dot& d) const {
    return d.counter <= vector_value(d.replica) || cloud_.count(d) != 0;
  }

  // Largest sequence number observed for replica i, or 0.
  uint64_t max_of(const ReplicaId& i) const {
    uint64_t best = vector_value(i);
    auto it = cloud_.upper_bound(Dot{i, std::numeric_limits<uint64_t>::max()});
    if (it != cloud_.begin()) {
      --it;
      if (it->replica == i && it->counter > best) best = it->counter;
    }
    return best;
  }

  Dot next_dot(const ReplicaId& i) const { return Dot{i, max_of(i) + 1}; }

  void insert_dot(const Dot& d) {
    if (contains(d)) return;
    cloud_.insert(d);
    if (d.counter == vector_value(d.replica) + 1) compact_replica(d.replica);
  }

  bool join_with(const CausalContext& o) {
    bool changed = false;
    for (const auto& [id, n] : o.vector_) {
      auto [it, inserted] = vector_.emplace(id, n);
      if (inserted) {
        changed = true;
      } else if (it->second < n) {
        it->second = n;
        changed = true;
      }
    }
    for (const Dot& d : o.cloud_) {
      if (d.counter > vector_value(d.replica) && cloud_.insert(d).second) {
        changed = true;
      }
    }
    compact();
    return changed;
  }

  void union_with(const CausalContext& o) { join_with(o); }

  bool leq(const CausalContext& o) const {
    for (const auto& [id, n] : vector_) {
      if (n > o.vector_value(id)) return false;
    }
    for (const Dot& d : cloud_) {
      if (!o.contains(d)) return false;
    }
    return true;
  }

  bool cloud_empty() const { return cloud_.empty(); }
  bool empty() const { return vector_.empty() && cloud_.empty(); }

  // Number of dots in the denotation.
  uint64_t dot_count() const {
    uint64_t n = cloud_.size();
    for (const auto& [id, v] : vector_) n += v;
    return n;
  }

  const std::map<ReplicaId, uint64_t>& vector() const { return vector_; }
  const std::set<Dot>& cloud() const { return cloud_; }

  bool operator==(const CausalContext&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::causal_context);
    e.u64(vector_.size());
    for (const auto& [id, n] : vector_) {
      ScalarCodec<ReplicaId>::encode(e, id);
      e.u64(n);
    }
    e.u64(cloud_.size());
    for (const Dot& d : cloud_) ScalarCodec<Dot>::encode(e, d);
  }

  static CausalContext decode(Decoder& d) {
    d.expect(Tag::causal_context);
    CausalContext c;
    uint64_t nv = d.count("context vector count");
    const ReplicaId* prev = nullptr;
    for (uint64_t k = 0; k < nv; ++k) {
      ReplicaId id = ScalarCodec<ReplicaId>::decode(d);
      uint64_t n = d.u64();
      if (n == 0) d.fail("context vector entry is zero");
      if (prev && !(*prev < id)) d.fail("context vector keys out of order");
      auto it = c.vector_.emplace_hint(c.vector_.end(), std::move(id), n);
      prev = &it->first;
    }
    uint64_t nc = d.count("context cloud count");
    const Dot* prev_dot = nullptr;
    for (uint64_t k = 0; k < nc; ++k) {
      Dot dot = ScalarCodec<Dot>::decode(d);
      if (prev_dot && !(*prev_dot < dot)) d.fail("context cloud out of order");
      if (dot.counter <= c.vector_value(dot.replica) + 1) {
        d.fail("context cloud dot not compacted");
      }
      prev_dot = &*c.cloud_.insert(c.cloud_.end(), std::move(dot));
    }
    return c;
  }

 private:
  uint64_t vector_value(const ReplicaId& i) const {
    auto it = vector_.find(i);
    return it == vector_.end() ? 0 : it->second;
  }

  // Absorbs the contiguous cloud prefix of one replica into the vector and
  // drops covered dots. Cloud iteration is in (replica, counter) order.
  void compact_replica(const ReplicaId& i) {
    uint64_t vec = vector_value(i);
    auto it = cloud_.lower_bound(Dot{i, 0});
    while (it != cloud_.end() && it->replica == i) {
      if (it->counter <= vec) {
        it = cloud_.erase(it);
      } else if (it->counter == vec + 1) {
        vec = it->counter;
        it = cloud_.erase(it);
      } else {
        break;
      }
    }
    if (vec > 0) vector_[i] = vec;
  }

  void compact() {
    for (auto it = cloud_.begin(); it != cloud_.end();) {
      uint64_t vec = vector_value(it->replica);
      if (it->counter <= vec) {
        it = cloud_.erase(it);
      } else if (it->counter == vec + 1) {
        vector_[it->replica] = it->counter;
        it = cloud_.erase(it);
      } else {
        // Non-contiguous; skip the rest of this replica's dots.
        const ReplicaId& r = it->replica;
        while (it != cloud_.end() && it->replica == r) ++it;
      }
    }
  }

  std::map<ReplicaId, uint64_t> vector_;
  std::set<Dot> cloud_;
};

}  // namespace dcrdt

#endif  // DCRDT_CAUSAL_CONTEXT_HPP
