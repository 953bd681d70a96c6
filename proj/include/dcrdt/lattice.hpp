#ifndef DCRDT_LATTICE_HPP
#define DCRDT_LATTICE_HPP

#include <compare>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "dcrdt/codec.hpp"

namespace dcrdt {

// Globally unique replica identifier. The total order is used only for
// canonical serialization and deterministic iteration.
struct ReplicaId {
  std::string name;

  auto operator<=>(const ReplicaId&) const = default;
};

template <>
struct ScalarCodec<ReplicaId> {
  static void encode(Encoder& e, const ReplicaId& r) {
    e.tag(Tag::replica);
    e.text(r.name);
  }
  static ReplicaId decode(Decoder& d) {
    d.expect(Tag::replica);
    return ReplicaId{d.text()};
  }
};

// A join-semilattice value: default construction yields bottom, join_with
// merges another value in place and reports whether *this changed. join is
// commutative, associative and idempotent; bottom is its identity.
template <typename T>
concept Lattice = std::regular<T> && requires(T& m, const T& c) {
  { m.join_with(c) } -> std::same_as<bool>;
};

template <Lattice T>
T join(const T& a, const T& b) {
  T r = a;
  r.join_with(b);
  return r;
}

template <typename T>
concept HasDirectLeq = requires(const T& a, const T& b) {
  { a.leq(b) } -> std::convertible_to<bool>;
};

// Partial order derived from join: a ⊑ b iff a ⊔ b = b.
template <Lattice T>
bool leq_by_join(const T& a, const T& b) {
  return join(a, b) == b;
}

// Types may provide a direct leq that must agree with the derived order.
template <Lattice T>
bool leq(const T& a, const T& b) {
  if constexpr (HasDirectLeq<T>) {
    return a.leq(b);
  } else {
    return leq_by_join(a, b);
  }
}

template <Lattice T>
bool is_bottom(const T& x) {
  return x == T{};
}

// Applies a delta-mutator: the new state is the join of the current state
// with the returned delta. Every local update in the engines takes this
// transition.
template <Lattice T, std::invocable<const T&> M>
std::pair<T, T> mutate(M&& mut, const T& x) {
  T delta = std::forward<M>(mut)(x);
  T next = join(x, delta);
  return {std::move(next), std::move(delta)};
}

// Same transition as mutate(), joining into the state in place; returns the
// delta.
template <Lattice T, std::invocable<const T&> M>
T apply_mutation(T& x, M&& mut) {
  T delta = std::forward<M>(mut)(x);
  x.join_with(delta);
  return delta;
}

// Naturals under max, bottom 0.
struct MaxNat {
  uint64_t value = 0;

  bool join_with(const MaxNat& o) {
    if (o.value > value) {
      value = o.value;
      return true;
    }
    return false;
  }

  bool leq(const MaxNat& o) const { return value <= o.value; }
  bool operator==(const MaxNat&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::u64);
    e.u64(value);
  }
  static MaxNat decode(Decoder& d) {
    d.expect(Tag::u64);
    return MaxNat{d.u64()};
  }
};

// Integers under max. Bottom is 0, which only lawfully acts as a join
// identity on non-negative values; the counter that uses this keeps its
// reachable entries in that range.
struct MaxInt {
  int64_t value = 0;

  bool join_with(const MaxInt& o) {
    if (o.value > value) {
      value = o.value;
      return true;
    }
    return false;
  }

  bool leq(const MaxInt& o) const { return value <= o.value; }
  bool operator==(const MaxInt&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::i64);
    e.i64(value);
  }
  static MaxInt decode(Decoder& d) {
    d.expect(Tag::i64);
    return MaxInt{d.i64()};
  }
};

// Booleans ordered false < true; join is disjunction.
struct BoolOr {
  bool value = false;

  bool join_with(const BoolOr& o) {
    if (o.value && !value) {
      value = true;
      return true;
    }
    return false;
  }

  bool leq(const BoolOr& o) const { return !value || o.value; }
  bool operator==(const BoolOr&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::boolean);
    e.boolean(value);
  }
  static BoolOr decode(Decoder& d) {
    d.expect(Tag::boolean);
    return BoolOr{d.boolean()};
  }
};

// Totally ordered payloads lifted to a lattice: bottom is "absent", join
// takes the maximum. Register payloads are constant per tagged event under
// correct use, so the max branch never changes observable reads there.
template <typename V>
  requires std::totally_ordered<V>
struct MaxValue {
  std::optional<V> value;

  bool join_with(const MaxValue& o) {
    if (!o.value) return false;
    if (!value || *value < *o.value) {
      value = o.value;
      return true;
    }
    return false;
  }

  bool leq(const MaxValue& o) const {
    if (!value) return true;
    return o.value && *value <= *o.value;
  }
  bool operator==(const MaxValue&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::max_value);
    e.boolean(value.has_value());
    if (value) ScalarCodec<V>::encode(e, *value);
  }
  static MaxValue decode(Decoder& d) {
    d.expect(Tag::max_value);
    MaxValue v;
    if (d.boolean()) v.value = ScalarCodec<V>::decode(d);
    return v;
  }
};

// Product of two lattices; join is coordinate-wise.
template <Lattice A, Lattice B>
struct Pair {
  A first{};
  B second{};

  bool join_with(const Pair& o) {
    bool a = first.join_with(o.first);
    bool b = second.join_with(o.second);
    return a || b;
  }

  bool operator==(const Pair&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::pair);
    first.encode(e);
    second.encode(e);
  }
  static Pair decode(Decoder& d) {
    d.expect(Tag::pair);
    Pair p;
    p.first = A::decode(d);
    p.second = B::decode(d);
    return p;
  }
};

// Lexicographic product: the first component decides the join, the second is
// only joined on a tie. Incomparable firsts join the firsts and reset the
// second to bottom; with a totally ordered first component that branch is
// unreachable.
template <Lattice A, Lattice B>
struct LexPair {
  A first{};
  B second{};

  bool join_with(const LexPair& o) {
    const bool mine_leq = dcrdt::leq(first, o.first);
    const bool theirs_leq = dcrdt::leq(o.first, first);
    if (mine_leq && theirs_leq) {
      return second.join_with(o.second);
    }
    if (theirs_leq) return false;  // first > o.first, keep ours
    if (mine_leq) {
      *this = o;
      return true;
    }
    first.join_with(o.first);
    second = B{};
    return true;
  }

  bool operator==(const LexPair&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::lex_pair);
    first.encode(e);
    second.encode(e);
  }
  static LexPair decode(Decoder& d) {
    d.expect(Tag::lex_pair);
    LexPair p;
    p.first = A::decode(d);
    p.second = B::decode(d);
    return p;
  }
};

// Keys and elements stored in sets and map-shaped states.
template <typename E>
concept Element = std::totally_ordered<E> && std::regular<E> &&
                  requires(Encoder& e, const E& x, Decoder& d) {
                    ScalarCodec<E>::encode(e, x);
                    { ScalarCodec<E>::decode(d) } -> std::same_as<E>;
                  };

}  // namespace dcrdt

#endif  // DCRDT_LATTICE_HPP
