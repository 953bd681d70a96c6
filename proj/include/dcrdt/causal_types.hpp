#ifndef DCRDT_CAUSAL_TYPES_HPP
#define DCRDT_CAUSAL_TYPES_HPP

#include <set>

#include "dcrdt/dot_store.hpp"

namespace dcrdt {

// A causal datatype wraps a Causal<store> state and exposes delta-mutators.
// ORMap embeds any type satisfying this shape, including itself.
template <typename V>
concept CausalDatatype =
    Lattice<V> && DotStoreType<typename V::store_type> &&
    requires(const V& v, typename V::store_type s, CausalContext c) {
      { V::from_parts(std::move(s), std::move(c)) } -> std::same_as<V>;
      { v.store() } -> std::convertible_to<const typename V::store_type&>;
      { v.context() } -> std::convertible_to<const CausalContext&>;
    };

namespace detail {

inline CausalContext context_of_dots(const std::set<Dot>& ds) {
  return CausalContext::from_dots(ds);
}

inline CausalContext context_of_dots(const std::set<Dot>& ds, const Dot& extra) {
  CausalContext c = CausalContext::from_dots(ds);
  c.insert_dot(extra);
  return c;
}

}  // namespace detail

// Enable-wins flag. Enabling replaces all live dots with one fresh dot;
// disabling just covers them. A concurrent enable survives a disable because
// its dot is unseen by the disable's context.
class EWFlag {
 public:
  using store_type = DotSet;

  EWFlag() = default;

  static EWFlag from_parts(DotSet store, CausalContext context) {
    return EWFlag(Causal<DotSet>(std::move(store), std::move(context)));
  }

  const DotSet& store() const { return state_.store(); }
  const CausalContext& context() const { return state_.context(); }

  EWFlag enable_delta(const ReplicaId& i) const {
    Dot d = context().next_dot(i);
    return from_parts(DotSet::singleton(d),
                      detail::context_of_dots(store().set(), d));
  }

  EWFlag disable_delta(const ReplicaId&) const {
    return from_parts(DotSet{}, detail::context_of_dots(store().set()));
  }

  bool read() const { return !store().is_bottom(); }

  bool join_with(const EWFlag& o) { return state_.join_with(o.state_); }
  bool invariant_holds() const { return state_.invariant_holds(); }
  bool operator==(const EWFlag&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::ewflag);
    state_.encode(e);
  }
  static EWFlag decode(Decoder& d) {
    d.expect(Tag::ewflag);
    return EWFlag(Causal<DotSet>::decode(d));
  }

 private:
  explicit EWFlag(Causal<DotSet> s) : state_(std::move(s)) {}

  Causal<DotSet> state_;
};

// Multi-value register: each written value is tagged with a single dot. A
// write covers all dots it has seen, so concurrent writes survive a join and
// a later read returns all of them.
template <typename V>
  requires std::totally_ordered<V> && requires { typename ScalarCodec<V>; }
class MVRegister {
 public:
  using store_type = DotFun<MaxValue<V>>;

  MVRegister() = default;

  static MVRegister from_parts(store_type store, CausalContext context) {
    return MVRegister(Causal<store_type>(std::move(store), std::move(context)));
  }

  const store_type& store() const { return state_.store(); }
  const CausalContext& context() const { return state_.context(); }

  MVRegister write_delta(const ReplicaId& i, const V& v) const {
    Dot d = context().next_dot(i);
    store_type m;
    m.put(d, MaxValue<V>{v});
    return from_parts(std::move(m),
                      detail::context_of_dots(dots(store()), d));
  }

  MVRegister clear_delta(const ReplicaId&) const {
    return from_parts(store_type{}, detail::context_of_dots(dots(store())));
  }

  std::set<V> read() const {
    std::set<V> out;
    for (const auto& [d, v] : store().entries()) {
      if (v.value) out.insert(*v.value);
    }
    return out;
  }

  bool join_with(const MVRegister& o) { return state_.join_with(o.state_); }
  bool invariant_holds() const { return state_.invariant_holds(); }
  bool operator==(const MVRegister&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::mvreg);
    state_.encode(e);
  }
  static MVRegister decode(Decoder& d) {
    d.expect(Tag::mvreg);
    return MVRegister(Causal<store_type>::decode(d));
  }

 private:
  explicit MVRegister(Causal<store_type> s) : state_(std::move(s)) {}

  Causal<store_type> state_;
};

// Add-wins set: per element a set of add dots. Removing covers only the dots
// it observed, so a concurrent add keeps the element alive.
template <Element E>
class AWSet {
 public:
  using store_type = DotMap<E, DotSet>;

  AWSet() = default;

  static AWSet from_parts(store_type store, CausalContext context) {
    return AWSet(Causal<store_type>(std::move(store), std::move(context)));
  }

  const store_type& store() const { return state_.store(); }
  const CausalContext& context() const { return state_.context(); }

  AWSet add_delta(const ReplicaId& i, const E& e) const {
    Dot d = context().next_dot(i);
    store_type m;
    m.put(e, DotSet::singleton(d));
    return from_parts(
        std::move(m),
        detail::context_of_dots(store().value_or_bottom(e).set(), d));
  }

  AWSet remove_delta(const ReplicaId&, const E& e) const {
    return from_parts(
        store_type{},
        detail::context_of_dots(store().value_or_bottom(e).set()));
  }

  AWSet clear_delta(const ReplicaId&) const {
    return from_parts(store_type{}, detail::context_of_dots(dots(store())));
  }

  std::set<E> elements() const { return store().keys(); }
  bool contains(const E& e) const { return store().contains(e); }

  bool join_with(const AWSet& o) { return state_.join_with(o.state_); }
  bool invariant_holds() const { return state_.invariant_holds(); }
  bool operator==(const AWSet&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::awset);
    state_.encode(e);
  }
  static AWSet decode(Decoder& d) {
    d.expect(Tag::awset);
    return AWSet(Causal<store_type>::decode(d));
  }

 private:
  explicit AWSet(Causal<store_type> s) : state_(std::move(s)) {}

  Causal<store_type> state_;
};

// Remove-wins set: per element a nested map from a presence marker to dots.
// Both add and remove cover every dot observed for the element and plant a
// fresh marker dot; an element is in the set only if no false marker
// survives, so concurrent removes beat adds.
template <Element E>
class RWSet {
 public:
  using marker_map = DotMap<bool, DotSet>;
  using store_type = DotMap<E, marker_map>;

  RWSet() = default;

  static RWSet from_parts(store_type store, CausalContext context) {
    return RWSet(Causal<store_type>(std::move(store), std::move(context)));
  }

  const store_type& store() const { return state_.store(); }
  const CausalContext& context() const { return state_.context(); }

  RWSet add_delta(const ReplicaId& i, const E& e) const {
    return marked(i, e, true);
  }

  RWSet remove_delta(const ReplicaId& i, const E& e) const {
    return marked(i, e, false);
  }

  RWSet clear_delta(const ReplicaId&) const {
    return from_parts(store_type{}, detail::context_of_dots(dots(store())));
  }

  std::set<E> elements() const {
    std::set<E> out;
    for (const auto& [e, marks] : store().entries()) {
      if (!marks.contains(false)) out.insert(out.end(), e);
    }
    return out;
  }

  bool contains(const E& e) const {
    return store().contains(e) &&
           !store().value_or_bottom(e).contains(false);
  }

  bool join_with(const RWSet& o) { return state_.join_with(o.state_); }
  bool invariant_holds() const { return state_.invariant_holds(); }
  bool operator==(const RWSet&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::rwset);
    state_.encode(e);
  }
  static RWSet decode(Decoder& d) {
    d.expect(Tag::rwset);
    return RWSet(Causal<store_type>::decode(d));
  }

 private:
  explicit RWSet(Causal<store_type> s) : state_(std::move(s)) {}

  RWSet marked(const ReplicaId& i, const E& e, bool present) const {
    Dot d = context().next_dot(i);
    marker_map marks;
    marks.put(present, DotSet::singleton(d));
    store_type m;
    m.put(e, std::move(marks));
    return from_parts(
        std::move(m),
        detail::context_of_dots(dots(store().value_or_bottom(e)), d));
  }

  Causal<store_type> state_;
};

// Observed-remove map embedding any causal datatype, including itself. One
// causal context is shared by the whole map and never reset, which is what
// keeps key re-creation after a remove anomaly-free.
template <Element K, CausalDatatype V>
class ORMap {
 public:
  using embedded_store = typename V::store_type;
  using store_type = DotMap<K, embedded_store>;

  ORMap() = default;

  static ORMap from_parts(store_type store, CausalContext context) {
    return ORMap(Causal<store_type>(std::move(store), std::move(context)));
  }

  const store_type& store() const { return state_.store(); }
  const CausalContext& context() const { return state_.context(); }

  // Runs an embedded delta-mutator on the key's store paired with the
  // map-wide context. An unmapped key reads as the embedded bottom.
  template <std::invocable<const V&> F>
  ORMap apply_delta(const K& k, F&& op) const {
    V current = V::from_parts(store().value_or_bottom(k), context());
    V delta = std::forward<F>(op)(current);
    store_type m;
    m.put(k, delta.store());
    return from_parts(std::move(m), delta.context());
  }

  ORMap remove_delta(const ReplicaId&, const K& k) const {
    return from_parts(
        store_type{},
        detail::context_of_dots(dots(store().value_or_bottom(k))));
  }

  ORMap clear_delta(const ReplicaId&) const {
    return from_parts(store_type{}, detail::context_of_dots(dots(store())));
  }

  // Embedded reads go through the same pairing as apply; a removed key
  // yields the embedded type's bottom query results.
  V value_at(const K& k) const {
    return V::from_parts(store().value_or_bottom(k), context());
  }

  std::set<K> keys() const { return store().keys(); }
  bool contains(const K& k) const { return store().contains(k); }

  bool join_with(const ORMap& o) { return state_.join_with(o.state_); }
  bool invariant_holds() const { return state_.invariant_holds(); }
  bool operator==(const ORMap&) const = default;

  void encode(Encoder& e) const {
    e.tag(Tag::ormap);
    state_.encode(e);
  }
  static ORMap decode(Decoder& d) {
    d.expect(Tag::ormap);
    return ORMap(Causal<store_type>::decode(d));
  }

 private:
  explicit ORMap(Causal<store_type> s) : state_(std::move(s)) {}

  Causal<store_type> state_;
};

}  // namespace dcrdt

#endif  // DCRDT_CAUSAL_TYPES_HPP
