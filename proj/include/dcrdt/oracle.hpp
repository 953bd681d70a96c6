#ifndef DCRDT_ORACLE_HPP
#define DCRDT_ORACLE_HPP

#include <map>
#include <set>

#include "dcrdt/causal_context.hpp"
#include "dcrdt/counters.hpp"
#include "dcrdt/lattice.hpp"
#include "dcrdt/sets.hpp"

// Reference full-state implementations used as ground truth. The counter and
// the simple sets have genuinely independent full-state mutators; for the
// causal datatypes the standard mutator is obtained by composing the delta
// form with join, so their verification weight rests on the twin-engine
// correspondence rather than on these identities.
namespace dcrdt::oracle {

// Full-state counter increment: the whole map with the local entry bumped.
inline GCounter gcounter_inc_full(const ReplicaId& i, const GCounter& m) {
  std::map<ReplicaId, uint64_t> entries = m.entries();
  entries[i] += 1;
  return GCounter::from_entries(std::move(entries));
}

template <Element E>
GSet<E> gset_insert_full(const E& e, const GSet<E>& s) {
  std::set<E> items = s.elements();
  items.insert(e);
  return GSet<E>(std::move(items));
}

template <Element E>
TwoPSet<E> twopset_insert_full(const E& e, const TwoPSet<E>& s) {
  return TwoPSet<E>(gset_insert_full(e, s.added()), s.removed());
}

template <Element E>
TwoPSet<E> twopset_remove_full(const E& e, const TwoPSet<E>& s) {
  return TwoPSet<E>(s.added(), gset_insert_full(e, s.removed()));
}

inline PNCounter pncounter_inc_full(const ReplicaId& i, const PNCounter& m) {
  return PNCounter(gcounter_inc_full(i, m.pos()), m.neg());
}

inline PNCounter pncounter_dec_full(const ReplicaId& i, const PNCounter& m) {
  return PNCounter(m.pos(), gcounter_inc_full(i, m.neg()));
}

inline LexCounter lexcounter_shift_full(const ReplicaId& i, const LexCounter& m,
                                        uint64_t dfirst, int64_t dsecond) {
  std::map<ReplicaId, LexCounter::Entry> entries = m.entries();
  LexCounter::Entry cur = m.entry(i);
  entries[i] = LexCounter::Entry{MaxNat{cur.first.value + dfirst},
                                 MaxInt{cur.second.value + dsecond}};
  return LexCounter::from_entries(std::move(entries));
}

inline LexCounter lexcounter_inc_full(const ReplicaId& i, const LexCounter& m) {
  return lexcounter_shift_full(i, m, 0, 1);
}

inline LexCounter lexcounter_dec_full(const ReplicaId& i, const LexCounter& m) {
  return lexcounter_shift_full(i, m, 1, -1);
}

// Standard mutator derived from a delta-mutator: m(X) = X ⊔ mδ(X).
template <Lattice T, std::invocable<const T&> M>
T full_from_delta(M&& mut, const T& x) {
  return join(x, std::forward<M>(mut)(x));
}

// Decomposition identity: the full mutator and the joined delta take the
// same state transition.
template <Lattice T, std::invocable<const T&> Full,
          std::invocable<const T&> Delta>
bool check_decomposition(Full&& full, Delta&& delta, const T& x) {
  return std::forward<Full>(full)(x) ==
         join(x, std::forward<Delta>(delta)(x));
}

// Uncompressed dot set; reference for the compressed CausalContext.
class NaiveContext {
 public:
  NaiveContext() = default;
  explicit NaiveContext(std::set<Dot> dots) : dots_(std::move(dots)) {}

  bool contains(const Dot& d) const { return dots_.count(d) != 0; }

  uint64_t max_of(const ReplicaId& i) const {
    uint64_t best = 0;
    for (const Dot& d : dots_) {
      if (d.replica == i && d.counter > best) best = d.counter;
    }
    return best;
  }

  Dot next_dot(const ReplicaId& i) const { return Dot{i, max_of(i) + 1}; }

  void insert_dot(const Dot& d) { dots_.insert(d); }

  void union_with(const NaiveContext& o) {
    dots_.insert(o.dots_.begin(), o.dots_.end());
  }

  const std::set<Dot>& dots() const { return dots_; }

  bool operator==(const NaiveContext&) const = default;

 private:
  std::set<Dot> dots_;
};

// Anti-entropy of standard state-based CRDTs: ship the entire state, join on
// receive.
template <Lattice T>
class FullStateReplica {
 public:
  explicit FullStateReplica(ReplicaId id) : id_(std::move(id)) {}

  const ReplicaId& id() const { return id_; }
  const T& state() const { return state_; }

  template <std::invocable<const T&> M>
  void apply_full(M&& full_mutator) {
    state_ = std::forward<M>(full_mutator)(state_);
  }

  template <std::invocable<const T&> M>
  void apply_delta_form(M&& delta_mutator) {
    apply_mutation(state_, std::forward<M>(delta_mutator));
  }

  T ship() const { return state_; }

  bool receive(const T& payload) { return state_.join_with(payload); }

 private:
  ReplicaId id_;
  T state_{};
};

}  // namespace dcrdt::oracle

#endif  // DCRDT_ORACLE_HPP
