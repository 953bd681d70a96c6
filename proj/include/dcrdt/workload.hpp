#ifndef DCRDT_WORKLOAD_HPP
#define DCRDT_WORKLOAD_HPP

#include <string>

#include "dcrdt/causal_types.hpp"
#include "dcrdt/counters.hpp"
#include "dcrdt/rng.hpp"
#include "dcrdt/sets.hpp"
#include "dcrdt/simnet.hpp"

// Per-datatype adapters used by the simulator, the scenario runner and the
// benchmarks: deterministic random operations, a one-line value summary, and
// access to the causal context where the datatype has one.
namespace dcrdt {

struct WorkloadPool {
  uint32_t elements = 32;  // candidate set/register elements
  uint32_t keys = 8;       // candidate map keys
};

template <typename E>
struct ElementMaker;

template <>
struct ElementMaker<uint64_t> {
  static uint64_t make(uint64_t k) { return k; }
};

template <>
struct ElementMaker<std::string> {
  static std::string make(uint64_t k) { return "e" + std::to_string(k); }
};

inline std::string element_label(uint64_t e) { return std::to_string(e); }
inline std::string element_label(const std::string& e) { return e; }

template <typename DT>
struct Workload;

template <>
struct Workload<GCounter> {
  using value_type = GCounter;

  static SimMutator<GCounter> random_op(Rng&, const ReplicaId& self,
                                        const WorkloadPool&, uint64_t) {
    return {"inc", [self](const GCounter& m) {
              return GCounter::inc_delta(self, m);
            }};
  }

  static SimMutator<GCounter> growth_op(uint64_t k, const ReplicaId&) {
    ReplicaId who{"r" + std::to_string(k % 5)};
    return {"inc", [who](const GCounter& m) {
              return GCounter::inc_delta(who, m);
            }};
  }

  static std::string describe(const GCounter& m) {
    return "value=" + std::to_string(m.value());
  }

  static const CausalContext* context(const GCounter&) { return nullptr; }
};

template <>
struct Workload<PNCounter> {
  using value_type = PNCounter;

  static SimMutator<PNCounter> random_op(Rng& rng, const ReplicaId& self,
                                         const WorkloadPool&, uint64_t) {
    if (rng.below(10) < 7) {
      return {"inc", [self](const PNCounter& m) {
                return PNCounter::inc_delta(self, m);
              }};
    }
    return {"dec", [self](const PNCounter& m) {
              return PNCounter::dec_delta(self, m);
            }};
  }

  static SimMutator<PNCounter> growth_op(uint64_t k, const ReplicaId&) {
    ReplicaId who{"r" + std::to_string(k % 5)};
    if (k % 3 == 0) {
      return {"dec", [who](const PNCounter& m) {
                return PNCounter::dec_delta(who, m);
              }};
    }
    return {"inc", [who](const PNCounter& m) {
              return PNCounter::inc_delta(who, m);
            }};
  }

  static std::string describe(const PNCounter& m) {
    return "value=" + std::to_string(m.value());
  }

  static const CausalContext* context(const PNCounter&) { return nullptr; }
};

template <>
struct Workload<LexCounter> {
  using value_type = LexCounter;

  static SimMutator<LexCounter> random_op(Rng& rng, const ReplicaId& self,
                                          const WorkloadPool&, uint64_t) {
    if (rng.below(10) < 6) {
      return {"inc", [self](const LexCounter& m) {
                return LexCounter::inc_delta(self, m);
              }};
    }
    return {"dec", [self](const LexCounter& m) {
              return LexCounter::dec_delta(self, m);
            }};
  }

  static SimMutator<LexCounter> growth_op(uint64_t k, const ReplicaId&) {
    ReplicaId who{"r" + std::to_string(k % 5)};
    if (k % 3 == 0) {
      return {"dec", [who](const LexCounter& m) {
                return LexCounter::dec_delta(who, m);
              }};
    }
    return {"inc", [who](const LexCounter& m) {
              return LexCounter::inc_delta(who, m);
            }};
  }

  static std::string describe(const LexCounter& m) {
    return "value=" + std::to_string(m.value());
  }

  static const CausalContext* context(const LexCounter&) { return nullptr; }
};

template <Element E>
struct Workload<GSet<E>> {
  using value_type = GSet<E>;

  static SimMutator<value_type> random_op(Rng& rng, const ReplicaId&,
                                          const WorkloadPool& pool, uint64_t) {
    E e = ElementMaker<E>::make(rng.below(pool.elements));
    return {"insert(" + element_label(e) + ")", [e](const value_type& s) {
              return value_type::insert_delta(e, s);
            }};
  }

  static SimMutator<value_type> growth_op(uint64_t k, const ReplicaId&) {
    E e = ElementMaker<E>::make(k);
    return {"insert", [e](const value_type& s) {
              return value_type::insert_delta(e, s);
            }};
  }

  static std::string describe(const value_type& s) {
    return "size=" + std::to_string(s.size());
  }

  static const CausalContext* context(const value_type&) { return nullptr; }
};

template <Element E>
struct Workload<TwoPSet<E>> {
  using value_type = TwoPSet<E>;

  static SimMutator<value_type> random_op(Rng& rng, const ReplicaId&,
                                          const WorkloadPool& pool, uint64_t) {
    E e = ElementMaker<E>::make(rng.below(pool.elements));
    if (rng.below(10) < 7) {
      return {"insert(" + element_label(e) + ")", [e](const value_type& s) {
                return value_type::insert_delta(e, s);
              }};
    }
    return {"remove(" + element_label(e) + ")", [e](const value_type& s) {
              return value_type::remove_delta(e, s);
            }};
  }

  static SimMutator<value_type> growth_op(uint64_t k, const ReplicaId&) {
    E e = ElementMaker<E>::make(k);
    return {"insert", [e](const value_type& s) {
              return value_type::insert_delta(e, s);
            }};
  }

  static std::string describe(const value_type& s) {
    return "size=" + std::to_string(s.elements().size());
  }

  static const CausalContext* context(const value_type&) { return nullptr; }
};

template <Element E>
struct Workload<AWLWWSet<E>> {
  using value_type = AWLWWSet<E>;

  // Timestamps come from the event tick, which grows monotonically per
  // replica; cross-replica ties exercise the add-wins tiebreak.
  static SimMutator<value_type> random_op(Rng& rng, const ReplicaId&,
                                          const WorkloadPool& pool,
                                          uint64_t tick) {
    E e = ElementMaker<E>::make(rng.below(pool.elements));
    uint64_t t = tick + 1;
    if (rng.below(10) < 6) {
      return {"insert(" + element_label(e) + ")", [e, t](const value_type& s) {
                return value_type::insert_delta(e, t, s);
              }};
    }
    return {"remove(" + element_label(e) + ")", [e, t](const value_type& s) {
              return value_type::remove_delta(e, t, s);
            }};
  }

  static SimMutator<value_type> growth_op(uint64_t k, const ReplicaId&) {
    E e = ElementMaker<E>::make(k);
    return {"insert", [e, k](const value_type& s) {
              return value_type::insert_delta(e, k + 1, s);
            }};
  }

  static std::string describe(const value_type& s) {
    return "size=" + std::to_string(s.elements().size());
  }

  static const CausalContext* context(const value_type&) { return nullptr; }
};

template <>
struct Workload<EWFlag> {
  using value_type = EWFlag;

  static SimMutator<EWFlag> random_op(Rng& rng, const ReplicaId& self,
                                      const WorkloadPool&, uint64_t) {
    if (rng.below(10) < 6) {
      return {"enable", [self](const EWFlag& f) {
                return f.enable_delta(self);
              }};
    }
    return {"disable", [self](const EWFlag& f) {
              return f.disable_delta(self);
            }};
  }

  static SimMutator<EWFlag> growth_op(uint64_t, const ReplicaId& self) {
    return {"enable", [self](const EWFlag& f) { return f.enable_delta(self); }};
  }

  static std::string describe(const EWFlag& f) {
    return f.read() ? "enabled" : "disabled";
  }

  static const CausalContext* context(const EWFlag& f) { return &f.context(); }
};

template <typename V>
struct Workload<MVRegister<V>> {
  using value_type = MVRegister<V>;

  static SimMutator<value_type> random_op(Rng& rng, const ReplicaId& self,
                                          const WorkloadPool& pool, uint64_t) {
    if (rng.below(10) < 8) {
      V v = ElementMaker<V>::make(rng.below(pool.elements));
      return {"write(" + element_label(v) + ")", [self, v](const value_type& r) {
                return r.write_delta(self, v);
              }};
    }
    return {"clear", [self](const value_type& r) {
              return r.clear_delta(self);
            }};
  }

  static SimMutator<value_type> growth_op(uint64_t k, const ReplicaId& self) {
    V v = ElementMaker<V>::make(k);
    return {"write", [self, v](const value_type& r) {
              return r.write_delta(self, v);
            }};
  }

  static std::string describe(const value_type& r) {
    return "values=" + std::to_string(r.read().size());
  }

  static const CausalContext* context(const value_type& r) {
    return &r.context();
  }
};

template <Element E>
struct Workload<AWSet<E>> {
  using value_type = AWSet<E>;

  static SimMutator<value_type> random_op(Rng& rng, const ReplicaId& self,
                                          const WorkloadPool& pool, uint64_t) {
    uint64_t roll = rng.below(20);
    E e = ElementMaker<E>::make(rng.below(pool.elements));
    if (roll < 11) {
      return {"add(" + element_label(e) + ")", [self, e](const value_type& s) {
                return s.add_delta(self, e);
              }};
    }
    if (roll < 18) {
      return {"remove(" + element_label(e) + ")",
              [self, e](const value_type& s) { return s.remove_delta(self, e); }};
    }
    return {"clear", [self](const value_type& s) {
              return s.clear_delta(self);
            }};
  }

  static SimMutator<value_type> growth_op(uint64_t k, const ReplicaId& self) {
    E e = ElementMaker<E>::make(k);
    return {"add", [self, e](const value_type& s) {
              return s.add_delta(self, e);
            }};
  }

  static std::string describe(const value_type& s) {
    return "size=" + std::to_string(s.elements().size());
  }

  static const CausalContext* context(const value_type& s) {
    return &s.context();
  }
};

template <Element E>
struct Workload<RWSet<E>> {
  using value_type = RWSet<E>;

  static SimMutator<value_type> random_op(Rng& rng, const ReplicaId& self,
                                          const WorkloadPool& pool, uint64_t) {
    uint64_t roll = rng.below(20);
    E e = ElementMaker<E>::make(rng.below(pool.elements));
    if (roll < 11) {
      return {"add(" + element_label(e) + ")", [self, e](const value_type& s) {
                return s.add_delta(self, e);
              }};
    }
    if (roll < 18) {
      return {"remove(" + element_label(e) + ")",
              [self, e](const value_type& s) { return s.remove_delta(self, e); }};
    }
    return {"clear", [self](const value_type& s) {
              return s.clear_delta(self);
            }};
  }

  static SimMutator<value_type> growth_op(uint64_t k, const ReplicaId& self) {
    E e = ElementMaker<E>::make(k);
    return {"add", [self, e](const value_type& s) {
              return s.add_delta(self, e);
            }};
  }

  static std::string describe(const value_type& s) {
    return "size=" + std::to_string(s.elements().size());
  }

  static const CausalContext* context(const value_type& s) {
    return &s.context();
  }
};

template <Element K, CausalDatatype V>
struct Workload<ORMap<K, V>> {
  using value_type = ORMap<K, V>;

  static SimMutator<value_type> random_op(Rng& rng, const ReplicaId& self,
                                          const WorkloadPool& pool,
                                          uint64_t tick) {
    uint64_t roll = rng.below(20);
    K k = ElementMaker<K>::make(rng.below(pool.keys));
    if (roll < 14) {
      SimMutator<V> inner = Workload<V>::random_op(rng, self, pool, tick);
      std::string label =
          "apply(" + element_label(k) + "," + inner.label + ")";
      return {std::move(label), [k, fn = std::move(inner.fn)](const value_type& m) {
                return m.apply_delta(k, [&fn](const V& cur) { return fn(cur); });
              }};
    }
    if (roll < 19) {
      return {"remove(" + element_label(k) + ")", [self, k](const value_type& m) {
                return m.remove_delta(self, k);
              }};
    }
    return {"clear", [self](const value_type& m) {
              return m.clear_delta(self);
            }};
  }

  static SimMutator<value_type> growth_op(uint64_t n, const ReplicaId& self) {
    K k = ElementMaker<K>::make(n % 8);
    SimMutator<V> inner = Workload<V>::growth_op(n, self);
    return {"apply", [k, fn = std::move(inner.fn)](const value_type& m) {
              return m.apply_delta(k, [&fn](const V& cur) { return fn(cur); });
            }};
  }

  static std::string describe(const value_type& m) {
    return "keys=" + std::to_string(m.keys().size());
  }

  static const CausalContext* context(const value_type& m) {
    return &m.context();
  }
};

}  // namespace dcrdt

#endif  // DCRDT_WORKLOAD_HPP
