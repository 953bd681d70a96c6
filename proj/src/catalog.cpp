#include "dcrdt/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

namespace dcrdt {

namespace {

using nlohmann::json;

template <typename E>
E element_from_json(const json& j);

template <>
uint64_t element_from_json<uint64_t>(const json& j) {
  if (!j.is_number_unsigned()) throw scenario_error("expected a u64 element");
  return j.get<uint64_t>();
}

template <>
std::string element_from_json<std::string>(const json& j) {
  if (!j.is_string()) throw scenario_error("expected a string element");
  return j.get<std::string>();
}

const json& op_arg(const json& spec, size_t k) {
  const auto it = spec.find("args");
  if (it == spec.end() || !it->is_array() || it->size() <= k) {
    throw scenario_error("op '" + spec.value("op", "?") +
                         "' is missing argument " + std::to_string(k));
  }
  return (*it)[k];
}

[[noreturn]] void bad_op(const std::string& datatype, const json& spec) {
  throw scenario_error("datatype " + datatype + " has no op '" +
                       spec.value("op", "?") + "'");
}

// Scripted-op parser per datatype; mirrors the delta-mutator surface.
template <typename DT>
struct OpParser;

template <>
struct OpParser<GCounter> {
  static SimMutator<GCounter> parse(const json& spec, const ReplicaId& self,
                                    uint64_t) {
    std::string op = spec.value("op", "");
    if (op == "inc") {
      return {"inc", [self](const GCounter& m) {
                return GCounter::inc_delta(self, m);
              }};
    }
    bad_op("gcounter", spec);
  }
};

template <>
struct OpParser<PNCounter> {
  static SimMutator<PNCounter> parse(const json& spec, const ReplicaId& self,
                                     uint64_t) {
    std::string op = spec.value("op", "");
    if (op == "inc") {
      return {"inc", [self](const PNCounter& m) {
                return PNCounter::inc_delta(self, m);
              }};
    }
    if (op == "dec") {
      return {"dec", [self](const PNCounter& m) {
                return PNCounter::dec_delta(self, m);
              }};
    }
    bad_op("pncounter", spec);
  }
};

template <>
struct OpParser<LexCounter> {
  static SimMutator<LexCounter> parse(const json& spec, const ReplicaId& self,
                                      uint64_t) {
    std::string op = spec.value("op", "");
    if (op == "inc") {
      return {"inc", [self](const LexCounter& m) {
                return LexCounter::inc_delta(self, m);
              }};
    }
    if (op == "dec") {
      return {"dec", [self](const LexCounter& m) {
                return LexCounter::dec_delta(self, m);
              }};
    }
    bad_op("lexcounter", spec);
  }
};

template <Element E>
struct OpParser<GSet<E>> {
  static SimMutator<GSet<E>> parse(const json& spec, const ReplicaId&,
                                   uint64_t) {
    std::string op = spec.value("op", "");
    if (op == "insert") {
      E e = element_from_json<E>(op_arg(spec, 0));
      return {"insert", [e](const GSet<E>& s) {
                return GSet<E>::insert_delta(e, s);
              }};
    }
    bad_op("gset", spec);
  }
};

template <Element E>
struct OpParser<TwoPSet<E>> {
  static SimMutator<TwoPSet<E>> parse(const json& spec, const ReplicaId&,
                                      uint64_t) {
    std::string op = spec.value("op", "");
    if (op == "insert" || op == "remove") {
      E e = element_from_json<E>(op_arg(spec, 0));
      if (op == "insert") {
        return {"insert", [e](const TwoPSet<E>& s) {
                  return TwoPSet<E>::insert_delta(e, s);
                }};
      }
      return {"remove", [e](const TwoPSet<E>& s) {
                return TwoPSet<E>::remove_delta(e, s);
              }};
    }
    bad_op("twopset", spec);
  }
};

template <Element E>
struct OpParser<AWLWWSet<E>> {
  static SimMutator<AWLWWSet<E>> parse(const json& spec, const ReplicaId&,
                                       uint64_t tick) {
    std::string op = spec.value("op", "");
    if (op == "insert" || op == "remove") {
      E e = element_from_json<E>(op_arg(spec, 0));
      // Second argument is the client timestamp; defaults to the tick.
      uint64_t t = tick + 1;
      if (spec.contains("args") && spec.at("args").size() > 1) {
        t = element_from_json<uint64_t>(op_arg(spec, 1));
      }
      if (op == "insert") {
        return {"insert", [e, t](const AWLWWSet<E>& s) {
                  return AWLWWSet<E>::insert_delta(e, t, s);
                }};
      }
      return {"remove", [e, t](const AWLWWSet<E>& s) {
                return AWLWWSet<E>::remove_delta(e, t, s);
              }};
    }
    bad_op("awlwwset", spec);
  }
};

template <>
struct OpParser<EWFlag> {
  static SimMutator<EWFlag> parse(const json& spec, const ReplicaId& self,
                                  uint64_t) {
    std::string op = spec.value("op", "");
    if (op == "enable") {
      return {"enable", [self](const EWFlag& f) {
                return f.enable_delta(self);
              }};
    }
    if (op == "disable") {
      return {"disable", [self](const EWFlag& f) {
                return f.disable_delta(self);
              }};
    }
    bad_op("ewflag", spec);
  }
};

template <typename V>
struct OpParser<MVRegister<V>> {
  static SimMutator<MVRegister<V>> parse(const json& spec,
                                         const ReplicaId& self, uint64_t) {
    std::string op = spec.value("op", "");
    if (op == "write") {
      V v = element_from_json<V>(op_arg(spec, 0));
      return {"write", [self, v](const MVRegister<V>& r) {
                return r.write_delta(self, v);
              }};
    }
    if (op == "clear") {
      return {"clear", [self](const MVRegister<V>& r) {
                return r.clear_delta(self);
              }};
    }
    bad_op("mvreg", spec);
  }
};

template <Element E>
struct OpParser<AWSet<E>> {
  static SimMutator<AWSet<E>> parse(const json& spec, const ReplicaId& self,
                                    uint64_t) {
    std::string op = spec.value("op", "");
    if (op == "add" || op == "remove") {
      E e = element_from_json<E>(op_arg(spec, 0));
      if (op == "add") {
        return {"add", [self, e](const AWSet<E>& s) {
                  return s.add_delta(self, e);
                }};
      }
      return {"remove", [self, e](const AWSet<E>& s) {
                return s.remove_delta(self, e);
              }};
    }
    if (op == "clear") {
      return {"clear", [self](const AWSet<E>& s) {
                return s.clear_delta(self);
              }};
    }
    bad_op("awset", spec);
  }
};

template <Element E>
struct OpParser<RWSet<E>> {
  static SimMutator<RWSet<E>> parse(const json& spec, const ReplicaId& self,
                                    uint64_t) {
    std::string op = spec.value("op", "");
    if (op == "add" || op == "remove") {
      E e = element_from_json<E>(op_arg(spec, 0));
      if (op == "add") {
        return {"add", [self, e](const RWSet<E>& s) {
                  return s.add_delta(self, e);
                }};
      }
      return {"remove", [self, e](const RWSet<E>& s) {
                return s.remove_delta(self, e);
              }};
    }
    if (op == "clear") {
      return {"clear", [self](const RWSet<E>& s) {
                return s.clear_delta(self);
              }};
    }
    bad_op("rwset", spec);
  }
};

template <Element K, CausalDatatype V>
struct OpParser<ORMap<K, V>> {
  static SimMutator<ORMap<K, V>> parse(const json& spec, const ReplicaId& self,
                                       uint64_t tick) {
    using DT = ORMap<K, V>;
    std::string op = spec.value("op", "");
    if (op == "apply") {
      K k = element_from_json<K>(op_arg(spec, 0));
      SimMutator<V> inner = OpParser<V>::parse(op_arg(spec, 1), self, tick);
      return {"apply(" + inner.label + ")",
              [k, fn = std::move(inner.fn)](const DT& m) {
                return m.apply_delta(k, [&fn](const V& cur) { return fn(cur); });
              }};
    }
    if (op == "remove") {
      K k = element_from_json<K>(op_arg(spec, 0));
      return {"remove", [self, k](const DT& m) {
                return m.remove_delta(self, k);
              }};
    }
    if (op == "clear") {
      return {"clear", [self](const DT& m) { return m.clear_delta(self); }};
    }
    bad_op("ormap", spec);
  }
};

template <typename DT>
typename Simulator<Workload<DT>>::Plan build_plan(
    const Scenario& sc, const std::string& datatype,
    std::optional<uint64_t> seed_override) {
  using Sim = Simulator<Workload<DT>>;
  typename Sim::Plan plan;
  plan.datatype = datatype;
  for (const std::string& r : sc.replicas) plan.replicas.push_back(ReplicaId{r});
  plan.neighbors = sc.adjacency();
  plan.engine = sc.engine;
  plan.periods = sc.periods;
  plan.faults = sc.faults;
  if (seed_override) plan.faults.seed = *seed_override;

  if (sc.random) {
    uint64_t base =
        sc.random->seed ? *sc.random->seed : mix_seed(plan.faults.seed, 1);
    for (uint32_t node = 0; node < sc.replicas.size(); ++node) {
      Rng rng(mix_seed(base, node));
      const ReplicaId self{sc.replicas[node]};
      for (uint32_t k = 0; k < sc.random->ops_per_replica; ++k) {
        uint64_t tick = 1 + k;
        typename Sim::Op op;
        op.at = tick;
        op.node = node;
        op.mut = Workload<DT>::random_op(rng, self, sc.random->pool, tick);
        plan.ops.push_back(std::move(op));
      }
    }
  } else {
    for (const Scenario::ScriptOp& s : sc.script) {
      typename Sim::Op op;
      op.at = s.at;
      op.node = static_cast<uint32_t>(sc.replica_index(s.node));
      op.mut = OpParser<DT>::parse(s.op, ReplicaId{s.node}, s.at);
      plan.ops.push_back(std::move(op));
    }
  }

  for (const Scenario::Crash& c : sc.crashes) {
    plan.crashes.push_back(
        {static_cast<uint32_t>(sc.replica_index(c.node)), c.at, c.recover_at});
  }
  for (const Scenario::Partition& p : sc.partitions) {
    typename Sim::PartitionChange pc;
    pc.at = p.at;
    if (!p.groups.empty()) {
      pc.group_of.assign(sc.replicas.size(), 0);
      for (uint32_t g = 0; g < p.groups.size(); ++g) {
        for (const std::string& n : p.groups[g]) {
          pc.group_of[sc.replica_index(n)] = g;
        }
      }
      // A single group is the same as healed.
      if (p.groups.size() == 1) pc.group_of.clear();
    }
    plan.partitions.push_back(std::move(pc));
  }
  return plan;
}

template <typename DT>
class DriverImpl final : public Driver {
 public:
  DriverImpl(std::string name, bool causal)
      : name_(std::move(name)), causal_(causal) {}

  const std::string& name() const override { return name_; }
  bool causal() const override { return causal_; }

  SimReport run(const Scenario& sc,
                std::optional<uint64_t> seed_override) const override {
    Simulator<Workload<DT>> sim(build_plan<DT>(sc, name_, seed_override));
    return sim.run();
  }

  TwinReport twin(const Scenario& sc,
                  std::optional<uint64_t> seed_override) const override {
    if (sc.engine.kind != EngineKind::causal) {
      throw scenario_error("twin execution requires engine.kind = causal");
    }
    Simulator<Workload<DT>> sim(build_plan<DT>(sc, name_, seed_override));
    return sim.run_twin();
  }

  SizebenchReport sizebench(uint64_t ops) const override {
    SizebenchReport report;
    report.datatype = name_;
    DT state{};
    const ReplicaId self{"bench"};
    for (uint64_t k = 0; k < ops; ++k) {
      SimMutator<DT> mut = Workload<DT>::growth_op(k, self);
      DT delta = apply_mutation(state, mut.fn);
      report.rows.push_back(SizebenchRow{
          k + 1, encoded_size(delta), encoded_size(state)});
    }
    return report;
  }

 private:
  std::string name_;
  bool causal_;
};

using Factory = std::function<std::unique_ptr<Driver>(const std::string&)>;

template <typename DT>
Factory factory(bool causal) {
  return [causal](const std::string& name) {
    return std::make_unique<DriverImpl<DT>>(name, causal);
  };
}

const std::map<std::string, Factory>& registry() {
  static const std::map<std::string, Factory> table = [] {
    std::map<std::string, Factory> t;
    t["gcounter"] = factory<GCounter>(false);
    t["pncounter"] = factory<PNCounter>(false);
    t["lexcounter"] = factory<LexCounter>(false);
    t["gset(u64)"] = factory<GSet<uint64_t>>(false);
    t["gset(string)"] = factory<GSet<std::string>>(false);
    t["twopset(u64)"] = factory<TwoPSet<uint64_t>>(false);
    t["twopset(string)"] = factory<TwoPSet<std::string>>(false);
    t["awlwwset(u64)"] = factory<AWLWWSet<uint64_t>>(false);
    t["awlwwset(string)"] = factory<AWLWWSet<std::string>>(false);
    t["ewflag"] = factory<EWFlag>(true);
    t["mvreg(u64)"] = factory<MVRegister<uint64_t>>(true);
    t["mvreg(string)"] = factory<MVRegister<std::string>>(true);
    t["awset(u64)"] = factory<AWSet<uint64_t>>(true);
    t["awset(string)"] = factory<AWSet<std::string>>(true);
    t["rwset(u64)"] = factory<RWSet<uint64_t>>(true);
    t["rwset(string)"] = factory<RWSet<std::string>>(true);
    t["ormap(string,awset(string))"] =
        factory<ORMap<std::string, AWSet<std::string>>>(true);
    t["ormap(string,rwset(string))"] =
        factory<ORMap<std::string, RWSet<std::string>>>(true);
    t["ormap(string,mvreg(u64))"] =
        factory<ORMap<std::string, MVRegister<uint64_t>>>(true);
    t["ormap(string,mvreg(string))"] =
        factory<ORMap<std::string, MVRegister<std::string>>>(true);
    t["ormap(string,ewflag)"] = factory<ORMap<std::string, EWFlag>>(true);
    t["ormap(string,ormap(string,mvreg(string)))"] =
        factory<ORMap<std::string, ORMap<std::string, MVRegister<std::string>>>>(
            true);
    t["ormap(string,ormap(string,awset(string)))"] =
        factory<ORMap<std::string, ORMap<std::string, AWSet<std::string>>>>(
            true);
    return t;
  }();
  return table;
}

}  // namespace

std::string normalize_typespec(const std::string& spec) {
  std::string out;
  for (char c : spec) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  // Aliases.
  auto replace_all = [&out](const std::string& from, const std::string& to) {
    size_t pos = 0;
    while ((pos = out.find(from, pos)) != std::string::npos) {
      out.replace(pos, from.size(), to);
      pos += to.size();
    }
  };
  replace_all("2pset", "twopset");
  replace_all("mvregister", "mvreg");
  replace_all("uint64", "u64");
  return out;
}

std::unique_ptr<Driver> make_driver(const std::string& spec) {
  std::string key = normalize_typespec(spec);
  const auto& table = registry();
  auto it = table.find(key);
  if (it == table.end()) {
    std::string msg = "unknown datatype '" + spec + "'; supported:";
    for (const std::string& name : supported_datatypes()) msg += " " + name;
    throw scenario_error(msg);
  }
  return it->second(key);
}

const std::vector<std::string>& supported_datatypes() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, f] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

}  // namespace dcrdt
