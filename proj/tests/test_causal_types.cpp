#include <doctest.h>

#include "dcrdt/causal_types.hpp"
#include "support/generators.hpp"
#include "support/laws.hpp"

using namespace dcrdt;

namespace {

const ReplicaId i{"i"};
const ReplicaId j{"j"};

Dot dot(const ReplicaId& r, uint64_t n) { return Dot{r, n}; }

// Concurrent evolution from a common ancestor: both sides apply their delta
// to the ancestor, then the diverged states are joined both ways.
template <typename DT>
DT concurrent(const DT& ancestor, const DT& delta_left, const DT& delta_right) {
  DT left = join(ancestor, delta_left);
  DT right = join(ancestor, delta_right);
  DT lr = join(left, right);
  DT rl = join(right, left);
  REQUIRE(lr == rl);
  return lr;
}

}  // namespace

TEST_CASE("ewflag: enable replaces all dots") {
  EWFlag bottom;
  CHECK_FALSE(bottom.read());

  EWFlag d = bottom.enable_delta(i);
  CHECK(d.store().set() == std::set<Dot>{dot(i, 1)});
  CHECK(d.context() == CausalContext::from_dots({dot(i, 1)}));
  CHECK(join(bottom, d).read());
}

TEST_CASE("ewflag: concurrent enable wins over disable") {
  EWFlag common = join(EWFlag{}, EWFlag{}.enable_delta(i));  // enabled via (i,1)
  EWFlag enable2 = common.enable_delta(j);
  EWFlag disable = common.disable_delta(i);
  EWFlag merged = concurrent(common, enable2, disable);
  CHECK(merged.read());
  // Only the fresh enable dot survives.
  CHECK(merged.store().set() == std::set<Dot>{dot(j, 1)});

  // Disable wins sequentially.
  EWFlag off = join(common, common.disable_delta(i));
  CHECK_FALSE(off.read());
}

TEST_CASE("mvregister: writes tag values with a single dot") {
  MVRegister<std::string> bottom;
  CHECK(bottom.read().empty());

  MVRegister<std::string> d = bottom.write_delta(i, "v");
  CHECK(d.store().entries().size() == 1);
  CHECK(d.store().entries().begin()->first == dot(i, 1));
  CHECK(join(bottom, d).read() == std::set<std::string>{"v"});
}

TEST_CASE("mvregister: concurrent writes both survive, next write clears") {
  MVRegister<std::string> bottom;
  MVRegister<std::string> merged = concurrent(
      bottom, bottom.write_delta(i, "vi"), bottom.write_delta(j, "vj"));
  CHECK(merged.read() == std::set<std::string>{"vi", "vj"});

  MVRegister<std::string> overwritten = join(merged, merged.write_delta(i, "w"));
  CHECK(overwritten.read() == std::set<std::string>{"w"});

  MVRegister<std::string> cleared = join(merged, merged.clear_delta(i));
  CHECK(cleared.read().empty());
}

TEST_CASE("awset: add delta carries the covered dots in its context") {
  AWSet<std::string> bottom;
  CHECK(bottom.elements().empty());

  AWSet<std::string> d = bottom.add_delta(i, "e");
  CHECK(d.store().value_or_bottom("e").set() == std::set<Dot>{dot(i, 1)});
  CHECK(d.context() == CausalContext::from_dots({dot(i, 1)}));
}

TEST_CASE("awset: concurrent add wins over remove") {
  AWSet<std::string> common = join(AWSet<std::string>{},
                                   AWSet<std::string>{}.add_delta(i, "e"));
  AWSet<std::string> add_j = common.add_delta(j, "e");
  AWSet<std::string> rem_i = common.remove_delta(i, "e");
  CHECK(rem_i.store().is_bottom());

  AWSet<std::string> merged = concurrent(common, add_j, rem_i);
  CHECK(merged.contains("e"));
  // The surviving dot is the concurrent add's, not the removed one.
  CHECK(merged.store().value_or_bottom("e").set() == std::set<Dot>{dot(j, 1)});

  // Sequential remove still removes.
  AWSet<std::string> removed = join(common, common.remove_delta(i, "e"));
  CHECK_FALSE(removed.contains("e"));
  CHECK(removed.store().is_bottom());
}

TEST_CASE("awset: clear covers every dot") {
  AWSet<std::string> s;
  s.join_with(s.add_delta(i, "a"));
  s.join_with(s.add_delta(j, "b"));
  AWSet<std::string> cleared = join(s, s.clear_delta(i));
  CHECK(cleared.elements().empty());
}

TEST_CASE("rwset: concurrent remove wins over add") {
  RWSet<std::string> bottom;
  RWSet<std::string> add_i = bottom.add_delta(i, "e");
  RWSet<std::string> rem_j = bottom.remove_delta(j, "e");
  RWSet<std::string> merged = concurrent(bottom, add_i, rem_j);
  CHECK_FALSE(merged.contains("e"));
  // Both markers survive the join; the false marker decides membership.
  const auto& marks = merged.store().value_or_bottom("e");
  CHECK(marks.value_or_bottom(true).set() == std::set<Dot>{dot(i, 1)});
  CHECK(marks.value_or_bottom(false).set() == std::set<Dot>{dot(j, 1)});

  RWSet<std::string> added = join(bottom, add_i);
  CHECK(added.contains("e"));
  CHECK(bottom.elements().empty());

  // A later add observing the remove re-adds the element.
  RWSet<std::string> readded = join(merged, merged.add_delta(i, "e"));
  CHECK(readded.contains("e"));
}

TEST_CASE("ormap: apply evaluates on the key paired with the map context") {
  using Map = ORMap<std::string, AWSet<std::string>>;
  Map bottom;
  Map d = bottom.apply_delta("k", [](const AWSet<std::string>& s) {
    return s.add_delta(i, "x");
  });
  CHECK(d.keys() == std::set<std::string>{"k"});
  CHECK(d.store().value_or_bottom("k").value_or_bottom("x").set() ==
        std::set<Dot>{dot(i, 1)});
  CHECK(d.context() == CausalContext::from_dots({dot(i, 1)}));

  Map removed_bottom = bottom.remove_delta(i, "k");
  CHECK(removed_bottom.store().is_bottom());
  CHECK(removed_bottom.context().empty());
}

TEST_CASE("ormap: observed remove leaves concurrent updates intact") {
  using Map = ORMap<std::string, AWSet<std::string>>;
  Map common;
  common.join_with(common.apply_delta("k", [](const AWSet<std::string>& s) {
    return s.add_delta(i, "x");
  }));

  Map rem = common.remove_delta(i, "k");
  Map app = common.apply_delta("k", [](const AWSet<std::string>& s) {
    return s.add_delta(j, "y");
  });
  Map merged = concurrent(common, rem, app);

  // The key survives with only the concurrently applied update's effect.
  CHECK(merged.contains("k"));
  auto embedded = merged.value_at("k");
  CHECK(embedded.elements() == std::set<std::string>{"y"});

  // Re-created keys are unaffected by the old removal: the shared context
  // keeps dot (i,1) covered, so a fresh add at i picks a fresh dot.
  Map recreated = join(merged, merged.apply_delta(
                                   "k", [](const AWSet<std::string>& s) {
                                     return s.add_delta(i, "z");
                                   }));
  CHECK(recreated.value_at("k").elements() ==
        std::set<std::string>{"y", "z"});

  // Reads of a removed key fall back to the embedded bottom query.
  Map all_removed = join(merged, merged.remove_delta(i, "k"));
  CHECK_FALSE(all_removed.contains("k"));
  CHECK(all_removed.value_at("k").elements().empty());
}

TEST_CASE("ormap: nesting two levels deep") {
  using Inner = ORMap<std::string, MVRegister<uint64_t>>;
  using Outer = ORMap<std::string, Inner>;

  auto write_inner = [](const std::string& key, const ReplicaId& who,
                        uint64_t v) {
    return [key, who, v](const Outer& m) {
      return m.apply_delta(key, [&](const Inner& inner) {
        return inner.apply_delta("leaf", [&](const MVRegister<uint64_t>& r) {
          return r.write_delta(who, v);
        });
      });
    };
  };

  Outer common;
  common.join_with(write_inner("k", i, 1)(common));

  // Concurrent write at j and remove of the outer key at i.
  Outer write_j = write_inner("k", j, 2)(common);
  Outer rem_i = common.remove_delta(i, "k");
  Outer merged = concurrent(common, write_j, rem_i);

  CHECK(merged.contains("k"));
  CHECK(merged.value_at("k").value_at("leaf").read() ==
        std::set<uint64_t>{2});

  // Same discipline at the inner level.
  Inner inner_common = merged.value_at("k");
  Inner iw = inner_common.apply_delta("leaf", [](const MVRegister<uint64_t>& r) {
    return r.write_delta(j, 3);
  });
  Inner ir = inner_common.remove_delta(i, "leaf");
  Inner inner_merged = concurrent(inner_common, iw, ir);
  CHECK(inner_merged.value_at("leaf").read() == std::set<uint64_t>{3});
}

TEST_CASE("causal types: lattice laws and the dots-in-context invariant") {
  Rng rng(53);
  auto gen = [](auto tag) {
    using T = decltype(tag);
    return [](Rng& r) { return testgen::random_state<T>(r); };
  };
  CHECK(testgen::lattice_laws_violation<EWFlag>(rng, 300, gen(EWFlag{})) == "");
  CHECK(testgen::lattice_laws_violation<MVRegister<uint64_t>>(
            rng, 300, gen(MVRegister<uint64_t>{})) == "");
  CHECK(testgen::lattice_laws_violation<AWSet<std::string>>(
            rng, 300, gen(AWSet<std::string>{})) == "");
  CHECK(testgen::lattice_laws_violation<RWSet<uint64_t>>(
            rng, 300, gen(RWSet<uint64_t>{})) == "");
  using Map = ORMap<std::string, AWSet<std::string>>;
  CHECK(testgen::lattice_laws_violation<Map>(rng, 200, gen(Map{})) == "");
  using Nested = ORMap<std::string, ORMap<std::string, MVRegister<uint64_t>>>;
  CHECK(testgen::lattice_laws_violation<Nested>(rng, 150, gen(Nested{})) == "");

  for (int k = 0; k < 200; ++k) {
    auto a = testgen::random_state<Map>(rng);
    auto b = testgen::random_state<Map>(rng);
    CHECK(a.invariant_holds());
    auto m = join(a, b);
    CHECK(m.invariant_holds());
    for (const auto& [key, store] : m.store().entries()) {
      CHECK_FALSE(store.is_bottom());
    }
  }
}

TEST_CASE("causal types: convergence under reordering and duplication") {
  Rng rng(59);
  for (int round = 0; round < 60; ++round) {
    // A chain of deltas produced against an evolving state, then delivered
    // to two fresh replicas in different orders with duplicates.
    std::vector<AWSet<uint64_t>> deltas;
    AWSet<uint64_t> source;
    WorkloadPool pool{6, 4};
    for (int k = 0; k < 12; ++k) {
      auto mut = Workload<AWSet<uint64_t>>::random_op(
          rng, testgen::replica(rng.below(3)), pool, k);
      deltas.push_back(apply_mutation(source, mut.fn));
    }
    AWSet<uint64_t> forward;
    for (const auto& d : deltas) forward.join_with(d);
    AWSet<uint64_t> shuffled;
    std::vector<size_t> order(deltas.size());
    for (size_t k = 0; k < order.size(); ++k) order[k] = k;
    for (size_t k = order.size(); k > 1; --k) {
      std::swap(order[k - 1], order[rng.below(k)]);
    }
    for (size_t idx : order) {
      shuffled.join_with(deltas[idx]);
      if (rng.below(3) == 0) shuffled.join_with(deltas[idx]);
    }
    CHECK(forward == shuffled);
    CHECK(forward == source);
  }
}
