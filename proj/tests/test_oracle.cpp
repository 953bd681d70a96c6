#include <doctest.h>

#include "dcrdt/causal_types.hpp"
#include "dcrdt/oracle.hpp"
#include "support/generators.hpp"

using namespace dcrdt;

namespace {

const ReplicaId a{"a"};
const ReplicaId b{"b"};
const ReplicaId i{"i"};

GCounter counter(std::map<ReplicaId, uint64_t> entries) {
  return GCounter::from_entries(std::move(entries));
}

}  // namespace

TEST_CASE("full-state counter mutator returns the whole updated map") {
  GCounter m = counter({{i, 3}, {a, 1}});
  GCounter full = oracle::gcounter_inc_full(i, m);
  CHECK(full == counter({{i, 4}, {a, 1}}));
  // The delta form reproduces it through a join.
  CHECK(full == join(m, GCounter::inc_delta(i, m)));
}

TEST_CASE("full-state anti-entropy: ship everything, join on receive") {
  oracle::FullStateReplica<GCounter> na(a);
  oracle::FullStateReplica<GCounter> nb(b);

  na.apply_full([&](const GCounter& m) { return oracle::gcounter_inc_full(a, m); });
  nb.apply_full([&](const GCounter& m) { return oracle::gcounter_inc_full(b, m); });

  // Two exchange rounds reach the same value everywhere.
  nb.receive(na.ship());
  na.receive(nb.ship());
  CHECK(na.state().value() == 2);
  CHECK(nb.state().value() == 2);
  CHECK(na.state() == nb.state());

  // Duplicate delivery changes nothing.
  CHECK_FALSE(na.receive(nb.ship()));

  oracle::FullStateReplica<GCounter> fa(a);
  oracle::FullStateReplica<GCounter> fb(b);
  fb.receive(fa.ship());
  CHECK(fb.state() == GCounter{});
}

TEST_CASE("decomposition checker: causal mutators through the join identity") {
  Rng rng(83);
  for (int k = 0; k < 500; ++k) {
    auto s = testgen::random_state<AWSet<std::string>>(rng);
    auto delta_add = [&](const AWSet<std::string>& v) {
      return v.add_delta(i, "x");
    };
    CHECK(oracle::check_decomposition(
        [&](const AWSet<std::string>& v) {
          return oracle::full_from_delta(delta_add, v);
        },
        delta_add, s));

    auto r = testgen::random_state<ORMap<std::string, AWSet<std::string>>>(rng);
    auto delta_apply = [&](const ORMap<std::string, AWSet<std::string>>& v) {
      return v.apply_delta("k", [&](const AWSet<std::string>& inner) {
        return inner.add_delta(i, "x");
      });
    };
    CHECK(oracle::check_decomposition(
        [&](const ORMap<std::string, AWSet<std::string>>& v) {
          return oracle::full_from_delta(delta_apply, v);
        },
        delta_apply, r));

    // Any op at bottom decomposes trivially.
    CHECK(oracle::check_decomposition(
        [&](const AWSet<std::string>& v) {
          return oracle::full_from_delta(delta_add, v);
        },
        delta_add, AWSet<std::string>{}));
  }
}

TEST_CASE("full-state replica can run delta-form mutators") {
  oracle::FullStateReplica<GCounter> node(a);
  node.apply_delta_form([&](const GCounter& m) {
    return GCounter::inc_delta(a, m);
  });
  node.apply_delta_form([&](const GCounter& m) {
    return GCounter::inc_delta(a, m);
  });
  CHECK(node.state() == counter({{a, 2}}));
}
