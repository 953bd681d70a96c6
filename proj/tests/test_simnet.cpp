#include <doctest.h>

#include "dcrdt/simnet.hpp"
#include "dcrdt/workload.hpp"
#include "support/generators.hpp"

using namespace dcrdt;

namespace {

template <typename DT>
using Plan = typename Simulator<Workload<DT>>::Plan;

template <typename DT>
Plan<DT> mesh_plan(uint32_t nodes, EngineKind kind, FaultConfig faults) {
  Plan<DT> plan;
  plan.datatype = "test";
  for (uint32_t n = 0; n < nodes; ++n) {
    plan.replicas.push_back(testgen::replica(n));
  }
  plan.neighbors.resize(nodes);
  for (uint32_t x = 0; x < nodes; ++x) {
    for (uint32_t y = 0; y < nodes; ++y) {
      if (x != y) plan.neighbors[x].push_back(y);
    }
  }
  plan.engine.kind = kind;
  plan.faults = faults;
  return plan;
}

template <typename DT>
void add_random_ops(Plan<DT>& plan, uint32_t per_node, uint64_t seed) {
  WorkloadPool pool{12, 4};
  for (uint32_t n = 0; n < plan.replicas.size(); ++n) {
    Rng rng(mix_seed(seed, n));
    for (uint32_t k = 0; k < per_node; ++k) {
      typename Simulator<Workload<DT>>::Op op;
      op.at = 1 + k;
      op.node = n;
      op.mut = Workload<DT>::random_op(rng, plan.replicas[n], pool, op.at);
      plan.ops.push_back(std::move(op));
    }
  }
}

}  // namespace

TEST_CASE("simnet: single node converges trivially with no messages") {
  auto plan = mesh_plan<GCounter>(1, EngineKind::basic, FaultConfig{});
  typename Simulator<Workload<GCounter>>::Op op;
  op.at = 1;
  op.node = 0;
  op.mut = {"inc", [](const GCounter& m) {
              return GCounter::inc_delta(ReplicaId{"a"}, m);
            }};
  plan.ops.push_back(op);

  Simulator<Workload<GCounter>> sim(plan);
  SimReport r = sim.run();
  CHECK(r.converged);
  CHECK(r.quiesced);
  CHECK(r.stats.sends == 0);
  CHECK(sim.state_of(0).value() == 1);
}

TEST_CASE("simnet: lossy basic anti-entropy still counts every inc") {
  FaultConfig faults;
  faults.drop_prob = 0.5;
  faults.dup_prob = 0.0;
  faults.max_delay = 10;
  faults.seed = 99;
  faults.eventual_delivery = true;

  for (bool transitive : {false, true}) {
    auto plan = mesh_plan<GCounter>(3, EngineKind::basic, faults);
    plan.engine.transitive = transitive;
    for (uint32_t n = 0; n < 3; ++n) {
      for (uint32_t k = 0; k < 10; ++k) {
        typename Simulator<Workload<GCounter>>::Op op;
        op.at = 1 + k;
        op.node = n;
        ReplicaId self = plan.replicas[n];
        op.mut = {"inc", [self](const GCounter& m) {
                    return GCounter::inc_delta(self, m);
                  }};
        plan.ops.push_back(op);
      }
    }
    Simulator<Workload<GCounter>> sim(plan);
    SimReport r = sim.run();
    CHECK(r.converged);
    for (uint32_t n = 0; n < 3; ++n) CHECK(sim.state_of(n).value() == 30);
  }
}

TEST_CASE("simnet: identical seeds give byte-identical reports") {
  FaultConfig faults;
  faults.drop_prob = 0.4;
  faults.dup_prob = 0.3;
  faults.max_delay = 7;
  faults.seed = 1234;

  auto plan = mesh_plan<AWSet<uint64_t>>(3, EngineKind::basic, faults);
  add_random_ops<AWSet<uint64_t>>(plan, 15, 5);

  Simulator<Workload<AWSet<uint64_t>>> sim1(plan);
  Simulator<Workload<AWSet<uint64_t>>> sim2(plan);
  SimReport r1 = sim1.run();
  SimReport r2 = sim2.run();
  CHECK(r1.render() == r2.render());

  // A different seed produces a different trace (message counts move).
  plan.faults.seed = 4321;
  Simulator<Workload<AWSet<uint64_t>>> sim3(plan);
  SimReport r3 = sim3.run();
  CHECK(r3.converged);
  CHECK(r1.render() != r3.render());
}

TEST_CASE("simnet: duplication changes traffic but never final states") {
  FaultConfig base;
  base.drop_prob = 0.2;
  base.dup_prob = 0.15;
  base.max_delay = 5;
  base.seed = 77;

  // Counter increments commute with delivery timing, so the converged state
  // is a pure function of the op script and must survive a doubled dup rate.
  auto plan = mesh_plan<GCounter>(3, EngineKind::causal, base);
  for (uint32_t n = 0; n < 3; ++n) {
    for (uint32_t k = 0; k < 20; ++k) {
      typename Simulator<Workload<GCounter>>::Op op;
      op.at = 1 + k;
      op.node = n;
      ReplicaId self = plan.replicas[n];
      op.mut = {"inc", [self](const GCounter& m) {
                  return GCounter::inc_delta(self, m);
                }};
      plan.ops.push_back(op);
    }
  }
  Simulator<Workload<GCounter>> sim(plan);
  SimReport r = sim.run();

  auto doubled_plan = plan;
  doubled_plan.faults.dup_prob = 0.30;
  Simulator<Workload<GCounter>> sim2(doubled_plan);
  SimReport r2 = sim2.run();

  CHECK(r.converged);
  CHECK(r2.converged);
  CHECK(r2.stats.duplicates > r.stats.duplicates);
  CHECK(r.nodes[0].digest == r2.nodes[0].digest);

  // Dot allocation in causal datatypes observes delivery timing, so only
  // convergence is timing-independent there.
  auto aw = mesh_plan<AWSet<uint64_t>>(3, EngineKind::causal, base);
  add_random_ops<AWSet<uint64_t>>(aw, 20, 11);
  aw.faults.dup_prob = 0.30;
  Simulator<Workload<AWSet<uint64_t>>> sim3(aw);
  CHECK(sim3.run().converged);
}

TEST_CASE("simnet: causal runs keep contexts contiguous, acks monotone") {
  FaultConfig faults;
  faults.drop_prob = 0.3;
  faults.dup_prob = 0.3;
  faults.max_delay = 6;
  faults.seed = 31337;

  auto plan = mesh_plan<AWSet<uint64_t>>(4, EngineKind::causal, faults);
  add_random_ops<AWSet<uint64_t>>(plan, 25, 17);
  Simulator<Workload<AWSet<uint64_t>>> sim(plan);
  SimReport r = sim.run();
  CHECK(r.converged);
  CHECK(r.stats.merging_checks > 0);
  CHECK(r.stats.merging_violations == 0);
  CHECK(r.contexts_checked);
  CHECK(r.contexts_contiguous);
  CHECK(r.counters_monotonic);
}

TEST_CASE("simnet: twin execution matches the full-state oracle") {
  FaultConfig faults;
  faults.drop_prob = 0.35;
  faults.dup_prob = 0.3;
  faults.max_delay = 5;
  faults.seed = 4242;

  auto plan = mesh_plan<AWSet<uint64_t>>(3, EngineKind::causal, faults);
  add_random_ops<AWSet<uint64_t>>(plan, 25, 23);
  Simulator<Workload<AWSet<uint64_t>>> sim(plan);
  TwinReport tr = sim.run_twin();
  CHECK(tr.equivalence);
  CHECK(tr.aligned_checks > 0);
  CHECK(tr.delta_run.stats.merging_violations == 0);
  CHECK(tr.delta_run.converged);
  REQUIRE(tr.oracle_nodes.size() == 3);
  for (size_t n = 0; n < 3; ++n) {
    CHECK(tr.oracle_nodes[n].digest == tr.delta_run.nodes[n].digest);
  }
}

TEST_CASE("simnet: twin equivalence survives crash and recovery") {
  FaultConfig faults;
  faults.drop_prob = 0.25;
  faults.dup_prob = 0.2;
  faults.max_delay = 4;
  faults.seed = 555;

  auto plan = mesh_plan<ORMap<std::string, AWSet<std::string>>>(
      3, EngineKind::causal, faults);
  add_random_ops<ORMap<std::string, AWSet<std::string>>>(plan, 20, 29);
  plan.crashes.push_back({1, 8, 15});
  using Sim = Simulator<Workload<ORMap<std::string, AWSet<std::string>>>>;
  Sim sim(plan);
  TwinReport tr = sim.run_twin();
  CHECK(tr.equivalence);
  CHECK(tr.delta_run.counters_monotonic);
  CHECK(tr.delta_run.stats.merging_violations == 0);
  CHECK(tr.delta_run.converged);
  CHECK(tr.delta_run.stats.skipped_ops > 0);
}

TEST_CASE("simnet: empty scenario quiesces to equal bottoms") {
  auto plan = mesh_plan<AWSet<uint64_t>>(3, EngineKind::causal, FaultConfig{});
  Simulator<Workload<AWSet<uint64_t>>> sim(plan);
  TwinReport tr = sim.run_twin();
  CHECK(tr.equivalence);
  CHECK(tr.delta_run.converged);
  CHECK(tr.delta_run.stats.sends == 0);
}

TEST_CASE("simnet: an unhealed total partition prevents convergence") {
  FaultConfig faults;
  faults.seed = 9;
  faults.eventual_delivery = false;

  auto plan = mesh_plan<GCounter>(3, EngineKind::basic, faults);
  for (uint32_t n = 0; n < 3; ++n) {
    typename Simulator<Workload<GCounter>>::Op op;
    op.at = 3;
    op.node = n;
    ReplicaId self = plan.replicas[n];
    op.mut = {"inc", [self](const GCounter& m) {
                return GCounter::inc_delta(self, m);
              }};
    plan.ops.push_back(op);
  }
  plan.partitions.push_back({1, {0, 1, 1}});  // a | b c, never healed

  Simulator<Workload<GCounter>> sim(plan);
  SimReport r = sim.run();
  CHECK(r.quiesced);
  CHECK_FALSE(r.converged);
  CHECK_FALSE(r.ok());

  // The same split healed mid-run converges once full states flow again;
  // deltas shipped into the partition were legitimately lost.
  auto healed = plan;
  healed.engine.policy.mode = ShipPolicy::Mode::always_state;
  healed.partitions.push_back({40, {}});
  Simulator<Workload<GCounter>> sim2(healed);
  SimReport r2 = sim2.run();
  CHECK(r2.converged);
  CHECK(sim2.state_of(0).value() == 3);
}

TEST_CASE("simnet: eventual delivery outlasts an op-phase partition") {
  // The partition is never explicitly healed; blocked deliveries park as
  // retries and go through once fault injection ends.
  FaultConfig faults;
  faults.seed = 14;
  faults.max_delay = 3;
  faults.eventual_delivery = true;

  auto plan = mesh_plan<GCounter>(3, EngineKind::basic, faults);
  for (uint64_t at : {3, 7}) {
    for (uint32_t n = 0; n < 3; ++n) {
      typename Simulator<Workload<GCounter>>::Op op;
      op.at = at;
      op.node = n;
      ReplicaId self = plan.replicas[n];
      op.mut = {"inc", [self](const GCounter& m) {
                  return GCounter::inc_delta(self, m);
                }};
      plan.ops.push_back(op);
    }
  }
  plan.partitions.push_back({1, {0, 1, 1}});

  Simulator<Workload<GCounter>> sim(plan);
  SimReport r = sim.run();
  CHECK(r.converged);
  CHECK(r.stats.retries > 0);
  CHECK(sim.state_of(0).value() == 6);
}

TEST_CASE("simnet: retries route around crashed destinations") {
  FaultConfig faults;
  faults.seed = 12;
  faults.max_delay = 3;

  auto plan = mesh_plan<GCounter>(2, EngineKind::causal, faults);
  typename Simulator<Workload<GCounter>>::Op op;
  op.at = 1;
  op.node = 0;
  op.mut = {"inc", [](const GCounter& m) {
              return GCounter::inc_delta(ReplicaId{"a"}, m);
            }};
  plan.ops.push_back(op);
  plan.crashes.push_back({1, 2, 30});

  Simulator<Workload<GCounter>> sim(plan);
  SimReport r = sim.run();
  CHECK(r.converged);
  CHECK(r.stats.retries > 0);
  CHECK(sim.state_of(1).value() == 1);
}
