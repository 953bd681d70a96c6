#ifndef DCRDT_TESTS_GENERATORS_HPP
#define DCRDT_TESTS_GENERATORS_HPP

#include <vector>

#include "dcrdt/rng.hpp"
#include "dcrdt/workload.hpp"

// Random reachable states, built by folding random delta-mutations from a
// handful of replicas into bottom. Causal states produced this way always
// satisfy dots(store) ⊆ context.
namespace dcrdt::testgen {

inline ReplicaId replica(uint64_t k) {
  return ReplicaId{std::string(1, static_cast<char>('a' + (k % 6)))};
}

template <typename DT>
DT random_state(Rng& rng, uint32_t max_ops = 8) {
  WorkloadPool pool{8, 4};
  DT state{};
  uint64_t n = rng.below(max_ops + 1);
  for (uint64_t k = 0; k < n; ++k) {
    ReplicaId who = replica(rng.below(6));
    SimMutator<DT> mut = Workload<DT>::random_op(rng, who, pool, k);
    apply_mutation(state, mut.fn);
  }
  return state;
}

// One random delta-mutation for a state (not yet applied).
template <typename DT>
SimMutator<DT> random_mutator(Rng& rng, uint64_t tick = 0) {
  WorkloadPool pool{8, 4};
  return Workload<DT>::random_op(rng, replica(rng.below(6)), pool, tick);
}

template <typename DT>
std::vector<DT> random_states(Rng& rng, size_t count, uint32_t max_ops = 8) {
  std::vector<DT> out;
  out.reserve(count);
  for (size_t k = 0; k < count; ++k) out.push_back(random_state<DT>(rng, max_ops));
  return out;
}

}  // namespace dcrdt::testgen

#endif  // DCRDT_TESTS_GENERATORS_HPP
