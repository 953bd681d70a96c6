#ifndef DCRDT_SCENARIO_HPP
#define DCRDT_SCENARIO_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dcrdt/simnet.hpp"
#include "dcrdt/workload.hpp"

namespace dcrdt {

class scenario_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A scenario describes one simulation: the datatype under test, the replica
// set and topology, the engine, the fault model, and either a scripted or a
// seeded random workload. Scenario files are JSON; see the README for the
// schema.
struct Scenario {
  struct ScriptOp {
    uint64_t at = 0;
    std::string node;
    nlohmann::json op;  // {"op": name, "args": [...]}
  };

  struct RandomWorkload {
    uint32_t ops_per_replica = 0;
    std::optional<uint64_t> seed;  // derived from the run seed when absent
    WorkloadPool pool;
  };

  struct Crash {
    std::string node;
    uint64_t at = 0;
    uint64_t recover_at = 0;
  };

  struct Partition {
    uint64_t at = 0;
    // Empty means healed; otherwise every replica must appear in exactly one
    // group.
    std::vector<std::vector<std::string>> groups;
  };

  enum class Topology { mesh, ring, edges };

  std::string name;
  std::string datatype;
  std::vector<std::string> replicas;
  Topology topology = Topology::mesh;
  std::vector<std::pair<std::string, std::string>> edges;
  EngineConfig engine;
  Periods periods;
  FaultConfig faults;
  bool scripted = false;  // a script was given, possibly empty
  std::vector<ScriptOp> script;
  std::optional<RandomWorkload> random;
  std::vector<Crash> crashes;
  std::vector<Partition> partitions;

  static Scenario from_json(const nlohmann::json& j);
  static Scenario load_file(const std::string& path);

  size_t replica_index(const std::string& node) const;
  std::vector<std::vector<uint32_t>> adjacency() const;

  // Structural checks independent of the datatype: unique replicas, known
  // nodes in scripts/crashes/partitions, connectivity when eventual delivery
  // is promised.
  void validate() const;
};

}  // namespace dcrdt

#endif  // DCRDT_SCENARIO_HPP
