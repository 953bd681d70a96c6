#ifndef DCRDT_SIMREPORT_HPP
#define DCRDT_SIMREPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace dcrdt {

struct SimStats {
  uint64_t sends = 0;          // messages emitted (payloads and acks)
  uint64_t deliveries = 0;     // deliver events executed
  uint64_t drops = 0;          // copies lost (or delayed into a retry)
  uint64_t duplicates = 0;     // extra copies injected
  uint64_t retries = 0;        // deliveries re-queued around partitions/crashes
  uint64_t skipped_ops = 0;    // operations scripted while the node was down
  uint64_t delta_bytes = 0;    // payload bytes shipped as deltas/intervals
  uint64_t state_bytes = 0;    // payload bytes shipped as full states
  uint64_t merging_checks = 0;      // causal delta-merging condition evaluations
  uint64_t merging_violations = 0;  // times the condition failed
};

struct NodeSummary {
  std::string node;
  std::string digest;
  std::string value;
};

struct SimReport {
  std::string datatype;
  std::string engine_desc;
  uint64_t seed = 0;

  std::vector<NodeSummary> nodes;
  bool converged = false;
  bool quiesced = false;
  bool contexts_checked = false;    // causal engine over a causal datatype
  bool contexts_contiguous = true;  // every context cloud empty at quiescence
  bool counters_checked = false;
  bool counters_monotonic = true;

  SimStats stats;
  uint64_t final_time = 0;
  uint64_t rounds = 0;
  uint64_t events = 0;
  std::string diagnostics;

  bool ok() const {
    return converged && quiesced && stats.merging_violations == 0 &&
           (!contexts_checked || contexts_contiguous) &&
           (!counters_checked || counters_monotonic);
  }

  std::string render_human() const;
  std::string render_csv() const;
  // Full deterministic report: human section followed by the CSV rows.
  std::string render() const;
};

struct TwinReport {
  SimReport delta_run;
  bool equivalence = false;
  uint64_t aligned_checks = 0;
  std::string divergence;
  std::vector<NodeSummary> oracle_nodes;

  bool ok() const {
    return equivalence && delta_run.quiesced &&
           delta_run.stats.merging_violations == 0;
  }

  std::string render() const;
};

struct SizebenchRow {
  uint64_t op = 0;
  uint64_t delta_bytes = 0;
  uint64_t state_bytes = 0;
};

struct SizebenchReport {
  std::string datatype;
  std::vector<SizebenchRow> rows;

  std::string render_csv() const;
  std::string render() const;
};

}  // namespace dcrdt

#endif  // DCRDT_SIMREPORT_HPP
