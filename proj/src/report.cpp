#include "dcrdt/simreport.hpp"

#include <sstream>

namespace dcrdt {

namespace {

const char* yes_no(bool b) { return b ? "yes" : "no"; }
const char* true_false(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string SimReport::render_human() const {
  std::ostringstream out;
  out << "datatype: " << datatype << "\n";
  out << "engine: " << engine_desc << "\n";
  out << "seed: " << seed << "\n";
  out << "events: " << events << "  final_time: " << final_time
      << "  quiescence_rounds: " << rounds << "\n";
  out << "messages: sent=" << stats.sends << " delivered=" << stats.deliveries
      << " dropped=" << stats.drops << " duplicated=" << stats.duplicates
      << " retried=" << stats.retries << " skipped_ops=" << stats.skipped_ops
      << "\n";
  out << "bytes: delta=" << stats.delta_bytes << " state=" << stats.state_bytes
      << "\n";
  out << "checks: merging_checks=" << stats.merging_checks
      << " merging_violations=" << stats.merging_violations;
  if (contexts_checked) {
    out << " contexts_contiguous=" << yes_no(contexts_contiguous);
  }
  if (counters_checked) {
    out << " counters_monotonic=" << yes_no(counters_monotonic);
  }
  out << "\n";
  out << "quiesced: " << yes_no(quiesced) << "\n";
  out << "converged: " << yes_no(converged) << "\n";
  if (!diagnostics.empty()) out << "diagnostics: " << diagnostics << "\n";
  for (const NodeSummary& n : nodes) {
    out << "node " << n.node << " digest " << n.digest << " " << n.value
        << "\n";
  }
  return out.str();
}

std::string SimReport::render_csv() const {
  std::ostringstream out;
  out << "node,digest,converged,delta_bytes,state_bytes,messages\n";
  for (const NodeSummary& n : nodes) {
    out << n.node << ',' << n.digest << ',' << true_false(converged) << ','
        << stats.delta_bytes << ',' << stats.state_bytes << ',' << stats.sends
        << "\n";
  }
  return out.str();
}

std::string SimReport::render() const { return render_human() + render_csv(); }

std::string TwinReport::render() const {
  std::ostringstream out;
  out << "twin equivalence: " << yes_no(equivalence)
      << "  aligned_checks: " << aligned_checks << "\n";
  if (!divergence.empty()) out << "divergence: " << divergence << "\n";
  for (const NodeSummary& n : oracle_nodes) {
    out << "oracle " << n.node << " digest " << n.digest << " " << n.value
        << "\n";
  }
  out << delta_run.render();
  return out.str();
}

std::string SizebenchReport::render_csv() const {
  std::ostringstream out;
  out << "op,delta_bytes,state_bytes\n";
  for (const SizebenchRow& r : rows) {
    out << r.op << ',' << r.delta_bytes << ',' << r.state_bytes << "\n";
  }
  return out.str();
}

std::string SizebenchReport::render() const {
  std::ostringstream out;
  out << "datatype: " << datatype << "\n";
  if (!rows.empty()) {
    const SizebenchRow& first = rows.front();
    const SizebenchRow& last = rows.back();
    out << "ops: " << rows.size() << "\n";
    out << "first op: delta=" << first.delta_bytes
        << " state=" << first.state_bytes << "\n";
    out << "final op: delta=" << last.delta_bytes
        << " state=" << last.state_bytes << "\n";
    if (last.delta_bytes > 0) {
      out << "state/delta ratio at final op: "
          << (last.state_bytes / last.delta_bytes) << "\n";
    }
  }
  return out.str();
}

}  // namespace dcrdt
