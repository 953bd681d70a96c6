#ifndef DCRDT_SIMNET_HPP
#define DCRDT_SIMNET_HPP

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcrdt/causal_context.hpp"
#include "dcrdt/engine.hpp"
#include "dcrdt/lattice.hpp"
#include "dcrdt/rng.hpp"
#include "dcrdt/simreport.hpp"

namespace dcrdt {

struct FaultConfig {
  double drop_prob = 0.0;
  double dup_prob = 0.0;
  uint32_t max_delay = 1;
  uint64_t seed = 0;
  // When set, a copy of every message eventually delivers: send-time drops
  // become delayed retries, and delivery blocked by a partition or a crashed
  // destination is re-queued. After the scripted phase the fault injection is
  // switched off and periodic shipping continues to a fixpoint.
  bool eventual_delivery = true;
};

struct Periods {
  uint32_t ship = 5;
  uint32_t gc = 20;
};

enum class EngineKind : uint8_t { basic, causal };

struct EngineConfig {
  EngineKind kind = EngineKind::basic;
  bool transitive = true;          // basic engine only
  ShipPolicy policy{};             // basic engine only
  std::optional<uint64_t> causal_buffer_cap;  // causal engine, off by default
};

class sim_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename T>
struct SimMutator {
  std::string label;
  std::function<T(const T&)> fn;
};

// Deterministic discrete-event simulator for the anti-entropy engines.
// Asynchronous delivery with seeded loss, duplication, reordering,
// partitions and crash-recovery; identical inputs produce identical reports,
// event for event.
//
// The workload adapter W supplies the value type plus small hooks:
//   W::value_type, W::describe(state), W::context(state) (nullptr for
//   non-causal datatypes).
template <typename W>
class Simulator {
 public:
  using DT = typename W::value_type;

  struct Op {
    uint64_t at = 0;
    uint32_t node = 0;
    SimMutator<DT> mut;
  };

  struct CrashWindow {
    uint32_t node = 0;
    uint64_t crash_at = 0;
    uint64_t recover_at = 0;
  };

  struct PartitionChange {
    uint64_t at = 0;
    std::vector<uint32_t> group_of;  // group id per node; empty = connected
  };

  struct Plan {
    std::string datatype;
    std::vector<ReplicaId> replicas;
    std::vector<std::vector<uint32_t>> neighbors;
    EngineConfig engine;
    Periods periods;
    FaultConfig faults;
    std::vector<Op> ops;
    std::vector<CrashWindow> crashes;
    std::vector<PartitionChange> partitions;
    uint64_t round_budget = 5000;
  };

  static constexpr uint64_t kEventBudget = 50'000'000;

  explicit Simulator(Plan plan) : plan_(std::move(plan)), rng_(plan_.faults.seed) {
    validate();
    const size_t n = plan_.replicas.size();
    down_.assign(n, false);
    durable_.assign(n, std::string());
    rr_pick_.assign(n, 0);
    last_seq_.assign(n, 0);
    if (plan_.engine.kind == EngineKind::basic) {
      for (size_t i = 0; i < n; ++i) {
        basic_.emplace_back(plan_.replicas[i], neighbor_ids(i),
                            plan_.engine.transitive, plan_.engine.policy);
      }
    } else {
      for (size_t i = 0; i < n; ++i) {
        causal_.emplace_back(plan_.replicas[i], neighbor_ids(i),
                             plan_.engine.causal_buffer_cap);
      }
      history_.resize(n);
      for (size_t i = 0; i < n; ++i) history_[i][0] = DT{};
    }
  }

  SimReport run() {
    execute(false);
    return build_report();
  }

  // Twin execution: alongside the causal run, a full-state oracle replica per
  // node mirrors every aligned action — operations apply the composed
  // standard mutator, and every delta/interval delivery joins the sender's
  // full state snapshotted at send time. States must agree after every
  // aligned step.
  TwinReport run_twin() {
    if (plan_.engine.kind != EngineKind::causal) {
      throw sim_error("twin execution requires the causal engine");
    }
    oracle_.assign(plan_.replicas.size(), DT{});
    execute(true);
    TwinReport tr;
    for (size_t i = 0; i < plan_.replicas.size(); ++i) {
      check_alignment(static_cast<uint32_t>(i), "final");
    }
    tr.delta_run = build_report();
    tr.aligned_checks = aligned_checks_;
    tr.divergence = divergence_;
    tr.equivalence = divergence_.empty();
    for (size_t i = 0; i < oracle_.size(); ++i) {
      tr.oracle_nodes.push_back(NodeSummary{plan_.replicas[i].name,
                                            digest_hex(oracle_[i]),
                                            W::describe(oracle_[i])});
    }
    return tr;
  }

  const DT& state_of(size_t i) const {
    return plan_.engine.kind == EngineKind::basic ? basic_[i].state()
                                                  : causal_[i].state();
  }

 private:
  enum class Ev : uint8_t {
    partition = 0,
    crash = 1,
    recover = 2,
    op = 3,
    deliver = 4,
    ship = 5,
    gc = 6,
  };

  struct Event {
    uint64_t time = 0;
    Ev kind = Ev::op;
    uint32_t node = 0;
    uint64_t seqno = 0;
    uint32_t index = 0;
  };

  struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.kind != b.kind) return a.kind > b.kind;
      if (a.node != b.node) return a.node > b.node;
      return a.seqno > b.seqno;
    }
  };

  struct Flight {
    Message<DT> msg;
    bool full_state = false;
    uint64_t interval_start = 0;
    DT oracle_payload{};
    bool has_oracle = false;
  };

  void validate() const {
    if (plan_.replicas.empty()) throw sim_error("no replicas");
    if (plan_.neighbors.size() != plan_.replicas.size()) {
      throw sim_error("neighbor table does not match replica count");
    }
    if (plan_.faults.drop_prob < 0 || plan_.faults.drop_prob > 1 ||
        plan_.faults.dup_prob < 0 || plan_.faults.dup_prob > 1) {
      throw sim_error("fault probabilities must be within [0,1]");
    }
    if (plan_.faults.eventual_delivery && plan_.faults.drop_prob >= 1.0) {
      throw sim_error("drop_prob must be < 1 under eventual delivery");
    }
    if (plan_.faults.max_delay == 0) throw sim_error("max_delay must be >= 1");
    if (plan_.periods.ship == 0 || plan_.periods.gc == 0) {
      throw sim_error("periods must be >= 1");
    }
    for (const auto& cw : plan_.crashes) {
      if (cw.node >= plan_.replicas.size()) throw sim_error("crash: bad node");
      if (cw.recover_at <= cw.crash_at) {
        throw sim_error("crash window must recover after the crash");
      }
    }
    for (const auto& pc : plan_.partitions) {
      if (!pc.group_of.empty() && pc.group_of.size() != plan_.replicas.size()) {
        throw sim_error("partition group table does not match replica count");
      }
    }
  }

  std::vector<ReplicaId> neighbor_ids(size_t i) const {
    std::vector<ReplicaId> out;
    for (uint32_t j : plan_.neighbors[i]) out.push_back(plan_.replicas[j]);
    return out;
  }

  void push(uint64_t time, Ev kind, uint32_t node, uint32_t index) {
    queue_.push(Event{time, kind, node, seqno_++, index});
  }

  void execute(bool twin) {
    twin_ = twin;
    uint64_t op_end = 0;
    for (size_t k = 0; k < plan_.ops.size(); ++k) {
      const Op& op = plan_.ops[k];
      if (op.node >= plan_.replicas.size()) throw sim_error("op: bad node");
      push(op.at, Ev::op, op.node, static_cast<uint32_t>(k));
      op_end = std::max(op_end, op.at);
    }
    for (size_t k = 0; k < plan_.crashes.size(); ++k) {
      const CrashWindow& cw = plan_.crashes[k];
      push(cw.crash_at, Ev::crash, cw.node, static_cast<uint32_t>(k));
      push(cw.recover_at, Ev::recover, cw.node, static_cast<uint32_t>(k));
      op_end = std::max(op_end, cw.recover_at);
    }
    for (size_t k = 0; k < plan_.partitions.size(); ++k) {
      push(plan_.partitions[k].at, Ev::partition, 0, static_cast<uint32_t>(k));
      op_end = std::max(op_end, plan_.partitions[k].at);
    }
    for (uint64_t t = plan_.periods.ship; t <= op_end; t += plan_.periods.ship) {
      for (uint32_t n = 0; n < plan_.replicas.size(); ++n) {
        push(t, Ev::ship, n, 0);
      }
    }
    if (plan_.engine.kind == EngineKind::causal) {
      for (uint64_t t = plan_.periods.gc; t <= op_end; t += plan_.periods.gc) {
        for (uint32_t n = 0; n < plan_.replicas.size(); ++n) {
          push(t, Ev::gc, n, 0);
        }
      }
    }

    // Scripted phase: run up to the last scripted tick. Deliveries blocked
    // by partitions or crashed nodes park in the queue as retries and are
    // resolved during quiescence.
    drain(op_end);
    quiesce(op_end);
  }

  void drain(uint64_t horizon) {
    while (!queue_.empty() && queue_.top().time <= horizon) {
      Event ev = queue_.top();
      queue_.pop();
      now_ = std::max(now_, ev.time);
      ++events_;
      if (events_ > kEventBudget) {
        throw sim_error("event budget exhausted at t=" + std::to_string(now_) +
                        " with " + std::to_string(queue_.size()) +
                        " pending events");
      }
      dispatch(ev);
    }
  }

  // After the scripted phase, faults are off and periodic shipping continues
  // until a full ship cycle changes no state. The causal engine ships to one
  // neighbor per round (round-robin here, for a provably complete cycle), so
  // the cycle length is the widest neighbor set; the basic engine broadcasts
  // and needs a single quiet round.
  void quiesce(uint64_t op_end) {
    quiescent_ = true;
    if (plan_.faults.eventual_delivery) group_of_.clear();

    uint64_t cycle = 1;
    if (plan_.engine.kind == EngineKind::causal) {
      for (const auto& ns : plan_.neighbors) {
        cycle = std::max<uint64_t>(cycle, ns.size());
      }
    }

    uint64_t unchanged = 0;
    uint64_t t = ((std::max(now_, op_end) / plan_.periods.ship) + 1) *
                 plan_.periods.ship;
    uint64_t gc_due = ((t / plan_.periods.gc) + 1) * plan_.periods.gc;
    while (unchanged < cycle) {
      if (++rounds_ > plan_.round_budget) {
        throw sim_error("simulation did not quiesce within " +
                        std::to_string(plan_.round_budget) + " rounds" +
                        (changed_ ? " (states still changing)" : "") +
                        pending_summary());
      }
      changed_ = false;
      for (uint32_t n = 0; n < plan_.replicas.size(); ++n) {
        if (!down_[n]) push(t, Ev::ship, n, 0);
      }
      if (plan_.engine.kind == EngineKind::causal && t >= gc_due) {
        for (uint32_t n = 0; n < plan_.replicas.size(); ++n) {
          if (!down_[n]) push(t, Ev::gc, n, 0);
        }
        gc_due += plan_.periods.gc;
      }
      drain(std::numeric_limits<uint64_t>::max());
      unchanged = changed_ ? 0 : unchanged + 1;
      t = std::max(t + plan_.periods.ship, now_);
    }
    quiesced_ = true;
  }

  void dispatch(const Event& ev) {
    switch (ev.kind) {
      case Ev::partition:
        group_of_ = plan_.partitions[ev.index].group_of;
        break;
      case Ev::crash:
        // Durable storage holds exactly the state written at the last
        // transition; recovery will reload it.
        durable_[ev.node] = plan_.engine.kind == EngineKind::basic
                                ? basic_[ev.node].durable_bytes()
                                : causal_[ev.node].durable_bytes();
        down_[ev.node] = true;
        break;
      case Ev::recover:
        if (plan_.engine.kind == EngineKind::basic) {
          basic_[ev.node].restore_durable(durable_[ev.node]);
        } else {
          causal_[ev.node].restore_durable(durable_[ev.node]);
          note_seq(ev.node);
        }
        down_[ev.node] = false;
        break;
      case Ev::op:
        run_op(ev);
        break;
      case Ev::deliver:
        run_deliver(ev);
        break;
      case Ev::ship:
        run_ship(ev);
        break;
      case Ev::gc:
        if (!down_[ev.node] && plan_.engine.kind == EngineKind::causal) {
          causal_[ev.node].collect_garbage();
        }
        break;
    }
  }

  void run_op(const Event& ev) {
    if (down_[ev.node]) {
      ++stats_.skipped_ops;
      return;
    }
    const Op& op = plan_.ops[ev.index];
    if (plan_.engine.kind == EngineKind::basic) {
      basic_[ev.node].apply(op.mut.fn);
      changed_ = true;
      return;
    }
    causal_[ev.node].apply(op.mut.fn);
    changed_ = true;
    note_seq(ev.node);
    snapshot(ev.node);
    if (twin_) {
      DT& shadow = oracle_[ev.node];
      shadow.join_with(op.mut.fn(shadow));
      check_alignment(ev.node, "operation " + op.mut.label);
    }
  }

  void run_deliver(const Event& ev) {
    const Flight& f = flights_[ev.index];
    const uint32_t dst = ev.node;
    if (blocked(f) || down_[dst]) {
      if (plan_.faults.eventual_delivery) {
        ++stats_.retries;
        push(now_ + draw_delay(), Ev::deliver, dst, ev.index);
      } else {
        ++stats_.drops;
      }
      return;
    }
    ++stats_.deliveries;

    if (plan_.engine.kind == EngineKind::basic) {
      if (basic_[dst].receive(f.msg.payload)) changed_ = true;
      return;
    }

    if (f.msg.kind == Message<DT>::Kind::ack) {
      causal_[dst].receive_ack(f.msg.src, f.msg.seq);
      return;
    }

    // Causal delta-merging condition: the receiving state must subsume the
    // sender's state at the start of the interval.
    const uint32_t src = node_index(f.msg.src);
    ++stats_.merging_checks;
    const DT& at_start = history_[src].at(f.interval_start);
    if (!leq(at_start, causal_[dst].state())) {
      ++stats_.merging_violations;
      if (merging_detail_.empty()) {
        merging_detail_ = "delta-merging violated at t=" +
                          std::to_string(now_) + " delivering " +
                          f.msg.src.name + "->" + plan_.replicas[dst].name +
                          " interval start " +
                          std::to_string(f.interval_start);
      }
    }

    auto res = causal_[dst].receive_delta(f.msg.src, f.msg.payload, f.msg.seq);
    if (res.joined) {
      changed_ = true;
      note_seq(dst);
      snapshot(dst);
    }
    if (twin_) {
      oracle_[dst].join_with(f.oracle_payload);
      check_alignment(dst, "delivery from " + f.msg.src.name);
    }
    // Sending may grow the flight table; f must not be touched afterwards.
    send(Flight{std::move(res.ack), false, 0, DT{}, false}, dst);
  }

  void run_ship(const Event& ev) {
    if (down_[ev.node]) return;
    if (plan_.engine.kind == EngineKind::basic) {
      auto result = basic_[ev.node].ship();
      for (Message<DT>& m : result.messages) {
        send(Flight{std::move(m), result.full_state, 0, DT{}, false}, ev.node);
      }
      return;
    }
    uint64_t pick = quiescent_ ? rr_pick_[ev.node]++ : rng_.next();
    auto action = causal_[ev.node].ship(pick);
    if (!action) return;
    Flight f;
    f.msg = std::move(action->message);
    f.full_state = action->full_state;
    f.interval_start = action->interval_start;
    if (twin_) {
      f.oracle_payload = oracle_[ev.node];
      f.has_oracle = true;
    }
    send(std::move(f), ev.node);
  }

  void send(Flight f, uint32_t src) {
    (void)src;
    ++stats_.sends;
    if (f.msg.kind != Message<DT>::Kind::ack) {
      uint64_t size = encoded_size(f.msg.payload);
      if (f.full_state) {
        stats_.state_bytes += size;
      } else {
        stats_.delta_bytes += size;
      }
    }
    const uint32_t dst = node_index(f.msg.dst);
    uint64_t delay = draw_delay();
    if (!quiescent_) {
      if (plan_.faults.eventual_delivery) {
        // A dropped copy is re-sent later; the message still gets through.
        while (rng_.chance(plan_.faults.drop_prob)) {
          ++stats_.drops;
          delay += draw_delay();
        }
      } else if (rng_.chance(plan_.faults.drop_prob)) {
        ++stats_.drops;
        flights_.push_back(std::move(f));  // keep indices stable for dups
        maybe_duplicate(dst);
        return;
      }
    }
    flights_.push_back(std::move(f));
    push(now_ + delay, Ev::deliver, dst, static_cast<uint32_t>(flights_.size() - 1));
    maybe_duplicate(dst);
  }

  void maybe_duplicate(uint32_t dst) {
    if (quiescent_ || !rng_.chance(plan_.faults.dup_prob)) return;
    ++stats_.duplicates;
    push(now_ + draw_delay(), Ev::deliver, dst,
         static_cast<uint32_t>(flights_.size() - 1));
  }

  uint64_t draw_delay() { return rng_.in_range(1, plan_.faults.max_delay); }

  bool blocked(const Flight& f) const {
    if (group_of_.empty()) return false;
    return group_of_[node_index(f.msg.src)] != group_of_[node_index(f.msg.dst)];
  }

  uint32_t node_index(const ReplicaId& id) const {
    for (uint32_t i = 0; i < plan_.replicas.size(); ++i) {
      if (plan_.replicas[i] == id) return i;
    }
    throw sim_error("unknown replica " + id.name);
  }

  void note_seq(uint32_t node) {
    uint64_t s = causal_[node].seq();
    if (s < last_seq_[node]) counters_monotonic_ = false;
    last_seq_[node] = s;
  }

  void snapshot(uint32_t node) {
    history_[node][causal_[node].seq()] = causal_[node].state();
  }

  std::string pending_summary() {
    std::string out = "; pending events:";
    static const char* names[] = {"partition", "crash",   "recover", "op",
                                  "deliver",   "ship",    "gc"};
    int shown = 0;
    size_t total = queue_.size();
    while (!queue_.empty() && shown < 8) {
      const Event& ev = queue_.top();
      out += " " + std::string(names[static_cast<int>(ev.kind)]) + "@t" +
             std::to_string(ev.time) + "/n" + std::to_string(ev.node);
      queue_.pop();
      ++shown;
    }
    if (total > static_cast<size_t>(shown)) {
      out += " (+" + std::to_string(total - shown) + " more)";
    }
    return out;
  }

  void check_alignment(uint32_t node, const std::string& what) {
    ++aligned_checks_;
    if (divergence_.empty() && !(causal_[node].state() == oracle_[node])) {
      divergence_ = "divergence at t=" + std::to_string(now_) + " node " +
                    plan_.replicas[node].name + " after " + what +
                    ": engine " + digest_hex(causal_[node].state()) + " (" +
                    W::describe(causal_[node].state()) + ") vs oracle " +
                    digest_hex(oracle_[node]) + " (" +
                    W::describe(oracle_[node]) + ")";
    }
  }

  SimReport build_report() {
    SimReport r;
    r.datatype = plan_.datatype;
    r.engine_desc = describe_engine();
    r.seed = plan_.faults.seed;
    r.quiesced = quiesced_;
    r.stats = stats_;
    r.final_time = now_;
    r.rounds = rounds_;
    r.events = events_;
    r.diagnostics = merging_detail_;

    std::string first_encoding;
    r.converged = true;
    for (size_t i = 0; i < plan_.replicas.size(); ++i) {
      const DT& st = state_of(i);
      std::string enc = encode_bytes(st);
      if (i == 0) {
        first_encoding = enc;
      } else if (enc != first_encoding) {
        r.converged = false;
      }
      r.nodes.push_back(NodeSummary{plan_.replicas[i].name,
                                    digest_bytes(enc).hex(), W::describe(st)});
    }

    if (plan_.engine.kind == EngineKind::causal) {
      r.counters_checked = true;
      r.counters_monotonic = counters_monotonic_;
      for (size_t i = 0; i < plan_.replicas.size(); ++i) {
        if (const CausalContext* c = W::context(state_of(i))) {
          r.contexts_checked = true;
          if (!c->cloud_empty()) r.contexts_contiguous = false;
        }
      }
    }
    return r;
  }

  std::string describe_engine() const {
    if (plan_.engine.kind == EngineKind::causal) {
      return plan_.engine.causal_buffer_cap
                 ? "causal cap=" + std::to_string(*plan_.engine.causal_buffer_cap)
                 : "causal";
    }
    std::string out = plan_.engine.transitive ? "basic transitive" : "basic direct";
    switch (plan_.engine.policy.mode) {
      case ShipPolicy::Mode::always_delta:
        out += " policy=delta";
        break;
      case ShipPolicy::Mode::always_state:
        out += " policy=state";
        break;
      case ShipPolicy::Mode::size_threshold:
        out += " policy=threshold";
        break;
    }
    return out;
  }

  Plan plan_;
  Rng rng_;

  std::vector<BasicEngine<DT>> basic_;
  std::vector<CausalEngine<DT>> causal_;
  std::vector<bool> down_;
  std::vector<std::string> durable_;
  std::vector<uint32_t> group_of_;

  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::vector<Flight> flights_;
  uint64_t seqno_ = 0;
  uint64_t now_ = 0;
  uint64_t events_ = 0;
  uint64_t rounds_ = 0;
  bool quiescent_ = false;
  bool quiesced_ = false;
  bool changed_ = false;

  // Causal instrumentation: per-node state snapshots indexed by sequence
  // number, twin-oracle shadows, counter monotonicity.
  std::vector<std::map<uint64_t, DT>> history_;
  std::vector<DT> oracle_;
  bool twin_ = false;
  uint64_t aligned_checks_ = 0;
  std::string divergence_;
  std::string merging_detail_;
  std::vector<uint64_t> rr_pick_;
  std::vector<uint64_t> last_seq_;
  bool counters_monotonic_ = true;

  SimStats stats_;
};

}  // namespace dcrdt

#endif  // DCRDT_SIMNET_HPP
