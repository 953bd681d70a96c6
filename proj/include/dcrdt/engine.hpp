#ifndef DCRDT_ENGINE_HPP
#define DCRDT_ENGINE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dcrdt/lattice.hpp"

namespace dcrdt {

template <Lattice T>
struct Message {
  enum class Kind : uint8_t { basic = 0, delta = 1, ack = 2 };

  Kind kind = Kind::basic;
  ReplicaId src;
  ReplicaId dst;
  T payload{};    // basic and delta messages
  uint64_t seq = 0;  // delta and ack messages

  bool operator==(const Message&) const = default;

  void encode(Encoder& e) const {
    switch (kind) {
      case Kind::basic:
        e.tag(Tag::msg_basic);
        break;
      case Kind::delta:
        e.tag(Tag::msg_delta);
        break;
      case Kind::ack:
        e.tag(Tag::msg_ack);
        break;
    }
    ScalarCodec<ReplicaId>::encode(e, src);
    ScalarCodec<ReplicaId>::encode(e, dst);
    if (kind != Kind::ack) payload.encode(e);
    if (kind != Kind::basic) e.u64(seq);
  }

  static Message decode(Decoder& d) {
    Message m;
    switch (d.peek_tag()) {
      case Tag::msg_basic:
        d.expect(Tag::msg_basic);
        m.kind = Kind::basic;
        break;
      case Tag::msg_delta:
        d.expect(Tag::msg_delta);
        m.kind = Kind::delta;
        break;
      default:
        d.expect(Tag::msg_ack);
        m.kind = Kind::ack;
        break;
    }
    m.src = ScalarCodec<ReplicaId>::decode(d);
    m.dst = ScalarCodec<ReplicaId>::decode(d);
    if (m.kind != Kind::ack) m.payload = T::decode(d);
    if (m.kind != Kind::basic) m.seq = d.u64();
    return m;
  }
};

// Decides what the basic engine ships: the buffered delta-group, the full
// state, or whichever canonical encoding is smaller (relative to ratio).
struct ShipPolicy {
  enum class Mode : uint8_t { always_delta, always_state, size_threshold };

  Mode mode = Mode::size_threshold;
  double ratio = 1.0;

  template <Lattice T>
  bool choose_state(const T& state, const T& buffer) const {
    switch (mode) {
      case Mode::always_delta:
        return false;
      case Mode::always_state:
        return true;
      case Mode::size_threshold:
        return static_cast<double>(encoded_size(buffer)) >
               ratio * static_cast<double>(encoded_size(state));
    }
    return false;
  }
};

// Basic anti-entropy engine. Durable state is X alone; the delta-group
// buffer D is volatile and always satisfies D ⊑ X. Periodic shipping
// broadcasts one payload to every neighbor (in neighbor order) and resets D.
// In transitive mode received payloads are folded into D for onward
// propagation; in direct mode D holds local delta-mutations only.
template <Lattice T>
class BasicEngine {
 public:
  BasicEngine(ReplicaId id, std::vector<ReplicaId> neighbors, bool transitive,
              ShipPolicy policy)
      : id_(std::move(id)),
        neighbors_(std::move(neighbors)),
        transitive_(transitive),
        policy_(policy) {
    std::sort(neighbors_.begin(), neighbors_.end());
  }

  const ReplicaId& id() const { return id_; }
  const T& state() const { return state_; }
  const T& buffer() const { return buffer_; }
  const std::vector<ReplicaId>& neighbors() const { return neighbors_; }
  bool transitive() const { return transitive_; }

  template <std::invocable<const T&> M>
  T apply(M&& mut) {
    T d = apply_mutation(state_, std::forward<M>(mut));
    buffer_.join_with(d);
    return d;
  }

  bool receive(const T& d) {
    bool changed = state_.join_with(d);
    if (transitive_) buffer_.join_with(d);
    return changed;
  }

  struct ShipResult {
    std::vector<Message<T>> messages;
    bool full_state = false;
  };

  ShipResult ship() {
    ShipResult out;
    out.full_state = policy_.choose_state(state_, buffer_);
    const T& payload = out.full_state ? state_ : buffer_;
    out.messages.reserve(neighbors_.size());
    for (const ReplicaId& j : neighbors_) {
      out.messages.push_back(
          Message<T>{Message<T>::Kind::basic, id_, j, payload, 0});
    }
    buffer_ = T{};
    return out;
  }

  // Recovery from durable storage: X survives, the buffer does not.
  void crash_recover() { buffer_ = T{}; }

  std::string durable_bytes() const {
    Encoder e;
    state_.encode(e);
    return e.bytes();
  }

  void restore_durable(std::string_view bytes) {
    state_ = decode_bytes<T>(bytes);
    buffer_ = T{};
  }

 private:
  ReplicaId id_;
  std::vector<ReplicaId> neighbors_;
  bool transitive_;
  ShipPolicy policy_;
  T state_{};    // durable
  T buffer_{};   // volatile delta-group
};

// Anti-entropy engine ensuring causal consistency. Durable state is the pair
// (X, c); the tagged delta buffer D and the ack map A are volatile. Every
// join into X — local mutation or fresh received payload — is recorded in D
// under the next sequence number, so D always covers the contiguous range
// [min, c) and any slice of it is a delta-interval.
template <Lattice T>
class CausalEngine {
 public:
  CausalEngine(ReplicaId id, std::vector<ReplicaId> neighbors,
               std::optional<size_t> buffer_cap = std::nullopt)
      : id_(std::move(id)),
        neighbors_(std::move(neighbors)),
        buffer_cap_(buffer_cap) {
    std::sort(neighbors_.begin(), neighbors_.end());
  }

  const ReplicaId& id() const { return id_; }
  const T& state() const { return state_; }
  uint64_t seq() const { return seq_; }
  const std::vector<ReplicaId>& neighbors() const { return neighbors_; }
  const std::map<uint64_t, T>& delta_buffer() const { return deltas_; }

  uint64_t ack_of(const ReplicaId& j) const {
    auto it = acks_.find(j);
    return it == acks_.end() ? 0 : it->second;
  }

  template <std::invocable<const T&> M>
  T apply(M&& mut) {
    T d = apply_mutation(state_, std::forward<M>(mut));
    record_delta(d);
    return d;
  }

  struct ReceiveResult {
    bool joined = false;
    Message<T> ack;
  };

  // Joins a received delta-interval unless the state already subsumes it;
  // either way the sender gets an ack for the interval end.
  ReceiveResult receive_delta(const ReplicaId& src, const T& d, uint64_t n) {
    ReceiveResult out;
    if (!dcrdt::leq(d, state_)) {
      state_.join_with(d);
      record_delta(d);
      out.joined = true;
    }
    out.ack = Message<T>{Message<T>::Kind::ack, id_, src, T{}, n};
    return out;
  }

  // Acks merge by max, which absorbs duplicates and reordering.
  void receive_ack(const ReplicaId& src, uint64_t n) {
    auto [it, inserted] = acks_.emplace(src, n);
    if (!inserted && it->second < n) it->second = n;
  }

  struct ShipAction {
    Message<T> message;
    bool full_state = false;
    uint64_t interval_start = 0;
  };

  // Ships to one neighbor: the delta-interval from its last ack up to c, or
  // the full state when the buffer no longer reaches back that far. Nothing
  // is sent while the neighbor is already up to date.
  std::optional<ShipAction> ship(uint64_t pick) {
    if (neighbors_.empty()) return std::nullopt;
    const ReplicaId& j = neighbors_[pick % neighbors_.size()];
    uint64_t acked = ack_of(j);
    if (acked >= seq_) return std::nullopt;

    ShipAction action;
    action.message.kind = Message<T>::Kind::delta;
    action.message.src = id_;
    action.message.dst = j;
    action.message.seq = seq_;
    if (deltas_.empty() || deltas_.begin()->first > acked) {
      action.message.payload = state_;
      action.full_state = true;
      action.interval_start = 0;
    } else {
      T interval{};
      for (auto it = deltas_.lower_bound(acked); it != deltas_.end(); ++it) {
        interval.join_with(it->second);
      }
      action.message.payload = std::move(interval);
      action.interval_start = acked;
    }
    return action;
  }

  // Drops deltas acked by every neighbor; a neighbor that never acked pins
  // the buffer.
  void collect_garbage() {
    uint64_t floor = 0;
    bool first = true;
    for (const ReplicaId& j : neighbors_) {
      uint64_t a = ack_of(j);
      floor = first ? a : std::min(floor, a);
      first = false;
    }
    if (first) floor = seq_;  // no neighbors: everything is collectable
    deltas_.erase(deltas_.begin(), deltas_.lower_bound(floor));
  }

  // Recovery from durable storage: X and c survive, D and A do not.
  void crash_recover() {
    deltas_.clear();
    acks_.clear();
  }

  std::string durable_bytes() const {
    Encoder e;
    state_.encode(e);
    e.u64(seq_);
    return e.bytes();
  }

  void restore_durable(std::string_view bytes) {
    Decoder d(bytes);
    state_ = T::decode(d);
    seq_ = d.u64();
    d.expect_done();
    deltas_.clear();
    acks_.clear();
  }

  // D covers a contiguous range ending at c-1, and acks never run ahead of c.
  bool check_invariants() const {
    if (!deltas_.empty()) {
      if (deltas_.rbegin()->first != seq_ - 1) return false;
      uint64_t expect = deltas_.begin()->first;
      for (const auto& [n, d] : deltas_) {
        if (n != expect++) return false;
      }
    }
    for (const auto& [j, n] : acks_) {
      if (n > seq_) return false;
    }
    return true;
  }

 private:
  void record_delta(T d) {
    deltas_.emplace(seq_, std::move(d));
    ++seq_;
    if (buffer_cap_) {
      while (deltas_.size() > *buffer_cap_) deltas_.erase(deltas_.begin());
    }
  }

  ReplicaId id_;
  std::vector<ReplicaId> neighbors_;
  std::optional<size_t> buffer_cap_;
  T state_{};                     // durable
  uint64_t seq_ = 0;              // durable
  std::map<uint64_t, T> deltas_;  // volatile
  std::map<ReplicaId, uint64_t> acks_;  // volatile
};

}  // namespace dcrdt

#endif  // DCRDT_ENGINE_HPP
