#include "dcrdt/scenario.hpp"

#include <fstream>
#include <set>

namespace dcrdt {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { throw scenario_error(what); }

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

template <typename T>
T get_as(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    bad(std::string("field '") + key + "': " + e.what());
  }
}

EngineConfig parse_engine(const json& j) {
  EngineConfig cfg;
  std::string kind = get_as<std::string>(j, "kind", "basic");
  if (kind == "basic") {
    cfg.kind = EngineKind::basic;
    cfg.transitive = get_as<bool>(j, "transitive", true);
    std::string policy = get_as<std::string>(j, "policy", "threshold");
    if (policy == "delta") {
      cfg.policy.mode = ShipPolicy::Mode::always_delta;
    } else if (policy == "state") {
      cfg.policy.mode = ShipPolicy::Mode::always_state;
    } else if (policy == "threshold") {
      cfg.policy.mode = ShipPolicy::Mode::size_threshold;
      cfg.policy.ratio = get_as<double>(j, "ratio", 1.0);
    } else {
      bad("engine.policy must be delta|state|threshold, got '" + policy + "'");
    }
  } else if (kind == "causal") {
    cfg.kind = EngineKind::causal;
    if (j.contains("buffer_cap")) {
      cfg.causal_buffer_cap = field(j, "buffer_cap").get<uint64_t>();
    }
  } else {
    bad("engine.kind must be basic|causal, got '" + kind + "'");
  }
  return cfg;
}

}  // namespace

Scenario Scenario::from_json(const json& j) {
  Scenario sc;
  sc.name = get_as<std::string>(j, "name", "");
  sc.datatype = field(j, "datatype").get<std::string>();
  for (const json& r : field(j, "replicas")) {
    sc.replicas.push_back(r.get<std::string>());
  }

  if (j.contains("topology")) {
    const json& t = j.at("topology");
    if (t.is_string()) {
      std::string s = t.get<std::string>();
      if (s == "mesh") {
        sc.topology = Topology::mesh;
      } else if (s == "ring") {
        sc.topology = Topology::ring;
      } else {
        bad("topology must be mesh|ring|{edges}, got '" + s + "'");
      }
    } else {
      sc.topology = Topology::edges;
      for (const json& e : field(t, "edges")) {
        if (!e.is_array() || e.size() != 2) bad("edge must be a pair");
        sc.edges.emplace_back(e[0].get<std::string>(),
                              e[1].get<std::string>());
      }
    }
  }

  if (j.contains("engine")) sc.engine = parse_engine(j.at("engine"));

  if (j.contains("periods")) {
    const json& p = j.at("periods");
    sc.periods.ship = get_as<uint32_t>(p, "ship", 5);
    sc.periods.gc = get_as<uint32_t>(p, "gc", 20);
  }

  if (j.contains("faults")) {
    const json& f = j.at("faults");
    sc.faults.drop_prob = get_as<double>(f, "drop", 0.0);
    sc.faults.dup_prob = get_as<double>(f, "dup", 0.0);
    sc.faults.max_delay = get_as<uint32_t>(f, "max_delay", 1);
    sc.faults.seed = get_as<uint64_t>(f, "seed", 0);
    sc.faults.eventual_delivery = get_as<bool>(f, "eventual_delivery", true);
  }

  const json& w = field(j, "workload");
  if (w.contains("script") && w.contains("random")) {
    bad("workload must be exactly one of script or random");
  }
  if (w.contains("script")) {
    sc.scripted = true;
    for (const json& entry : w.at("script")) {
      ScriptOp op;
      op.at = field(entry, "at").get<uint64_t>();
      op.node = field(entry, "node").get<std::string>();
      op.op = entry;
      sc.script.push_back(std::move(op));
    }
  } else if (w.contains("random")) {
    const json& r = w.at("random");
    RandomWorkload rw;
    rw.ops_per_replica = field(r, "ops_per_replica").get<uint32_t>();
    if (r.contains("seed")) rw.seed = r.at("seed").get<uint64_t>();
    rw.pool.elements = get_as<uint32_t>(r, "elements", 32);
    rw.pool.keys = get_as<uint32_t>(r, "keys", 8);
    sc.random = rw;
  } else {
    bad("workload must contain 'script' or 'random'");
  }

  for (const json& c : get_as<json>(j, "crashes", json::array())) {
    Crash cw;
    cw.node = field(c, "node").get<std::string>();
    cw.at = field(c, "at").get<uint64_t>();
    cw.recover_at = field(c, "recover_at").get<uint64_t>();
    sc.crashes.push_back(std::move(cw));
  }

  for (const json& p : get_as<json>(j, "partitions", json::array())) {
    Partition pt;
    pt.at = field(p, "at").get<uint64_t>();
    for (const json& g : field(p, "groups")) {
      std::vector<std::string> group;
      for (const json& n : g) group.push_back(n.get<std::string>());
      pt.groups.push_back(std::move(group));
    }
    sc.partitions.push_back(std::move(pt));
  }

  sc.validate();
  return sc;
}

Scenario Scenario::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open scenario file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    bad(path + ": " + e.what());
  }
  try {
    Scenario sc = from_json(j);
    if (sc.name.empty()) sc.name = path;
    return sc;
  } catch (const scenario_error& e) {
    bad(path + ": " + e.what());
  }
}

size_t Scenario::replica_index(const std::string& node) const {
  for (size_t i = 0; i < replicas.size(); ++i) {
    if (replicas[i] == node) return i;
  }
  bad("unknown replica '" + node + "'");
}

std::vector<std::vector<uint32_t>> Scenario::adjacency() const {
  const size_t n = replicas.size();
  std::vector<std::set<uint32_t>> adj(n);
  switch (topology) {
    case Topology::mesh:
      for (uint32_t i = 0; i < n; ++i) {
        for (uint32_t j = 0; j < n; ++j) {
          if (i != j) adj[i].insert(j);
        }
      }
      break;
    case Topology::ring:
      if (n > 1) {
        for (uint32_t i = 0; i < n; ++i) {
          uint32_t next = (i + 1) % n;
          adj[i].insert(next);
          adj[next].insert(i);
        }
      }
      break;
    case Topology::edges:
      for (const auto& [a, b] : edges) {
        uint32_t ia = static_cast<uint32_t>(replica_index(a));
        uint32_t ib = static_cast<uint32_t>(replica_index(b));
        if (ia == ib) bad("self edge on '" + a + "'");
        adj[ia].insert(ib);
        adj[ib].insert(ia);
      }
      break;
  }
  std::vector<std::vector<uint32_t>> out(n);
  for (size_t i = 0; i < n; ++i) out[i].assign(adj[i].begin(), adj[i].end());
  return out;
}

void Scenario::validate() const {
  if (replicas.empty()) bad("scenario needs at least one replica");
  {
    std::set<std::string> seen;
    for (const std::string& r : replicas) {
      if (!seen.insert(r).second) bad("duplicate replica '" + r + "'");
    }
  }
  if (scripted == random.has_value()) {
    bad("workload must be exactly one of script or random");
  }
  for (const ScriptOp& op : script) replica_index(op.node);
  for (const Crash& c : crashes) {
    replica_index(c.node);
    if (c.recover_at <= c.at) bad("crash of '" + c.node + "' never recovers");
  }
  for (const Partition& p : partitions) {
    if (p.groups.empty()) continue;
    std::set<std::string> seen;
    for (const auto& g : p.groups) {
      for (const std::string& n : g) {
        replica_index(n);
        if (!seen.insert(n).second) {
          bad("partition lists '" + n + "' twice");
        }
      }
    }
    if (seen.size() != replicas.size()) {
      bad("partition must cover every replica");
    }
  }

  // Crash windows on one node must not overlap.
  for (size_t a = 0; a < crashes.size(); ++a) {
    for (size_t b = a + 1; b < crashes.size(); ++b) {
      if (crashes[a].node != crashes[b].node) continue;
      if (crashes[a].at < crashes[b].recover_at &&
          crashes[b].at < crashes[a].recover_at) {
        bad("overlapping crash windows on '" + crashes[a].node + "'");
      }
    }
  }

  if (faults.eventual_delivery && replicas.size() > 1) {
    auto adj = adjacency();
    std::vector<bool> seen(replicas.size(), false);
    std::vector<uint32_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      uint32_t i = stack.back();
      stack.pop_back();
      for (uint32_t j : adj[i]) {
        if (!seen[j]) {
          seen[j] = true;
          stack.push_back(j);
        }
      }
    }
    for (bool s : seen) {
      if (!s) bad("topology must be connected under eventual delivery");
    }
  }
}

}  // namespace dcrdt
