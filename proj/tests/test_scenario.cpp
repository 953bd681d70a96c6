#include <doctest.h>

#include "dcrdt/catalog.hpp"
#include "dcrdt/scenario.hpp"

using namespace dcrdt;
using nlohmann::json;

namespace {

std::string scenario_path(const std::string& name) {
  return std::string(DCRDT_SCENARIO_DIR) + "/" + name;
}

json minimal() {
  return json{{"datatype", "gcounter"},
              {"replicas", {"a", "b"}},
              {"workload", {{"script", json::array()}}}};
}

}  // namespace

TEST_CASE("scenario: defaults and field parsing") {
  Scenario sc = Scenario::from_json(minimal());
  CHECK(sc.datatype == "gcounter");
  CHECK(sc.replicas.size() == 2);
  CHECK(sc.topology == Scenario::Topology::mesh);
  CHECK(sc.engine.kind == EngineKind::basic);
  CHECK(sc.periods.ship == 5);
  CHECK(sc.faults.eventual_delivery);
  CHECK(sc.scripted);
  CHECK(sc.script.empty());

  Scenario file = Scenario::load_file(scenario_path("gcounter-3node.json"));
  CHECK(file.script.size() == 30);
  CHECK(file.faults.drop_prob == doctest::Approx(0.5));
}

TEST_CASE("scenario: structural validation errors") {
  json j = minimal();
  j.erase("datatype");
  CHECK_THROWS_WITH_AS(Scenario::from_json(j),
                       doctest::Contains("missing field 'datatype'"),
                       scenario_error);

  j = minimal();
  j["replicas"] = {"a", "a"};
  CHECK_THROWS_WITH_AS(Scenario::from_json(j),
                       doctest::Contains("duplicate replica"), scenario_error);

  j = minimal();
  j["workload"] = {{"script", json::array()},
                   {"random", {{"ops_per_replica", 5}}}};
  CHECK_THROWS_AS(Scenario::from_json(j), scenario_error);

  j = minimal();
  j["workload"] = {{"script", {{{"at", 1}, {"node", "zz"}, {"op", "inc"}}}}};
  CHECK_THROWS_WITH_AS(Scenario::from_json(j),
                       doctest::Contains("unknown replica"), scenario_error);

  j = minimal();
  j["crashes"] = {{{"node", "a"}, {"at", 5}, {"recover_at", 5}}};
  CHECK_THROWS_WITH_AS(Scenario::from_json(j),
                       doctest::Contains("never recovers"), scenario_error);

  j = minimal();
  j["crashes"] = {{{"node", "a"}, {"at", 5}, {"recover_at", 15}},
                  {{"node", "a"}, {"at", 10}, {"recover_at", 20}}};
  CHECK_THROWS_WITH_AS(Scenario::from_json(j),
                       doctest::Contains("overlapping crash windows"),
                       scenario_error);

  j = minimal();
  j["partitions"] = {{{"at", 1}, {"groups", {{"a"}}}}};
  CHECK_THROWS_WITH_AS(Scenario::from_json(j),
                       doctest::Contains("cover every replica"),
                       scenario_error);

  // Disconnected topology is rejected when delivery must be eventual.
  j = minimal();
  j["replicas"] = {"a", "b", "c"};
  j["topology"] =
      json{{"edges", json::array({json::array({"a", "b"})})}};
  CHECK_THROWS_WITH_AS(Scenario::from_json(j),
                       doctest::Contains("connected"), scenario_error);
  j["faults"] = {{"eventual_delivery", false}};
  CHECK_NOTHROW(Scenario::from_json(j));
}

TEST_CASE("catalog: known names, aliases, and the unknown-type error") {
  CHECK(normalize_typespec("ORMap(String, AWSet(String))") ==
        "ormap(string,awset(string))");
  CHECK(normalize_typespec("2PSet( u64 )") == "twopset(u64)");
  CHECK(normalize_typespec("MVRegister(uint64)") == "mvreg(u64)");

  auto driver = make_driver("awset(string)");
  CHECK(driver->name() == "awset(string)");
  CHECK(driver->causal());
  CHECK_FALSE(make_driver("gcounter")->causal());

  CHECK_THROWS_WITH_AS(make_driver("bitvector"),
                       doctest::Contains("supported"), scenario_error);
  CHECK(supported_datatypes().size() >= 20);
  for (const std::string& name : supported_datatypes()) {
    CHECK_NOTHROW(make_driver(name));
  }
}

TEST_CASE("driver: bundled counter scenario converges to value 30") {
  Scenario sc = Scenario::load_file(scenario_path("gcounter-3node.json"));
  auto driver = make_driver(sc.datatype);
  SimReport r = driver->run(sc, std::nullopt);
  CHECK(r.ok());
  CHECK(r.converged);
  for (const NodeSummary& n : r.nodes) CHECK(n.value == "value=30");
}

TEST_CASE("driver: empty scenario reports equal bottom digests") {
  Scenario sc = Scenario::load_file(scenario_path("empty.json"));
  auto driver = make_driver(sc.datatype);
  SimReport r = driver->run(sc, std::nullopt);
  CHECK(r.ok());
  REQUIRE(r.nodes.size() == 3);
  CHECK(r.nodes[0].digest == r.nodes[1].digest);
  CHECK(r.nodes[0].digest == r.nodes[2].digest);
  CHECK(r.nodes[0].value == "value=0");
}

TEST_CASE("driver: twin on the chaos and crash scenarios") {
  for (const char* name : {"awset-chaos.json", "crash-recovery.json"}) {
    Scenario sc = Scenario::load_file(scenario_path(name));
    auto driver = make_driver(sc.datatype);
    TwinReport tr = driver->twin(sc, std::nullopt);
    CHECK(tr.ok());
    CHECK(tr.equivalence);
    CHECK(tr.delta_run.stats.merging_violations == 0);
    CHECK(tr.delta_run.contexts_contiguous);
  }

  // Twin on a basic-engine scenario is a usage error.
  Scenario basic = Scenario::load_file(scenario_path("gcounter-3node.json"));
  auto driver = make_driver(basic.datatype);
  CHECK_THROWS_AS(driver->twin(basic, std::nullopt), scenario_error);
}

TEST_CASE("driver: reports are a pure function of scenario and seed") {
  Scenario sc = Scenario::load_file(scenario_path("awset-chaos.json"));
  auto driver = make_driver(sc.datatype);
  SimReport r1 = driver->run(sc, 100);
  SimReport r2 = driver->run(sc, 100);
  SimReport r3 = driver->run(sc, 101);
  CHECK(r1.render() == r2.render());
  CHECK(r1.render() != r3.render());
  CHECK(r1.ok());
  CHECK(r3.ok());
}

TEST_CASE("driver: ring topology with transitive mode converges") {
  Scenario sc = Scenario::load_file(scenario_path("ring-transitive.json"));
  auto driver = make_driver(sc.datatype);
  SimReport r = driver->run(sc, std::nullopt);
  CHECK(r.ok());
  CHECK(r.converged);
}

TEST_CASE("driver: sizebench rows grow state but not delta") {
  auto driver = make_driver("gset(u64)");
  SizebenchReport r = driver->sizebench(500);
  REQUIRE(r.rows.size() == 500);
  CHECK(r.rows.front().delta_bytes == r.rows.front().state_bytes);
  CHECK(r.rows.back().delta_bytes == r.rows.front().delta_bytes);
  CHECK(r.rows.back().state_bytes > 100 * r.rows.back().delta_bytes);

  // Counter deltas stay one entry while the state holds one per replica.
  SizebenchReport c = make_driver("gcounter")->sizebench(100);
  CHECK(c.rows.back().delta_bytes == c.rows.front().delta_bytes);
  CHECK(c.rows.back().state_bytes > 3 * c.rows.back().delta_bytes);
}
