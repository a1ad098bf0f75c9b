#include <doctest.h>

#include <random>

#include "ssdo/fixtures.hpp"
#include "ssdo/io.hpp"
#include "ssdo/solver.hpp"
#include "support.hpp"

using namespace ssdo;
using nlohmann::json;

TEST_CASE("topology JSON round trip with an unbounded edge") {
  Topology g(3);
  g.set_edge(0, 1, 2.5);
  g.set_unbounded_edge(1, 2);
  g.set_edge(2, 0, 0.0);
  std::vector<std::string> names{"A", "B", "C"};

  json j = topology_to_json(g, names);
  NamedTopology back = topology_from_json(j);
  CHECK(back.node_names == names);
  CHECK(back.topology.capacity(0, 1) == 2.5);
  CHECK(back.topology.unbounded(1, 2));
  CHECK(back.topology.capacity(2, 0) == 0.0);
  CHECK_FALSE(back.topology.has_edge(0, 2));
  CHECK(json(topology_to_json(back.topology, back.node_names)) == j);
}

TEST_CASE("topology JSON rejects malformed capacities") {
  json j;
  j["nodes"] = {"A", "B"};
  j["edges"] = json::array({{{"src", "A"}, {"dst", "B"}, {"capacity", "lots"}}});
  CHECK_THROWS_AS(topology_from_json(j), InvariantViolation);
}

TEST_CASE("graphml import doubles undirected edges and sums parallels") {
  const std::string xml = R"(<?xml version="1.0" encoding="utf-8"?>
<graphml xmlns="http://graphml.graphdrawing.org/xmlns">
  <key attr.name="LinkSpeedRaw" attr.type="double" for="edge" id="d32" />
  <graph edgedefault="undirected">
    <node id="X" />
    <node id="Y" />
    <node id="Z" />
    <edge source="X" target="Y">
      <data key="d32">1000</data>
    </edge>
    <edge source="Y" target="Z" />
    <edge source="X" target="Y">
      <data key="d32">500</data>
    </edge>
  </graph>
</graphml>
)";
  NamedTopology named = topology_from_graphml(xml, 7.0);
  CHECK(named.node_names == std::vector<std::string>{"X", "Y", "Z"});
  CHECK(named.topology.capacity(0, 1) == doctest::Approx(1500.0));
  CHECK(named.topology.capacity(1, 0) == doctest::Approx(1500.0));
  CHECK(named.topology.capacity(1, 2) == doctest::Approx(7.0));
  CHECK(named.topology.capacity(2, 1) == doctest::Approx(7.0));
  CHECK_FALSE(named.topology.has_edge(0, 2));
}

TEST_CASE("path set JSON round trip") {
  Topology g = complete_dcn_topology(3, 1.0);
  PathSet paths = yen_paths_all_pairs(g, 2);
  std::vector<std::string> names{"A", "B", "C"};
  json j = path_set_to_json(paths, names);
  PathSet back = path_set_from_json(j, names);
  for (int s = 0; s < 3; ++s)
    for (int d = 0; d < 3; ++d)
      CHECK(back.paths(s, d) == paths.paths(s, d));
}

TEST_CASE("demand CSV and JSON round trips") {
  DemandMatrix demands = triangle_fixture_demands();
  DemandMatrix from_csv = demands_from_csv(demands_to_csv(demands));
  CHECK(from_csv == demands);
  DemandMatrix from_json = demands_from_json(demands_to_json(demands));
  CHECK(from_json == demands);

  // Round trip preserves full double precision.
  DemandMatrix awkward(2);
  awkward.set(0, 1, 1.0 / 3.0);
  awkward.set(1, 0, 2.0000000000000004);
  CHECK(demands_from_csv(demands_to_csv(awkward)) == awkward);
}

TEST_CASE("demand CSV rejects ragged input") {
  CHECK_THROWS_AS(demands_from_csv("0,1\n2\n"), InvariantViolation);
  CHECK_THROWS_AS(demands_from_csv("0,x\n2,0\n"), InvariantViolation);
}

TEST_CASE("split tensor JSON round trip validates on import") {
  Topology g = complete_dcn_topology(3, 2.0);
  PathSet paths = yen_paths_all_pairs(g, 2);
  DemandMatrix demands = triangle_fixture_demands();
  std::vector<std::string> names{"A", "B", "C"};

  auto [split, report] = run(g, demands, paths, {});
  json j = split_tensor_to_json(split, names);
  SplitTensor back = split_tensor_from_json(j, g, paths, names);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int d = 0; d < 3; ++d)
        CHECK(back.at(i, k, d) == doctest::Approx(split.at(i, k, d)).epsilon(1e-9));

  json bad = j;
  bad["entries"][0]["ratio"] = 5.0;
  CHECK_THROWS_AS(split_tensor_from_json(bad, g, paths, names), InvariantViolation);
}

TEST_CASE("path split JSON round trip") {
  RingFixture fixture = ring_deadlock_fixture(5);
  std::vector<std::string> names{"A", "B", "C", "D", "E"};
  json j = path_split_to_json(fixture.all_detour_split, fixture.paths, names);
  PathSplit back =
      path_split_from_json(j, fixture.demands, fixture.paths, names);
  for (int i = 0; i < 5; ++i) {
    const auto& ratios = back.ratios(i, (i + 1) % 5);
    REQUIRE(ratios.size() == 2);
    CHECK(ratios[0] == 0.0);
    CHECK(ratios[1] == 1.0);
  }

  json bad = j;
  bad["sds"][0]["splits"][0]["path"] = {"A", "C", "B"};
  CHECK_THROWS_AS(path_split_from_json(bad, fixture.demands, fixture.paths, names),
                  InvariantViolation);
}

TEST_CASE("report JSON carries the schema and trajectory") {
  SolveReport report;
  report.final_mlu = 0.75;
  report.iterations = 2;
  report.sd_updates = 3;
  report.termination = Termination::converged;
  report.mlu_trajectory = {{0.0, 1.0}, {0.0011234, 0.75}};
  json j = report_to_json(report);
  CHECK(j["schema"] == "solve-report/1");
  CHECK(j["final_mlu"] == 0.75);
  CHECK(j["termination"] == "converged");
  REQUIRE(j["mlu_trajectory"].size() == 2);
  CHECK(j["mlu_trajectory"][1]["seconds"] == doctest::Approx(0.001));
}

TEST_CASE("atomic write replaces the file completely") {
  auto dir = std::filesystem::temp_directory_path() / "ssdo_io_test";
  std::filesystem::create_directories(dir);
  auto file = dir / "out.txt";
  atomic_write_file(file, "first");
  atomic_write_file(file, "second");
  CHECK(read_file(file) == "second");
  std::filesystem::remove_all(dir);
}
