#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "flows/io.hpp"

using namespace flows;

namespace {

json load(const std::string& name) {
  std::ifstream in(std::filesystem::path(FIXTURE_DIR) / name);
  REQUIRE(in);
  return json::parse(in);
}

}  // namespace

TEST_CASE("fixtures round-trip canonically") {
  for (const char* f : {"fig2.graph", "diamond.graph", "inf-cycle.graph", "fig4-before.snapshot",
                        "fig4-after.snapshot", "fig12.snapshot", "harris-fig1.snapshot"}) {
    CAPTURE(f);
    const json raw = load(f);
    const Document doc = parse_document(raw);
    const json out = to_json(doc);
    CHECK(out == raw);
    CHECK(to_json(parse_document(out)) == out);
  }
  for (const char* f : {"harris.run", "sorted-list.run", "bptree.run", "harris-skip-marking.run"}) {
    CAPTURE(f);
    const json raw = load(f);
    CHECK(to_json(parse_run(raw)) == raw);
  }
  for (const char* f : {"double-insert.history", "insert-member.history"}) {
    CAPTURE(f);
    const json raw = load(f);
    CHECK(to_json(parse_history(raw)) == raw);
  }
}

TEST_CASE("snapshots reproduce the built-in worlds") {
  const Document fig12 = parse_document(load("fig12.snapshot"));
  REQUIRE(fig12.is_snapshot());
  CHECK(dictionary_contents(fig12.state()) == KeySet::of({1, 2, 3, 4, 5, 7, 8}));
  CHECK(fig12.graph.flow.at(fig12.names.id("n")) == Value(KeySet::range(5, 7)));

  const Document fig1 = parse_document(load("harris-fig1.snapshot"));
  const World w = harris_sample_world();
  CHECK(fig1.heap->size() == w.state.heap.size());
  CHECK(good_denotation_check(fig1.graph, *harris_condition(), fig1.params, &*fig1.heap).ok());
}

TEST_CASE("decimal names denote their ids") {
  const World w = sortedlist_world({1, 3});
  const auto g = sortedlist_node_ops()->condition();
  const Document doc = snapshot_document(w, *g);
  const Document back = parse_document(to_json(doc));
  CHECK(back.state() == w.state);
  CHECK(back.params == w.globals);
}

TEST_CASE("canonical form omits zero inflow and sorts nodes") {
  const json j = json::parse(R"({"domain":"path_count","labels":{"flat":[]},
    "nodes":[{"id":"b"},{"id":"a","edges":{"b":1,"s":0}}],"sinks":["s"],"inflow":{"a":1,"b":0}})");
  const json out = to_json(parse_document(j));
  CHECK(out["inflow"] == json{{"a", 1}});
  CHECK(out["nodes"][0]["id"] == "a");
  CHECK(out["nodes"][0]["edges"] == json{{"b", 1}});
  CHECK(out["nodes"][1]["label"] == "bottom");
}

TEST_CASE("malformed documents are rejected") {
  auto bad = [](const char* text) { return parse_document(json::parse(text)); };
  CHECK_THROWS_AS(bad(R"([])"), FormatError);
  CHECK_THROWS_AS(bad(R"({"labels":{"flat":[]},"nodes":[]})"), FormatError);
  CHECK_THROWS_AS(bad(R"({"domain":"nosuch","labels":{"flat":[]},"nodes":[]})"), DecodeError);
  CHECK_THROWS_AS(bad(R"({"domain":"path_count","labels":{"flat":[]},"nodes":[{"id":"a","edges":{"z":1}}]})"),
                  FormatError);
  CHECK_THROWS_AS(bad(R"({"domain":"path_count","labels":{"flat":[]},"nodes":[{"id":"a"},{"id":"a"}]})"),
                  FormatError);
  CHECK_THROWS_AS(bad(R"({"domain":"path_count","labels":{"flat":[]},"nodes":[{"id":"a"}],"inflow":{"q":1}})"),
                  FormatError);
  CHECK_THROWS_AS(bad(R"({"domain":"path_count","labels":{"flat":[]},"nodes":[{"id":"a"}],"inflow":{"a":-1}})"),
                  DecodeError);
  CHECK_THROWS_AS(bad(R"({"domain":"path_count","labels":{"flat":[]},"nodes":[{"id":"a"}],"sinks":["a"]})"),
                  FormatError);
  // Cell marked to a node it is not.
  CHECK_THROWS_AS(bad(R"({"domain":"path_count","labels":{"flat":[]},"nodes":[{"id":"a"}],
                          "heap":{"a":{}},"nodemap":{}})"),
                  FormatError);
  CHECK_THROWS_AS(bad(R"({"domain":"path_count","labels":{"flat":[]},"nodes":[],"nodemap":{}})"), FormatError);
  CHECK_NOTHROW(bad(R"({"domain":"path_count","labels":{"flat":[]},"nodes":[]})"));
}

TEST_CASE("run and history files") {
  CHECK_THROWS_AS(parse_run(json::parse(R"({"structure":"queue","threads":[[]],"mode":"exhaustive"})")), FormatError);
  CHECK_THROWS_AS(parse_run(json::parse(R"({"structure":"sorted_list","threads":[[{"op":"insert"}]],"mode":"exhaustive"})")),
                  FormatError);
  CHECK_THROWS_AS(parse_run(json::parse(R"({"structure":"harris","threads":[[{"op":"insert"}]],"mode":"exhaustive",
                                            "mutant":"skip_range_check"})")),
                  FormatError);
  const RunSpec r = parse_run(json::parse(R"({"structure":"bptree","params":{"initial":[2]},
      "threads":[[{"op":"member","key":2}]],"mode":{"seed":3,"runs":2}})"));
  CHECK(r.seed == 3u);
  CHECK(r.runs == 2u);
  CHECK(dictionary_contents(r.world().state) == KeySet::of({2}));

  CHECK_THROWS_AS(parse_history(json::parse(R"({"events":[{"tid":1,"return":true}]})")), FormatError);
  CHECK_THROWS_AS(parse_history(json::parse(R"({"events":[{"tid":1,"call":"insert","key":1},
                                                          {"tid":1,"call":"insert","key":2}]})")),
                  FormatError);
  const HistoryFile h = parse_history(json::parse(R"({"events":[{"tid":1,"call":"insert","key":1}]})"));
  CHECK(h.events.size() == 1);
}
