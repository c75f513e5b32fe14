#include <doctest.h>

#include "flows/casestudies.hpp"

using namespace flows;

namespace {

// Runs m alone, taking `choice` whenever more than one step is enabled.
std::vector<StepEvent> run_solo(World& w, Machine& m, const GoodCondition& g, int choice = 0) {
  std::vector<StepEvent> events;
  for (int guard = 0; !m.done() && guard < 200; ++guard) {
    const int n = m.choices(w);
    StepEvent ev = m.step(w, std::min(choice, n - 1));
    INFO(ev.label << ": " << ev.failure.value_or(""));
    REQUIRE_FALSE(ev.failure);
    REQUIRE_FALSE(w.state.check_well_formed());
    CHECK(good_denotation_check(w.state.graph, g, w.globals, &w.state.heap, m.local_nodes()).ok());
    events.push_back(std::move(ev));
  }
  REQUIRE(m.done());
  return events;
}

void check_global_ok(const World& w, const GoodCondition& g) {
  const auto i = interface_of(w.state.graph, *g.domain(), *g.labels());
  CHECK(check_global(i, g.global(w.globals), *g.domain()).empty());
}

int lp_count(const std::vector<StepEvent>& evs) {
  int n = 0;
  for (const auto& e : evs) n += e.lp ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("harris worlds satisfy the invariant") {
  const auto g = harris_condition();
  for (int m : {0, 1, 3}) {
    const World w = harris_world(m);
    CHECK(good_denotation_check(w.state.graph, *g, w.globals, &w.state.heap).ok());
    check_global_ok(w, *g);
  }
  const World fig = harris_sample_world();
  CHECK(good_denotation_check(fig.state.graph, *g, fig.globals, &fig.state.heap).ok());
  check_global_ok(fig, *g);
}

TEST_CASE("harris insert and delete run solo") {
  const auto g = harris_condition();
  World w = harris_world(2);
  auto ins = harris_machine(OpKind::Insert, 1);
  run_solo(w, *ins, *g);
  CHECK(ins->result() == true);
  CHECK(w.state.heap.size() == 6);
  check_global_ok(w, *g);

  auto del = harris_machine(OpKind::Delete, 2);
  run_solo(w, *del, *g);
  CHECK(del->result() == true);
  check_global_ok(w, *g);
  const NodeId removed = w.globals.at("ft");
  CHECK(ptr_field(w.state.heap.at(removed), "next").mark);
  CHECK(ptr_field(w.state.heap.at(NodeId{0}), "next").addr != removed);
}

TEST_CASE("harris delete on an empty list returns false") {
  const auto g = harris_condition();
  World w = harris_world(0);
  auto del = harris_machine(OpKind::Delete, 1);
  run_solo(w, *del, *g);
  CHECK(del->result() == false);
}

TEST_CASE("harris mutant breaks the invariant when unlinking unmarked nodes") {
  const auto g = harris_condition();
  World w = harris_world(2);
  auto del = harris_machine(OpKind::Delete, 1, HarrisOptions{true});
  bool failed = false;
  for (int guard = 0; !del->done() && guard < 50; ++guard) {
    StepEvent ev = del->step(w, 0);
    if (ev.failure ||
        !good_denotation_check(w.state.graph, *g, w.globals, &w.state.heap).ok()) {
      failed = true;
      break;
    }
  }
  CHECK(failed);
}

TEST_CASE("sequential specification") {
  const std::vector<OpSpec> h{{OpKind::Insert, 2}, {OpKind::Insert, 2}, {OpKind::Member, 2},
                              {OpKind::Delete, 1}, {OpKind::Delete, 2}, {OpKind::Member, 2}};
  CHECK(sequential_spec(h) == std::vector<bool>{true, false, true, false, true, false});
  CHECK(sequential_spec({{OpKind::Delete, 1}}, {1}) == std::vector<bool>{true});
}

TEST_CASE("dictionary worlds satisfy the invariant") {
  for (auto ops : {bptree_node_ops(2), sortedlist_node_ops()}) {
    const auto& g = *ops->condition();
    const World w = ops->name() == "bptree" ? bptree_world({1, 3}) : sortedlist_world({1, 3});
    CHECK(good_denotation_check(w.state.graph, g, w.globals, &w.state.heap).ok());
    check_global_ok(w, g);
    CHECK(dictionary_contents(w.state) == KeySet::of({1, 3}));
    CHECK(edgeset_report(w.state.graph).ok());
  }
  const World fig = bptree_sample_world();
  CHECK(dictionary_contents(fig.state) == KeySet::of({1, 2, 3, 4, 5, 7, 8}));
  CHECK(fig.state.graph.flow.at(NodeId{4}) == Value(KeySet::range(5, 7)));
}

TEST_CASE("dictionary operations run solo against the sequential specification") {
  for (auto ops : {bptree_node_ops(2), sortedlist_node_ops()}) {
    CAPTURE(ops->name());
    const auto& g = *ops->condition();
    World w = ops->name() == "bptree" ? bptree_world({1, 3}) : sortedlist_world({1, 3});
    const std::vector<OpSpec> script{{OpKind::Member, 1}, {OpKind::Insert, 2}, {OpKind::Insert, 2},
                                     {OpKind::Delete, 1}, {OpKind::Member, 1}, {OpKind::Insert, 4},
                                     {OpKind::Delete, 3}, {OpKind::Delete, 3}, {OpKind::Member, 4},
                                     {OpKind::Insert, 1}};
    const auto expected = sequential_spec(script, {1, 3});
    for (std::size_t i = 0; i < script.size(); ++i) {
      CAPTURE(i);
      auto m = giveup_machine(script[i], 1, ops);
      const auto evs = run_solo(w, *m, g);
      CHECK(m->result() == expected[i]);
      CHECK(lp_count(evs) == 1);
      check_global_ok(w, g);
      CHECK(edgeset_report(w.state.graph).ok());
    }
    CHECK(dictionary_contents(w.state) == KeySet::of({1, 2, 4}));
    for (const auto& [n, rec] : w.state.heap) CHECK(int_field(rec, "lock") == ExtInt(0));
  }
}

TEST_CASE("b+ tree insert into a full node is an exclusion") {
  auto ops = bptree_node_ops(2);
  World w = bptree_world({3, 4, 5});
  auto m = giveup_machine({OpKind::Insert, 6}, 1, ops);
  bool excluded = false;
  for (int guard = 0; !m->done() && guard < 50; ++guard) {
    StepEvent ev = m->step(w, 0);
    REQUIRE_FALSE(ev.failure);
    excluded = excluded || ev.exclusion;
  }
  CHECK(excluded);
}

TEST_CASE("decisive operation reports its node and key") {
  auto ops = sortedlist_node_ops();
  World w = sortedlist_world({1, 3});
  auto m = giveup_machine({OpKind::Insert, 2}, 1, ops);
  std::optional<std::pair<NodeId, std::int64_t>> decisive;
  while (!m->done()) {
    StepEvent ev = m->step(w, 0);
    REQUIRE_FALSE(ev.failure);
    if (ev.decisive) decisive = ev.decisive;
  }
  REQUIRE(decisive);
  CHECK(decisive->first == NodeId{2});
  CHECK(decisive->second == 2);
}
