#include <doctest.h>

#include <iostream>

#include "flows/monitor.hpp"

using namespace flows;

namespace {

MonitorConfig harris_config(HarrisOptions opts = {}) {
  MonitorConfig cfg;
  cfg.condition = harris_condition();
  cfg.factory = [opts](const OpSpec& op, std::int64_t tid) { return harris_machine(op.kind, tid, opts); };
  cfg.threads = {{1, {{OpKind::Insert, 0}}}, {2, {{OpKind::Delete, 0}}}};
  return cfg;
}

MonitorConfig dictionary_config(NodeOpsPtr ops, std::vector<ThreadProgram> threads,
                                GiveUpOptions opts = {}) {
  MonitorConfig cfg;
  cfg.condition = ops->condition();
  cfg.factory = [ops, opts](const OpSpec& op, std::int64_t tid) { return giveup_machine(op, tid, ops, opts); };
  cfg.threads = std::move(threads);
  cfg.dictionary = true;
  return cfg;
}

void show(const std::string& name, const ExploreReport& r) {
  std::cout << name << ": configs=" << r.configs << " transitions=" << r.transitions
            << " terminals=" << r.terminals << " syncs=" << r.syncs << " histories=" << r.histories
            << " agreements=" << r.oracle_agreements << " excluded=" << r.excluded << "\n";
  for (const auto& v : r.violations) {
    std::cout << "  " << v.check << ": " << v.detail << "\n";
    for (const auto& s : v.trace) std::cout << "    " << s << "\n";
  }
}

HistoryEvent inv(std::int64_t t, OpKind k, std::int64_t key) { return {t, true, {k, key}, false}; }
HistoryEvent ret(std::int64_t t, OpKind k, std::int64_t key, bool r) { return {t, false, {k, key}, r}; }

}  // namespace

TEST_CASE("brute-force linearizability") {
  using K = OpKind;
  // Overlapping insert and member: either order.
  CHECK(linearizable({inv(1, K::Insert, 2), inv(2, K::Member, 2), ret(2, K::Member, 2, true),
                      ret(1, K::Insert, 2, true)},
                     {}));
  CHECK(linearizable({inv(1, K::Insert, 2), inv(2, K::Member, 2), ret(2, K::Member, 2, false),
                      ret(1, K::Insert, 2, true)},
                     {}));
  // Member returns true before the insert is invoked.
  CHECK_FALSE(linearizable({inv(2, K::Member, 2), ret(2, K::Member, 2, true), inv(1, K::Insert, 2),
                            ret(1, K::Insert, 2, true)},
                           {}));
  // Two successful deletes of one key.
  CHECK_FALSE(linearizable({inv(1, K::Delete, 1), inv(2, K::Delete, 1), ret(1, K::Delete, 1, true),
                            ret(2, K::Delete, 1, true)},
                           {1}));
  // Pending operations may be dropped or take effect.
  CHECK(linearizable({inv(1, K::Delete, 1)}, {1}));
  CHECK(linearizable({inv(1, K::Delete, 1), inv(2, K::Member, 1), ret(2, K::Member, 1, false)}, {1}));
  CHECK_FALSE(linearizable({inv(2, K::Member, 1), ret(2, K::Member, 1, false), inv(1, K::Delete, 1)}, {1}));
  CHECK_THROWS(linearizable({ret(1, K::Delete, 1, true)}, {1}));
  CHECK_THROWS(lp_linearizable({inv(1, K::Delete, 1)}, {0}, {1}));
}

TEST_CASE("harris insert and delete interleave safely") {
  auto r = explore(harris_world(3), harris_config());
  show("harris", r);
  CHECK(r.ok());
  CHECK(r.terminals > 0);
  CHECK(r.syncs > 0);
}

TEST_CASE("harris without marking fails on some schedule") {
  auto r = explore(harris_world(3), harris_config(HarrisOptions{true}));
  show("harris mutant", r);
  CHECK_FALSE(r.ok());
}

TEST_CASE("dictionaries on a small workload") {
  for (auto ops : {sortedlist_node_ops(), bptree_node_ops(2)}) {
    const World w = ops->name() == "bptree" ? bptree_world({1, 3}) : sortedlist_world({1, 3});
    auto cfg = dictionary_config(ops, {{1, {{OpKind::Insert, 2}, {OpKind::Delete, 1}}},
                                       {2, {{OpKind::Insert, 2}, {OpKind::Member, 2}}}});
    auto r = explore(w, cfg);
    show(ops->name(), r);
    CHECK(r.ok());
    CHECK(r.histories == r.oracle_agreements);
  }
}

// Only the sorted list changes node ranges; without splits a B+ node keeps
// its range and the range check never fails.
TEST_CASE("give-up template without the range check fails on some schedule") {
  auto ops = sortedlist_node_ops();
  auto cfg = dictionary_config(ops, {{1, {{OpKind::Delete, 1}, {OpKind::Delete, 3}}},
                                     {2, {{OpKind::Member, 3}, {OpKind::Insert, 3}}}},
                               GiveUpOptions{true});
  auto r = explore(sortedlist_world({1, 3}), cfg);
  show("sorted_list mutant", r);
  CHECK_FALSE(r.ok());
  CHECK(r.counts.count("local-fact") + r.counts.count("decisive-keyset") > 0);
}

TEST_CASE("action conformance classifies every step of a solo operation") {
  for (auto ops : {sortedlist_node_ops(), bptree_node_ops(2)}) {
    World w = ops->name() == "bptree" ? bptree_world({1, 3}) : sortedlist_world({1, 3});
    for (const OpSpec op : {OpSpec{OpKind::Insert, 2}, OpSpec{OpKind::Delete, 1}}) {
      World cur = w;
      auto m = giveup_machine(op, 1, ops);
      int lock_steps = 0, foreign = 0;
      for (int i = 0; i < 200 && !m->done(); ++i) {
        const World pre = cur;
        NodeSet locals = m->local_nodes();
        const StepEvent ev = m->step(cur, 0);
        REQUIRE_FALSE(ev.failure);
        for (auto n : m->local_nodes()) locals.insert(n);
        CHECK(action_conformance(pre, cur, 1, *ops->condition(), locals).empty());
        if (ev.label == "lock") ++lock_steps;
        // The same change attributed to another thread writes nodes it does not own.
        if (world_digest(pre) != world_digest(cur) &&
            !action_conformance(pre, cur, 2, *ops->condition(), locals).empty()) {
          ++foreign;
        }
      }
      CHECK(m->done());
      CHECK(lock_steps > 0);
      CHECK(foreign > 0);
    }
  }
}

TEST_CASE("a reported violation replays from its schedule") {
  const auto cfg = harris_config(HarrisOptions{true});
  const World w = harris_world(3);
  auto r = explore(w, cfg);
  REQUIRE_FALSE(r.violations.empty());
  const Violation& v = r.violations.front();
  REQUIRE_FALSE(v.schedule.empty());
  auto replay = run(w, cfg, v.schedule);
  REQUIRE(replay.violation);
  CHECK(replay.violation->check == v.check);
  CHECK(replay.violation->detail == v.detail);
  CHECK(replay.trace.size() == v.schedule.size());
  CHECK(replay.violation->schedule == v.schedule);
  for (std::size_t i = 1; i < replay.trace.size(); ++i) CHECK(replay.trace[i].pre == replay.trace[i - 1].post);

  auto again = run(w, cfg, v.schedule);
  REQUIRE(again.violation);
  CHECK(again.trace.back().post == replay.trace.back().post);

  CHECK_THROWS_AS(run(w, cfg, {{7, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(run(w, cfg, {{1, 5}}), std::invalid_argument);
}

TEST_CASE("a passing schedule runs to completion") {
  const auto cfg = harris_config();
  const World w = harris_world(3);
  Schedule s;
  // Thread 1 alone, then thread 2 alone.
  for (std::int64_t tid : {1, 2}) {
    for (int i = 0; i < 100; ++i) {
      s.push_back({tid, 0});
      auto r = run(w, cfg, s);
      REQUIRE_FALSE(r.violation);
      if (r.history.size() == (tid == 1 ? 2u : 4u)) break;
    }
  }
  auto r = run(w, cfg, s);
  CHECK_FALSE(r.violation);
  CHECK(r.complete);
}

TEST_CASE("harris schedule count") {
  auto r = explore(harris_world(3), harris_config());
  REQUIRE(r.ok());
  std::cout << "harris schedules: " << (r.schedules ? std::to_string(*r.schedules) : "unbounded") << "\n";
  if (r.schedules) CHECK(*r.schedules >= r.terminals);
}

TEST_CASE("linearization-point verdicts") {
  using K = OpKind;
  const std::vector<HistoryEvent> h{inv(1, K::Insert, 5), inv(2, K::Insert, 5), ret(1, K::Insert, 5, true),
                                    ret(2, K::Insert, 5, true)};
  CHECK_FALSE(lp_linearizable(h, {0, 1}, {}));
  CHECK_FALSE(linearizable(h, {}));
  const std::vector<HistoryEvent> ok{inv(1, K::Insert, 5), inv(2, K::Member, 5), ret(2, K::Member, 5, false),
                                     ret(1, K::Insert, 5, true)};
  CHECK(lp_linearizable(ok, {1, 0}, {}));
  CHECK_FALSE(lp_linearizable(ok, {0, 1}, {}));
  CHECK_FALSE(lp_linearizable(ok, {0}, {}));
}
