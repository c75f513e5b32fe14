#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flows/casestudies.hpp"

namespace flows {

struct ThreadProgram {
  std::int64_t tid = 1;
  std::vector<OpSpec> ops;  // run in order
};

using MachineFactory = std::function<MachinePtr(const OpSpec&, std::int64_t tid)>;

struct MonitorConfig {
  ConditionPtr condition;
  MachineFactory factory;
  std::vector<ThreadProgram> threads;
  // Enables the dictionary checks: edgeset conditions, action conformance,
  // decisive keysets and linearization points.
  bool dictionary = false;
  std::size_t max_configs = 20'000'000;
  std::size_t max_violations = 20;
};

struct HistoryEvent {
  std::int64_t tid = 0;
  bool invoke = true;
  OpSpec op;
  bool result = false;  // responses only
};

// One scheduling decision: the thread to step and which of its enabled
// alternatives to take.
struct ScheduleStep {
  std::int64_t tid = 0;
  int choice = 0;
  bool operator==(const ScheduleStep&) const = default;
};

using Schedule = std::vector<ScheduleStep>;

struct TraceStep {
  std::int64_t tid = 0;
  std::string label;
  std::string pre, post;  // configuration digests (hex hash)
  std::vector<NodeSet> syncs;
  bool lp = false;
};

struct Violation {
  std::string check;
  std::string detail;
  Schedule schedule;               // replays to the violation
  std::vector<std::string> trace;  // "T<tid> <op>: <step label>"
};

struct ExploreReport {
  std::size_t configs = 0;        // distinct configurations reached
  std::size_t transitions = 0;    // steps executed
  std::size_t terminals = 0;      // distinct terminal configurations
  std::size_t excluded = 0;       // steps outside the modeled bound
  std::size_t syncs = 0;          // synced regions checked
  std::size_t histories = 0;      // terminal histories given to the oracle
  std::size_t oracle_agreements = 0;
  std::size_t max_depth = 0;
  // Maximal executions; nullopt when a cycle makes them unbounded.
  std::optional<std::uint64_t> schedules;
  bool truncated = false;         // max_configs reached
  std::map<std::string, std::size_t> counts;  // violations per check
  std::vector<Violation> violations;          // first max_violations
  bool ok() const { return counts.empty() && !truncated; }
};

// Exhaustive exploration of all interleavings of the threads' atomic steps
// from `initial` in a fixed order (threads by position, then alternatives),
// checking every reached configuration.
ExploreReport explore(const World& initial, const MonitorConfig& cfg);

struct RunResult {
  Schedule schedule;                   // steps taken
  std::vector<TraceStep> trace;
  std::optional<Violation> violation;  // first failure; nullopt passes
  std::vector<HistoryEvent> history;
  bool complete = false;               // every thread finished
};

// Replays one schedule with the explorer's checks, stopping at the first
// violation. Throws std::invalid_argument on a step of an unknown or
// finished thread or an out-of-range choice.
RunResult run(const World& initial, const MonitorConfig& cfg, const Schedule& schedule);

// Run along a schedule drawn uniformly among the enabled steps by a
// generator seeded with `seed`, for at most max_steps steps.
RunResult random_run(const World& initial, const MonitorConfig& cfg, std::uint64_t seed,
                     std::size_t max_steps);

// Lock / Alloc / Sync classification of every shared-state change made by
// thread tid between two dictionary states; returns the unmatched changes.
// Sync additionally requires the changed region's interface to be
// contextually extended. Nodes in `locals` are ignored.
std::vector<std::string> action_conformance(const World& pre, const World& post, std::int64_t tid,
                                            const GoodCondition& g, const NodeSet& locals = {});

// Brute-force linearizability of a history against the sequential dictionary
// starting from `initial`. A pending operation may be dropped or take effect
// with any result. Throws std::invalid_argument on ill-formed histories.
bool linearizable(const std::vector<HistoryEvent>& history,
                  const std::vector<std::int64_t>& initial);

// Linearizability judged by linearization points: operations ordered by
// the position of their point in `lp_order` (indices into the completed
// operations in invocation order) and replayed against the specification.
// Throws std::invalid_argument on a history with pending operations.
bool lp_linearizable(const std::vector<HistoryEvent>& history, const std::vector<std::size_t>& lp_order,
                     const std::vector<std::int64_t>& initial);

// Configuration digest of a world: heap, nodemap, ghost graph and globals.
std::string world_digest(const World& w);

}  // namespace flows
