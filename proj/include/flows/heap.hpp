#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "flows/good.hpp"

namespace flows {

// A heap, the ghost flow graph over part of it, and the marking of heap cells
// to graph nodes. Graph nodes are marked to themselves.
struct State {
  Heap heap;
  InflowedGraph graph;
  std::map<NodeId, NodeId> nodemap;  // cell -> graph node

  // First violated structural invariant, if any.
  std::optional<std::string> check_well_formed() const;
};

bool operator==(const State& a, const State& b);

State empty_state();

enum class StateComposeFailure { None, HeapOverlap, Graph };

struct StateComposeResult {
  std::optional<State> value;
  StateComposeFailure failure = StateComposeFailure::None;
  ComposeFailure graph_failure = ComposeFailure::None;
  explicit operator bool() const { return value.has_value(); }
};

StateComposeResult state_compose(const State& a, const State& b, const FlowDomain& d);

// Splits off the cells in `cells` together with the graph nodes they mark.
// nullopt when some graph node in `cells` has a marked cell outside it, or
// the reverse.
std::optional<std::pair<State, State>> state_split(const State& s, const NodeSet& cells,
                                                   const FlowDomain& d);

// Same heap and nodemap, equivalent graphs.
bool state_equiv(const State& a, const State& b, const FlowDomain& d);

struct AbstractResult {
  std::optional<InflowedGraph> value;
  std::optional<NodeId> failed;  // offending node
  std::string reason;
  explicit operator bool() const { return value.has_value(); }
};

// Graph over `region` built from the condition's abstraction of each node's
// cell, with the given inflow. Nodes already in s.graph pass their current
// abstraction as the previous one. Edge targets outside the region are sinks.
AbstractResult abstract_region(const State& s, const NodeSet& region, const GoodCondition& g,
                               const Inflow& in);

// Every cell of the heap marked to itself and abstracted with the inflow.
std::optional<State> abstract_state(const Heap& heap, const GoodCondition& g, const Inflow& in);

enum class SyncAbort { None, NotInGraph, Extension, Abstraction, Denotation, Good, Compose };

const char* to_string(SyncAbort a);

struct SyncResult {
  std::optional<State> value;
  SyncAbort abort = SyncAbort::None;
  std::string detail;
  explicit operator bool() const { return value.has_value(); }
};

// Replaces the region's graph by the abstraction of its current cells, after
// checking that the region's interface is contextually extended by `next`,
// that the new graph lies in its denotation and that it is good.
SyncResult ghost_sync(const State& s, const NodeSet& region, const FlowInterface& next,
                      const GoodCondition& g, const Params& p);

// Interface of the region's current cells under the region's current inflow,
// lifted by zero: the witness a wishful assignment supplies to ghost_sync.
std::optional<FlowInterface> wishful_interface(const State& s, const NodeSet& region,
                                               const GoodCondition& g);

// wishful_interface followed by ghost_sync.
SyncResult sync_region(const State& s, const NodeSet& region, const GoodCondition& g,
                       const Params& p);

struct GhostResult {
  std::optional<State> value;
  std::string abort;  // reason when value is empty
  explicit operator bool() const { return value.has_value(); }
};

// x unmarked and y a graph node: mark x to y. x == y unmarked: adjoin a graph
// node with zero inflow, bottom label and no edges.
GhostResult ghost_mark(const State& s, NodeId x, NodeId y, const FlowDomain& d,
                       const LabelDomain& a);

// Drops x's mark. A graph node must carry no flow and mark no other cell; it
// leaves the graph.
GhostResult ghost_unmark(const State& s, NodeId x, const FlowDomain& d);

// Every cell marked, the graph in the denotation of i and good, and each
// node's abstraction reproduced by its cell.
bool eval_gr(const State& s, const FlowInterface& i, const GoodCondition& g, const Params& p);

using HeapPredicate = std::function<bool(const Heap&)>;

bool eval_dirty(const State& s, const FlowInterface& i, const HeapPredicate& pred,
                const FlowDomain& d, const LabelDomain& a);

}  // namespace flows
