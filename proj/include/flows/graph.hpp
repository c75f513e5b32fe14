#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flows/algebra.hpp"

namespace flows {

struct NodeId {
  std::uint32_t v = 0;
  auto operator<=>(const NodeId&) const = default;
};

using NodeSet = std::set<NodeId>;
using EdgeMap = std::map<NodeId, Value>;  // target -> nonzero label
using Inflow = std::map<NodeId, Value>;   // sparse, absent = 0
using NodeFlow = std::map<NodeId, Value>;  // per-node flow, total over nodes

struct FlowGraph {
  std::map<NodeId, Label> nodes;     // node set with labels
  NodeSet sinks;                     // disjoint from nodes
  std::map<NodeId, EdgeMap> edges;   // absent = 0

  bool has(NodeId n) const { return nodes.count(n) != 0; }
  NodeSet node_set() const;
  Value edge(NodeId from, NodeId to, const FlowDomain& d) const;
  // Stores `label`, or erases the edge when it is zero.
  void set_edge(NodeId from, NodeId to, const Value& label, const FlowDomain& d);
  const EdgeMap& out(NodeId n) const;

  // First violated structural invariant, if any.
  std::optional<std::string> check_well_formed(const FlowDomain& d) const;
};

bool operator==(const FlowGraph& a, const FlowGraph& b);

// Capacity restricted to nodes x (nodes + sinks). Entries are kept densely.
class Capacity {
 public:
  Capacity(std::vector<NodeId> nodes, std::vector<NodeId> sinks, std::vector<Value> cells,
           Value zero);

  const Value& at(NodeId from, NodeId to) const;  // zero when `to` is unknown
  const std::vector<NodeId>& nodes() const { return nodes_; }
  const std::vector<NodeId>& sinks() const { return sinks_; }
  bool operator==(const Capacity& other) const;

 private:
  std::vector<NodeId> nodes_, sinks_;
  std::vector<Value> cells_;  // nodes_.size() rows, nodes_.size() + sinks_.size() columns
  std::map<NodeId, std::size_t> row_, col_;
  Value zero_;
};

// Least fixpoint of cap = init + eps . cap, by the algebraic-path closure.
// The parallel variant distributes the rows of each pivot step over OpenMP
// threads once the graph is large enough to pay for it.
Capacity capacity(const FlowGraph& g, const FlowDomain& d);
Capacity capacity_serial(const FlowGraph& g, const FlowDomain& d);

// In-place closure M := M+ (sum over non-empty paths) of a dense n x n matrix.
void closure_serial(std::vector<Value>& m, std::size_t n, const FlowDomain& d);
void closure_parallel(std::vector<Value>& m, std::size_t n, const FlowDomain& d);

NodeFlow flow(const Inflow& in, const FlowGraph& g, const FlowDomain& d);
NodeFlow flow(const Inflow& in, const Capacity& cap, const FlowDomain& d);

// Drops zero entries.
Inflow sparse(const Inflow& in, const FlowDomain& d);
// Value at n, or zero.
Value lookup(const std::map<NodeId, Value>& m, NodeId n, const FlowDomain& d);

struct InflowedGraph {
  FlowGraph graph;
  Inflow inflow;
  NodeFlow flow;
};

InflowedGraph make_inflowed(FlowGraph g, const Inflow& in, const FlowDomain& d);

std::optional<FlowGraph> disjoint_union(const FlowGraph& a, const FlowGraph& b);

// result(n) = in(n) + sum over n' outside `sub` of flow(n') . eps(n', n)
Inflow project_inflow(const Inflow& in, const FlowGraph& g, const NodeSet& sub,
                      const FlowDomain& d);

bool inflow_equiv(const Inflow& a, const Inflow& b, const FlowGraph& g, const FlowDomain& d);
// Same graph and equivalent inflows.
bool inflowed_equiv(const InflowedGraph& a, const InflowedGraph& b, const FlowDomain& d);

// Canonical member of the inflow class of `in` on g: the per-node residual
// of the flow over the contribution arriving along edges of g, when that is a
// member of the class; otherwise `in` itself.
Inflow canonical_inflow(const Inflow& in, const FlowGraph& g, const FlowDomain& d);

enum class ComposeFailure { None, Overlap, Residual, Verification };

struct ComposeResult {
  std::optional<InflowedGraph> value;
  ComposeFailure failure = ComposeFailure::None;
  std::optional<NodeId> at;  // offending node for Overlap / Residual
  explicit operator bool() const { return value.has_value(); }
};

const char* to_string(ComposeFailure f);

ComposeResult fg_compose(const InflowedGraph& a, const InflowedGraph& b, const FlowDomain& d);

// Splits off `part`; edges leaving either side become sink edges and the
// inflow is projected onto both sides. Requires part to be a subset of the
// nodes of h.
std::pair<InflowedGraph, InflowedGraph> fg_decompose(const InflowedGraph& h, const NodeSet& part,
                                                     const FlowDomain& d);

}  // namespace flows
