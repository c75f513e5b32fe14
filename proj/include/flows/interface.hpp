#pragma once

#include <map>
#include <optional>
#include <utility>

#include "flows/graph.hpp"

namespace flows {

// Capacity restricted to (source, sink) pairs; zero entries are not stored.
using FlowMap = std::map<std::pair<NodeId, NodeId>, Value>;

struct FlowInterface {
  Inflow inflow_rep;      // canonical representative of the inflow class
  NodeSet sources;        // support of inflow_rep
  Label label_join;       // join of all node labels
  FlowMap flowmap;
  InflowedGraph witness;  // decides class membership; never observable

  NodeSet dom() const { return witness.graph.node_set(); }
  const NodeSet& sinks() const { return witness.graph.sinks; }
};

FlowMap flowmap_of(const FlowGraph& g, const NodeSet& sources, const FlowDomain& d);

FlowInterface interface_of(const InflowedGraph& h, const FlowDomain& d, const LabelDomain& a);
// Interface of the empty graph.
FlowInterface empty_interface(const LabelDomain& a);

// Membership of h in the denotation of i (without a good condition).
bool satisfies(const InflowedGraph& h, const FlowInterface& i, const FlowDomain& d,
               const LabelDomain& a);

// Composite interface via the witnesses; nullopt when the graphs do not compose.
std::optional<FlowInterface> int_compose(const FlowInterface& i1, const FlowInterface& i2,
                                         const FlowDomain& d, const LabelDomain& a);

// i is contextually extended by ext: the inflow class of i, lifted by zero,
// is contained in that of ext, and the flow map rows of i's sources are kept.
bool contextual_extension(const FlowInterface& i, const FlowInterface& ext, const FlowDomain& d);

// Component equality plus representative cross-membership.
bool interface_equal(const FlowInterface& a, const FlowInterface& b, const FlowDomain& d);

}  // namespace flows
