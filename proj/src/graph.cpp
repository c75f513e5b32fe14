#include "flows/graph.hpp"

namespace flows {

NodeSet FlowGraph::node_set() const {
  NodeSet out;
  for (const auto& [n, _] : nodes) out.insert(n);
  return out;
}

Value FlowGraph::edge(NodeId from, NodeId to, const FlowDomain& d) const {
  auto it = edges.find(from);
  if (it == edges.end()) return d.zero();
  auto jt = it->second.find(to);
  return jt == it->second.end() ? d.zero() : jt->second;
}

void FlowGraph::set_edge(NodeId from, NodeId to, const Value& label, const FlowDomain& d) {
  if (d.is_zero(label)) {
    auto it = edges.find(from);
    if (it == edges.end()) return;
    it->second.erase(to);
    if (it->second.empty()) edges.erase(it);
    return;
  }
  edges[from][to] = label;
}

const EdgeMap& FlowGraph::out(NodeId n) const {
  static const EdgeMap kNone;
  auto it = edges.find(n);
  return it == edges.end() ? kNone : it->second;
}

std::optional<std::string> FlowGraph::check_well_formed(const FlowDomain& d) const {
  for (auto s : sinks) {
    if (has(s)) return "node " + std::to_string(s.v) + " is both a node and a sink";
  }
  for (const auto& [from, out] : edges) {
    if (!has(from)) return "edge source " + std::to_string(from.v) + " is not a node";
    if (out.empty()) return "empty edge row at " + std::to_string(from.v);
    for (const auto& [to, label] : out) {
      if (!has(to) && !sinks.count(to)) {
        return "edge target " + std::to_string(to.v) + " is neither a node nor a sink";
      }
      if (d.is_zero(label)) return "stored zero edge";
      if (!d.member(label)) return "edge label outside the flow domain";
    }
  }
  return std::nullopt;
}

bool operator==(const FlowGraph& a, const FlowGraph& b) {
  return a.nodes == b.nodes && a.sinks == b.sinks && a.edges == b.edges;
}

NodeFlow flow(const Inflow& in, const Capacity& cap, const FlowDomain& d) {
  NodeFlow out;
  for (auto n : cap.nodes()) {
    Value acc = d.zero();
    for (const auto& [src, v] : in) acc = d.plus(acc, d.times(v, cap.at(src, n)));
    out.emplace(n, std::move(acc));
  }
  return out;
}

NodeFlow flow(const Inflow& in, const FlowGraph& g, const FlowDomain& d) {
  return flow(in, capacity(g, d), d);
}

Inflow sparse(const Inflow& in, const FlowDomain& d) {
  Inflow out;
  for (const auto& [n, v] : in) {
    if (!d.is_zero(v)) out.emplace(n, v);
  }
  return out;
}

Value lookup(const std::map<NodeId, Value>& m, NodeId n, const FlowDomain& d) {
  auto it = m.find(n);
  return it == m.end() ? d.zero() : it->second;
}

InflowedGraph make_inflowed(FlowGraph g, const Inflow& in, const FlowDomain& d) {
  InflowedGraph h;
  h.inflow = sparse(in, d);
  h.flow = flow(h.inflow, g, d);
  h.graph = std::move(g);
  return h;
}

std::optional<FlowGraph> disjoint_union(const FlowGraph& a, const FlowGraph& b) {
  for (const auto& [n, _] : a.nodes) {
    if (b.has(n)) return std::nullopt;
  }
  FlowGraph g;
  g.nodes = a.nodes;
  g.nodes.insert(b.nodes.begin(), b.nodes.end());
  for (auto s : a.sinks) {
    if (!b.has(s)) g.sinks.insert(s);
  }
  for (auto s : b.sinks) {
    if (!a.has(s)) g.sinks.insert(s);
  }
  g.edges = a.edges;
  g.edges.insert(b.edges.begin(), b.edges.end());
  return g;
}

Inflow project_inflow(const Inflow& in, const FlowGraph& g, const NodeSet& sub,
                      const FlowDomain& d) {
  const NodeFlow fl = flow(in, g, d);
  Inflow out;
  for (auto n : sub) out[n] = lookup(in, n, d);
  for (const auto& [from, edges] : g.edges) {
    if (sub.count(from)) continue;
    for (const auto& [to, label] : edges) {
      if (!sub.count(to)) continue;
      out[to] = d.plus(out[to], d.times(fl.at(from), label));
    }
  }
  return sparse(out, d);
}

bool inflow_equiv(const Inflow& a, const Inflow& b, const FlowGraph& g, const FlowDomain& d) {
  const Capacity cap = capacity(g, d);
  return flow(a, cap, d) == flow(b, cap, d);
}

bool inflowed_equiv(const InflowedGraph& a, const InflowedGraph& b, const FlowDomain& d) {
  (void)d;
  return a.graph == b.graph && a.flow == b.flow;
}

const char* to_string(ComposeFailure f) {
  switch (f) {
    case ComposeFailure::None: return "none";
    case ComposeFailure::Overlap: return "overlap";
    case ComposeFailure::Residual: return "residual";
    case ComposeFailure::Verification: return "verification";
  }
  return "?";
}

namespace {

struct Candidates {
  Inflow canonical, saturated;
  std::optional<NodeId> stuck;  // node without a residual
};

// Per-node residual of the flow over the contribution arriving along edges
// of g, plus the variant that keeps the whole flow wherever that
// contribution is absorbed.
Candidates inflow_candidates(const FlowGraph& g, const NodeFlow& fl, const FlowDomain& d) {
  std::map<NodeId, Value> internal;
  for (const auto& [n, _] : g.nodes) internal[n] = d.zero();
  for (const auto& [from, edges] : g.edges) {
    for (const auto& [to, label] : edges) {
      auto it = internal.find(to);
      if (it != internal.end()) it->second = d.plus(it->second, d.times(fl.at(from), label));
    }
  }
  Candidates c;
  for (const auto& [n, part] : internal) {
    auto r = d.residual(fl.at(n), part);
    if (!r) {
      c.stuck = n;
      return c;
    }
    c.canonical[n] = *r;
    c.saturated[n] = d.plus(part, fl.at(n)) == fl.at(n) ? fl.at(n) : *r;
  }
  c.canonical = sparse(c.canonical, d);
  c.saturated = sparse(c.saturated, d);
  return c;
}

// Per-node residual of each part's own inflow over what the other part
// sends it, plus the variant keeping the part inflow where that is absorbed.
std::vector<Inflow> cross_candidates(const InflowedGraph& a, const InflowedGraph& b,
                                     const FlowDomain& d) {
  std::vector<Inflow> out(2);
  for (const auto* side : {&a, &b}) {
    const InflowedGraph& other = side == &a ? b : a;
    for (const auto& [n, _] : side->graph.nodes) {
      Value cross = d.zero();
      for (const auto& [from, edges] : other.graph.edges) {
        auto it = edges.find(n);
        if (it != edges.end()) cross = d.plus(cross, d.times(other.flow.at(from), it->second));
      }
      const Value own = lookup(side->inflow, n, d);
      auto r = d.residual(own, cross);
      if (!r) return {};
      out[0][n] = *r;
      out[1][n] = d.plus(cross, own) == own ? own : *r;
    }
  }
  for (auto& c : out) c = sparse(c, d);
  return out;
}

bool verify(const Inflow& in, const FlowGraph& g, const NodeFlow& expected, const InflowedGraph& a,
            const InflowedGraph& b, const FlowDomain& d) {
  const Capacity cap = capacity(g, d);
  if (flow(in, cap, d) != expected) return false;
  const NodeSet na = a.graph.node_set(), nb = b.graph.node_set();
  return flow(project_inflow(in, g, na, d), a.graph, d) == a.flow &&
         flow(project_inflow(in, g, nb, d), b.graph, d) == b.flow;
}

}  // namespace

Inflow canonical_inflow(const Inflow& in, const FlowGraph& g, const FlowDomain& d) {
  const Capacity cap = capacity(g, d);
  const NodeFlow fl = flow(in, cap, d);
  Candidates c = inflow_candidates(g, fl, d);
  if (!c.stuck) {
    for (Inflow* cand : {&c.canonical, &c.saturated}) {
      if (flow(*cand, cap, d) == fl) return std::move(*cand);
    }
  }
  return sparse(in, d);
}

ComposeResult fg_compose(const InflowedGraph& a, const InflowedGraph& b, const FlowDomain& d) {
  ComposeResult res;
  auto g = disjoint_union(a.graph, b.graph);
  if (!g) {
    res.failure = ComposeFailure::Overlap;
    for (const auto& [n, _] : a.graph.nodes) {
      if (b.graph.has(n)) {
        res.at = n;
        break;
      }
    }
    return res;
  }

  NodeFlow fl = a.flow;
  fl.insert(b.flow.begin(), b.flow.end());
  Candidates c = inflow_candidates(*g, fl, d);
  if (c.stuck) {
    res.failure = ComposeFailure::Residual;
    res.at = c.stuck;
    return res;
  }
  std::vector<Inflow> cands{std::move(c.canonical), std::move(c.saturated)};
  for (auto& x : cross_candidates(a, b, d)) cands.push_back(std::move(x));
  for (auto& cand : cands) {
    if (verify(cand, *g, fl, a, b, d)) {
      res.value = InflowedGraph{std::move(*g), std::move(cand), std::move(fl)};
      return res;
    }
  }
  res.failure = ComposeFailure::Verification;
  return res;
}

std::pair<InflowedGraph, InflowedGraph> fg_decompose(const InflowedGraph& h, const NodeSet& part,
                                                     const FlowDomain& d) {
  FlowGraph g1, g2;
  for (const auto& [n, label] : h.graph.nodes) {
    (part.count(n) ? g1 : g2).nodes.emplace(n, label);
  }
  for (const auto& [from, edges] : h.graph.edges) {
    const bool left = part.count(from) != 0;
    FlowGraph& side = left ? g1 : g2;
    side.edges.emplace(from, edges);
    for (const auto& [to, _] : edges) {
      if (!side.has(to)) side.sinks.insert(to);
    }
  }
  // Untargeted sinks stay with the second component so that the union
  // reproduces the original sink set.
  for (auto s : h.graph.sinks) {
    if (!g1.sinks.count(s)) g2.sinks.insert(s);
  }

  InflowedGraph h1, h2;
  h1.inflow = project_inflow(h.inflow, h.graph, g1.node_set(), d);
  h2.inflow = project_inflow(h.inflow, h.graph, g2.node_set(), d);
  for (const auto& [n, v] : h.flow) (part.count(n) ? h1 : h2).flow.emplace(n, v);
  h1.graph = std::move(g1);
  h2.graph = std::move(g2);
  return {std::move(h1), std::move(h2)};
}

}  // namespace flows
