#include "flows/interface.hpp"

namespace flows {

namespace {

NodeSet support(const Inflow& in, const FlowDomain& d) {
  NodeSet out;
  for (const auto& [n, v] : in) {
    if (!d.is_zero(v)) out.insert(n);
  }
  return out;
}

Label join_labels(const FlowGraph& g, const LabelDomain& a) {
  Label acc = a.bottom();
  for (const auto& [_, label] : g.nodes) acc = a.join(acc, label);
  return acc;
}

// Both representatives denote the same class on both witnesses.
bool cross_members(const Inflow& a, const FlowGraph& ga, const Inflow& b, const FlowGraph& gb,
                   const FlowDomain& d) {
  return inflow_equiv(a, b, ga, d) && inflow_equiv(a, b, gb, d);
}

// Inflows near `in` used to compare equivalence classes across graphs: each
// node's entry replaced by, or increased by, every domain sample.
std::vector<Inflow> class_probes(const Inflow& in, const NodeSet& dom, const FlowDomain& d) {
  std::vector<Inflow> out;
  const auto samples = d.samples();
  for (auto n : dom) {
    const Value cur = lookup(in, n, d);
    for (const auto& s : samples) {
      for (const Value& v : {s, d.plus(cur, s)}) {
        Inflow p = in;
        p[n] = v;
        out.push_back(sparse(p, d));
      }
    }
  }
  return out;
}

// Whether [a]_ga and [b]_gb agree on every probe.
bool same_class_on_probes(const Inflow& a, const FlowGraph& ga, const Inflow& b,
                          const FlowGraph& gb, const FlowDomain& d) {
  const Capacity ca = capacity(ga, d), cb = capacity(gb, d);
  const NodeFlow fa = flow(a, ca, d), fb = flow(b, cb, d);
  for (const auto& p : class_probes(a, ga.node_set(), d)) {
    if ((flow(p, ca, d) == fa) != (flow(p, cb, d) == fb)) return false;
  }
  return true;
}

}  // namespace

FlowMap flowmap_of(const FlowGraph& g, const NodeSet& sources, const FlowDomain& d) {
  FlowMap out;
  if (g.sinks.empty() || sources.empty()) return out;
  const Capacity cap = capacity(g, d);
  for (auto n : sources) {
    for (auto s : g.sinks) {
      const Value& v = cap.at(n, s);
      if (!d.is_zero(v)) out.emplace(std::make_pair(n, s), v);
    }
  }
  return out;
}

FlowInterface interface_of(const InflowedGraph& h, const FlowDomain& d, const LabelDomain& a) {
  FlowInterface i;
  i.inflow_rep = canonical_inflow(h.inflow, h.graph, d);
  i.sources = support(i.inflow_rep, d);
  i.label_join = join_labels(h.graph, a);
  i.flowmap = flowmap_of(h.graph, i.sources, d);
  i.witness = h;
  return i;
}

FlowInterface empty_interface(const LabelDomain& a) {
  FlowInterface i;
  i.label_join = a.bottom();
  return i;
}

bool satisfies(const InflowedGraph& h, const FlowInterface& i, const FlowDomain& d,
               const LabelDomain& a) {
  const FlowGraph& w = i.witness.graph;
  if (h.graph.node_set() != w.node_set() || h.graph.sinks != w.sinks) return false;
  if (join_labels(h.graph, a) != i.label_join) return false;
  // h is represented by its canonical inflow, as in interface_of.
  const Inflow rep = canonical_inflow(h.inflow, h.graph, d);
  if (!cross_members(i.inflow_rep, h.graph, rep, w, d)) return false;
  if (!same_class_on_probes(rep, h.graph, i.inflow_rep, w, d)) return false;
  return flowmap_of(h.graph, i.sources, d) == i.flowmap;
}

std::optional<FlowInterface> int_compose(const FlowInterface& i1, const FlowInterface& i2,
                                         const FlowDomain& d, const LabelDomain& a) {
  auto c = fg_compose(i1.witness, i2.witness, d);
  if (!c) return std::nullopt;
  return interface_of(*c.value, d, a);
}

bool contextual_extension(const FlowInterface& i, const FlowInterface& ext, const FlowDomain& d) {
  const NodeSet dom = i.dom(), dom_ext = ext.dom();
  for (auto n : dom) {
    if (!dom_ext.count(n)) return false;
  }
  // Absent entries are zero, so i's representative is already lifted.
  if (!inflow_equiv(i.inflow_rep, ext.inflow_rep, ext.witness.graph, d)) return false;

  NodeSet sinks = i.sinks();
  sinks.insert(ext.sinks().begin(), ext.sinks().end());
  for (auto n : i.sources) {
    for (auto s : sinks) {
      auto key = std::make_pair(n, s);
      auto a = i.flowmap.find(key);
      auto b = ext.flowmap.find(key);
      const Value va = a == i.flowmap.end() ? d.zero() : a->second;
      const Value vb = b == ext.flowmap.end() ? d.zero() : b->second;
      if (va != vb) return false;
    }
  }
  return true;
}

bool interface_equal(const FlowInterface& a, const FlowInterface& b, const FlowDomain& d) {
  if (a.dom() != b.dom() || a.sinks() != b.sinks()) return false;
  if (a.label_join != b.label_join || a.flowmap != b.flowmap) return false;
  return cross_members(a.inflow_rep, a.witness.graph, b.inflow_rep, b.witness.graph, d);
}

}  // namespace flows
