#include "flows/heap.hpp"

namespace flows {

std::optional<std::string> State::check_well_formed() const {
  for (const auto& [n, _] : graph.graph.nodes) {
    if (!heap.count(n)) return "graph node " + std::to_string(n.v) + " has no heap cell";
    auto it = nodemap.find(n);
    if (it == nodemap.end() || it->second != n) {
      return "graph node " + std::to_string(n.v) + " is not marked to itself";
    }
  }
  for (const auto& [cell, node] : nodemap) {
    if (!heap.count(cell)) return "marked cell " + std::to_string(cell.v) + " is not allocated";
    if (!graph.graph.has(node)) return "cell " + std::to_string(cell.v) + " marked to a non-node";
  }
  return std::nullopt;
}

bool operator==(const State& a, const State& b) {
  return a.heap == b.heap && a.nodemap == b.nodemap && a.graph.graph == b.graph.graph &&
         a.graph.inflow == b.graph.inflow && a.graph.flow == b.graph.flow;
}

State empty_state() { return State{}; }

StateComposeResult state_compose(const State& a, const State& b, const FlowDomain& d) {
  StateComposeResult res;
  for (const auto& [cell, _] : a.heap) {
    if (b.heap.count(cell)) {
      res.failure = StateComposeFailure::HeapOverlap;
      return res;
    }
  }
  auto g = fg_compose(a.graph, b.graph, d);
  if (!g) {
    res.failure = StateComposeFailure::Graph;
    res.graph_failure = g.failure;
    return res;
  }
  State s{a.heap, std::move(*g.value), a.nodemap};
  s.heap.insert(b.heap.begin(), b.heap.end());
  s.nodemap.insert(b.nodemap.begin(), b.nodemap.end());
  res.value = std::move(s);
  return res;
}

std::optional<std::pair<State, State>> state_split(const State& s, const NodeSet& cells,
                                                   const FlowDomain& d) {
  State in, out;
  for (const auto& [cell, rec] : s.heap) (cells.count(cell) ? in : out).heap.emplace(cell, rec);
  for (const auto& [cell, node] : s.nodemap) {
    if (cells.count(cell) != cells.count(node)) return std::nullopt;
    (cells.count(cell) ? in : out).nodemap.emplace(cell, node);
  }
  NodeSet nodes;
  for (const auto& [n, _] : s.graph.graph.nodes) {
    if (cells.count(n)) nodes.insert(n);
  }
  auto [g1, g2] = fg_decompose(s.graph, nodes, d);
  in.graph = std::move(g1);
  out.graph = std::move(g2);
  return std::make_pair(std::move(in), std::move(out));
}

bool state_equiv(const State& a, const State& b, const FlowDomain& d) {
  return a.heap == b.heap && a.nodemap == b.nodemap && inflowed_equiv(a.graph, b.graph, d);
}

AbstractResult abstract_region(const State& s, const NodeSet& region, const GoodCondition& g,
                               const Inflow& in) {
  AbstractResult res;
  const auto& d = *g.domain();
  FlowGraph out;
  for (auto n : region) {
    auto cell = s.heap.find(n);
    if (cell == s.heap.end()) {
      res.failed = n;
      res.reason = "no heap cell";
      return res;
    }
    std::optional<NodeAbstraction> previous;
    if (s.graph.graph.has(n)) previous = NodeAbstraction{s.graph.graph.nodes.at(n), s.graph.graph.out(n)};
    try {
      NodeAbstraction a = g.extract(n, cell->second, previous ? &*previous : nullptr);
      out.nodes.emplace(n, std::move(a.label));
      for (const auto& [to, label] : a.edges) {
        out.set_edge(n, to, label, d);
        if (!region.count(to) && !d.is_zero(label)) out.sinks.insert(to);
      }
    } catch (const std::exception& e) {
      res.failed = n;
      res.reason = e.what();
      return res;
    }
  }
  Inflow restricted;
  for (const auto& [n, v] : in) {
    if (region.count(n)) restricted.emplace(n, v);
  }
  res.value = make_inflowed(std::move(out), restricted, d);
  return res;
}

std::optional<State> abstract_state(const Heap& heap, const GoodCondition& g, const Inflow& in) {
  State s;
  s.heap = heap;
  NodeSet all;
  for (const auto& [n, _] : heap) {
    all.insert(n);
    s.nodemap.emplace(n, n);
  }
  auto h = abstract_region(s, all, g, in);
  if (!h) return std::nullopt;
  s.graph = std::move(*h.value);
  return s;
}

const char* to_string(SyncAbort a) {
  switch (a) {
    case SyncAbort::None: return "none";
    case SyncAbort::NotInGraph: return "region-not-in-graph";
    case SyncAbort::Extension: return "not-contextually-extended";
    case SyncAbort::Abstraction: return "abstraction-failed";
    case SyncAbort::Denotation: return "denotation-mismatch";
    case SyncAbort::Good: return "good-condition-violated";
    case SyncAbort::Compose: return "composition-failed";
  }
  return "?";
}

namespace {

bool region_in_graph(const State& s, const NodeSet& region) {
  for (auto n : region) {
    if (!s.graph.graph.has(n)) return false;
  }
  return true;
}

}  // namespace

SyncResult ghost_sync(const State& s, const NodeSet& region, const FlowInterface& next,
                      const GoodCondition& g, const Params& p) {
  SyncResult res;
  const auto& d = *g.domain();
  const auto& a = *g.labels();
  auto fail = [&](SyncAbort kind, std::string detail) {
    res.abort = kind;
    res.detail = std::move(detail);
    return res;
  };
  if (!region_in_graph(s, region)) return fail(SyncAbort::NotInGraph, "");
  auto [old, context] = fg_decompose(s.graph, region, d);
  if (!contextual_extension(interface_of(old, d, a), next, d)) return fail(SyncAbort::Extension, "");
  auto h = abstract_region(s, region, g, next.inflow_rep);
  if (!h) return fail(SyncAbort::Abstraction, "node " + std::to_string(h.failed->v) + ": " + h.reason);
  if (!satisfies(*h.value, next, d, a)) return fail(SyncAbort::Denotation, "");
  const auto good = good_denotation_check(*h.value, g, p, &s.heap);
  if (!good.ok()) {
    const auto& f = good.failures.front();
    return fail(SyncAbort::Good, "node " + std::to_string(f.node.v) + ": " + f.clause);
  }
  auto c = fg_compose(*h.value, context, d);
  if (!c) return fail(SyncAbort::Compose, to_string(c.failure));
  res.value = State{s.heap, std::move(*c.value), s.nodemap};
  return res;
}

std::optional<FlowInterface> wishful_interface(const State& s, const NodeSet& region,
                                               const GoodCondition& g) {
  const auto& d = *g.domain();
  if (!region_in_graph(s, region)) return std::nullopt;
  auto old = fg_decompose(s.graph, region, d).first;
  auto h = abstract_region(s, region, g, old.inflow);
  if (!h) return std::nullopt;
  return interface_of(*h.value, d, *g.labels());
}

SyncResult sync_region(const State& s, const NodeSet& region, const GoodCondition& g,
                       const Params& p) {
  if (!region_in_graph(s, region)) {
    SyncResult res;
    res.abort = SyncAbort::NotInGraph;
    return res;
  }
  auto next = wishful_interface(s, region, g);
  if (!next) {
    auto h = abstract_region(s, region, g, {});
    SyncResult res;
    res.abort = SyncAbort::Abstraction;
    if (h.failed) res.detail = "node " + std::to_string(h.failed->v) + ": " + h.reason;
    return res;
  }
  return ghost_sync(s, region, *next, g, p);
}

GhostResult ghost_mark(const State& s, NodeId x, NodeId y, const FlowDomain& d,
                       const LabelDomain& a) {
  GhostResult res;
  if (!s.heap.count(x)) {
    res.abort = "cell not allocated";
    return res;
  }
  if (s.nodemap.count(x)) {
    res.abort = "cell already marked";
    return res;
  }
  State out = s;
  if (x == y) {
    FlowGraph g;
    g.nodes.emplace(x, a.bottom());
    auto c = fg_compose(s.graph, make_inflowed(std::move(g), {}, d), d);
    if (!c) {
      res.abort = std::string("fresh node does not compose: ") + to_string(c.failure);
      return res;
    }
    out.graph = std::move(*c.value);
  } else if (!s.graph.graph.has(y)) {
    res.abort = "target is not a graph node";
    return res;
  }
  out.nodemap.emplace(x, y);
  res.value = std::move(out);
  return res;
}

GhostResult ghost_unmark(const State& s, NodeId x, const FlowDomain& d) {
  GhostResult res;
  auto it = s.nodemap.find(x);
  if (it == s.nodemap.end()) {
    res.abort = "cell not marked";
    return res;
  }
  State out = s;
  out.nodemap.erase(x);
  if (it->second == x) {
    for (const auto& [cell, node] : out.nodemap) {
      if (node == x) {
        res.abort = "node still marks other cells";
        return res;
      }
    }
    auto [mine, rest] = fg_decompose(s.graph, {x}, d);
    if (!d.is_zero(lookup(mine.inflow, x, d))) {
      res.abort = "node has nonzero inflow";
      return res;
    }
    out.graph = std::move(rest);
  }
  res.value = std::move(out);
  return res;
}

bool eval_gr(const State& s, const FlowInterface& i, const GoodCondition& g, const Params& p) {
  if (s.nodemap.size() != s.heap.size()) return false;
  for (const auto& [cell, _] : s.heap) {
    if (!s.nodemap.count(cell)) return false;
  }
  if (!satisfies(s.graph, i, *g.domain(), *g.labels())) return false;
  if (!good_denotation_check(s.graph, g, p, &s.heap).ok()) return false;
  for (const auto& [n, label] : s.graph.graph.nodes) {
    const NodeAbstraction current{label, s.graph.graph.out(n)};
    try {
      if (!(g.extract(n, s.heap.at(n), &current) == current)) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

bool eval_dirty(const State& s, const FlowInterface& i, const HeapPredicate& pred,
                const FlowDomain& d, const LabelDomain& a) {
  return satisfies(s.graph, i, d, a) && pred(s.heap);
}

}  // namespace flows
