#pragma once

#include <random>

#include "flows/good.hpp"
#include "flows/interface.hpp"

namespace gen {

using namespace flows;

inline NodeId id(std::uint32_t v) { return NodeId{v}; }

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : eng() % n; }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(eng) < p; }
};

// Random label drawn from a domain's samples, biased towards zero.
inline Value random_value(Rng& r, const FlowDomain& d, double zero_bias = 0.3) {
  if (r.chance(zero_bias)) return d.zero();
  auto s = d.samples();
  return s[r.below(s.size())];
}

inline Value random_keys(Rng& r) {
  std::vector<KeySet::Interval> ivs;
  const int n = 1 + static_cast<int>(r.below(2));
  for (int i = 0; i < n; ++i) {
    std::int64_t lo = static_cast<std::int64_t>(r.below(12));
    ExtInt l = r.chance(0.15) ? ExtInt::neg_inf() : ExtInt(lo);
    ExtInt h = r.chance(0.15) ? ExtInt::pos_inf() : ExtInt(lo + 1 + static_cast<std::int64_t>(r.below(6)));
    ivs.emplace_back(l, h);
  }
  return KeySet::from_intervals(ivs);
}

struct GraphShape {
  std::uint32_t nodes = 6;
  std::uint32_t sinks = 0;
  double edge_p = 0.35;
  bool dag = false;  // edges only from lower to higher ids
};

// Random graph over nodes 0..n-1 and sinks n..n+s-1 with labels from `label`.
template <typename LabelFn>
FlowGraph random_graph(Rng& r, const GraphShape& shape, const FlowDomain& d, LabelFn label,
                       const LabelDomain* labels = nullptr) {
  FlowGraph g;
  for (std::uint32_t i = 0; i < shape.nodes; ++i) {
    Label a;
    if (labels) {
      auto s = labels->samples();
      a = s[r.below(s.size())];
    }
    g.nodes.emplace(id(i), a);
  }
  for (std::uint32_t s = 0; s < shape.sinks; ++s) g.sinks.insert(id(shape.nodes + s));
  for (std::uint32_t i = 0; i < shape.nodes; ++i) {
    for (std::uint32_t j = 0; j < shape.nodes + shape.sinks; ++j) {
      if (shape.dag && j < shape.nodes && j <= i) continue;
      if (!r.chance(shape.edge_p)) continue;
      g.set_edge(id(i), id(j), label(r), d);
    }
  }
  return g;
}

template <typename ValueFn>
Inflow random_inflow(Rng& r, const FlowGraph& g, const FlowDomain& d, ValueFn value, double p = 0.4) {
  Inflow in;
  for (const auto& [n, _] : g.nodes) {
    if (r.chance(p)) in[n] = value(r);
  }
  return sparse(in, d);
}

inline NodeSet random_subset(Rng& r, const NodeSet& nodes, double p = 0.5) {
  NodeSet out;
  for (auto n : nodes) {
    if (r.chance(p)) out.insert(n);
  }
  return out;
}

// Seven-node tree: edges n0->n1, n0->n2, n1->n3, n1->n4, n4->n5, n2->n6.
inline FlowGraph fig2_graph() {
  FlowGraph g;
  auto d = path_count_domain();
  for (std::uint32_t i = 0; i <= 6; ++i) g.nodes.emplace(id(i), Label{});
  for (auto [a, b] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 3}, {1, 4}, {4, 5}, {2, 6}}) {
    g.set_edge(id(static_cast<std::uint32_t>(a)), id(static_cast<std::uint32_t>(b)), 1, *d);
  }
  return g;
}


inline LabelDomainPtr test_labels() { return flat_label_domain({"a", "b"}); }

inline std::vector<NodeId> targets_of(const FlowGraph& g) {
  std::vector<NodeId> out;
  for (const auto& [n, _] : g.nodes) out.push_back(n);
  out.insert(out.end(), g.sinks.begin(), g.sinks.end());
  return out;
}

// One random local change that keeps nodes and sinks: add, drop or retarget
// an edge, swap two labels, or enlarge the inflow by part of the flow (which
// keeps the class for idempotent addition).
template <typename ValueFn>
InflowedGraph mutate(Rng& r, const InflowedGraph& h, const FlowDomain& d, ValueFn label) {
  FlowGraph g = h.graph;
  Inflow in = h.inflow;
  std::vector<NodeId> nodes;
  for (const auto& [n, _] : g.nodes) nodes.push_back(n);
  if (nodes.empty()) return h;
  const auto targets = targets_of(g);
  const NodeId a = nodes[r.below(nodes.size())];
  switch (r.below(5)) {
    case 0:
      g.set_edge(a, targets[r.below(targets.size())], label(r), d);
      break;
    case 1: {
      const auto& out = g.out(a);
      if (!out.empty()) {
        auto it = out.begin();
        std::advance(it, static_cast<long>(r.below(out.size())));
        g.set_edge(a, it->first, d.zero(), d);
      }
      break;
    }
    case 2: {
      const auto& out = g.out(a);
      if (!out.empty()) {
        auto it = out.begin();
        std::advance(it, static_cast<long>(r.below(out.size())));
        const NodeId old = it->first;
        const Value v = it->second;
        g.set_edge(a, old, d.zero(), d);
        g.set_edge(a, targets[r.below(targets.size())], v, d);
      }
      break;
    }
    case 3: {
      const NodeId b = nodes[r.below(nodes.size())];
      std::swap(g.nodes.at(a), g.nodes.at(b));
      break;
    }
    default:
      if (d.plus(h.flow.at(a), h.flow.at(a)) == h.flow.at(a)) {
        in[a] = d.plus(lookup(in, a, d), h.flow.at(a));
      }
      break;
  }
  return make_inflowed(std::move(g), in, d);
}

// Random tree over nodes 0..n-1 rooted at 0, path-count labels 1.
inline InflowedGraph random_tree(Rng& r, std::uint32_t n) {
  auto d = path_count_domain();
  FlowGraph g;
  for (std::uint32_t i = 0; i < n; ++i) g.nodes.emplace(id(i), Label{});
  for (std::uint32_t i = 1; i < n; ++i) g.set_edge(id(static_cast<std::uint32_t>(r.below(i))), id(i), 1, *d);
  return make_inflowed(std::move(g), {{id(0), 1}}, *d);
}

// Random search structure with keyset flows: each node splits its inset into
// disjoint pieces, hands some to children and keeps one as its keyset;
// contents are a random subset of the kept piece. Root 0 gets every key.
inline InflowedGraph random_search_tree(Rng& r, std::uint32_t n) {
  auto d = keyset_domain();
  FlowGraph g;
  struct Item {
    NodeId node;
    ExtInt lo, hi;
  };
  std::vector<Item> queue{{id(0), ExtInt::neg_inf(), ExtInt::pos_inf()}};
  std::uint32_t next = 1;
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const Item it = queue[q];
    std::vector<ExtInt> cuts{it.lo};
    for (std::int64_t k = 0; k <= 40; ++k) {
      if (ExtInt(k) > it.lo && ExtInt(k) < it.hi && r.chance(0.12)) cuts.push_back(ExtInt(k));
    }
    cuts.push_back(it.hi);
    const std::size_t pieces = cuts.size() - 1;
    const std::size_t kept = r.below(pieces);
    KeySet contents;
    for (std::size_t p = 0; p < pieces; ++p) {
      if (p == kept) {
        for (std::int64_t k = 0; k <= 40; ++k) {
          if (ExtInt(k) >= cuts[p] && ExtInt(k) < cuts[p + 1] && r.chance(0.3)) {
            contents = contents.unite(KeySet::single(k));
          }
        }
        continue;
      }
      if (next >= n) continue;
      const NodeId child = id(next++);
      g.set_edge(it.node, child, KeySet::range(cuts[p], cuts[p + 1]), *d);
      queue.push_back({child, cuts[p], cuts[p + 1]});
    }
    g.nodes.emplace(it.node, Label(contents, LockSet::unlocked()));
  }
  return make_inflowed(std::move(g), {{id(0), KeySet::all()}}, *d);
}

// Contextual extension of h by fresh nodes numbered from `fresh`: either an
// edge is subdivided through a new node, or a new node with zero inflow and
// random out-edges is added.
template <typename ValueFn>
InflowedGraph extend(Rng& r, const InflowedGraph& h, const FlowDomain& d, ValueFn label,
                     std::uint32_t fresh, const LabelDomain& a) {
  FlowGraph g = h.graph;
  const auto targets = targets_of(g);
  const NodeId n = id(fresh);
  const auto samples = a.samples();
  g.nodes.emplace(n, samples[r.below(samples.size())]);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& [from, out] : g.edges) {
    for (const auto& [to, _] : out) edges.emplace_back(from, to);
  }
  if (!edges.empty() && r.chance(0.6)) {
    auto [u, v] = edges[r.below(edges.size())];
    const Value lab = g.edge(u, v, d);
    g.set_edge(u, v, d.zero(), d);
    g.set_edge(u, n, lab, d);
    g.set_edge(n, v, d.one(), d);
  } else {
    for (auto t : targets) {
      if (r.chance(0.3)) g.set_edge(n, t, label(r), d);
    }
  }
  return make_inflowed(std::move(g), h.inflow, d);
}

}  // namespace gen
