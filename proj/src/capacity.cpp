#include <omp.h>

#include <algorithm>

#include "flows/graph.hpp"

namespace flows {

namespace {

constexpr std::size_t kParallelThreshold = 48;

// Rows of the pivot step reuse the old pivot row and column, so every row
// update is independent of the others.
void pivot_serial(std::vector<Value>& m, std::size_t n, std::size_t k, const FlowDomain& d) {
  const Value s = d.star(m[k * n + k]);
  std::vector<Value> row(n), col(n);
  for (std::size_t j = 0; j < n; ++j) row[j] = d.times(s, m[k * n + j]);
  for (std::size_t i = 0; i < n; ++i) col[i] = m[i * n + k];
  for (std::size_t i = 0; i < n; ++i) {
    if (d.is_zero(col[i])) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (d.is_zero(row[j])) continue;
      m[i * n + j] = d.plus(m[i * n + j], d.times(col[i], row[j]));
    }
  }
}

void pivot_parallel(std::vector<Value>& m, std::size_t n, std::size_t k, const FlowDomain& d) {
  const Value s = d.star(m[k * n + k]);
  std::vector<Value> row(n), col(n);
  for (std::size_t j = 0; j < n; ++j) row[j] = d.times(s, m[k * n + j]);
  for (std::size_t i = 0; i < n; ++i) col[i] = m[i * n + k];
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    if (d.is_zero(col[i])) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (d.is_zero(row[j])) continue;
      m[i * n + j] = d.plus(m[i * n + j], d.times(col[i], row[j]));
    }
  }
}

template <typename Closure>
Capacity build(const FlowGraph& g, const FlowDomain& d, Closure close) {
  std::vector<NodeId> nodes;
  for (const auto& [n, _] : g.nodes) nodes.push_back(n);
  std::vector<NodeId> sinks(g.sinks.begin(), g.sinks.end());
  const std::size_t n = nodes.size();
  std::map<NodeId, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[nodes[i]] = i;

  std::vector<Value> m(n * n, d.zero());
  for (const auto& [from, out] : g.edges) {
    for (const auto& [to, label] : out) {
      auto it = pos.find(to);
      if (it != pos.end()) m[pos.at(from) * n + it->second] = label;
    }
  }
  close(m, n, d);
  // Reflexive-transitive closure: add the empty path.
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] = d.plus(d.one(), m[i * n + i]);

  const std::size_t cols = n + sinks.size();
  std::vector<Value> cells(n * cols, d.zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) cells[i * cols + j] = m[i * n + j];
  }
  for (std::size_t s = 0; s < sinks.size(); ++s) {
    for (std::size_t k = 0; k < n; ++k) {
      const Value e = g.edge(nodes[k], sinks[s], d);
      if (d.is_zero(e)) continue;
      for (std::size_t i = 0; i < n; ++i) {
        Value& c = cells[i * cols + n + s];
        c = d.plus(c, d.times(m[i * n + k], e));
      }
    }
  }
  return Capacity(std::move(nodes), std::move(sinks), std::move(cells), d.zero());
}

}  // namespace

void closure_serial(std::vector<Value>& m, std::size_t n, const FlowDomain& d) {
  for (std::size_t k = 0; k < n; ++k) pivot_serial(m, n, k, d);
}

void closure_parallel(std::vector<Value>& m, std::size_t n, const FlowDomain& d) {
  for (std::size_t k = 0; k < n; ++k) {
    if (n >= kParallelThreshold) {
      pivot_parallel(m, n, k, d);
    } else {
      pivot_serial(m, n, k, d);
    }
  }
}

Capacity capacity(const FlowGraph& g, const FlowDomain& d) { return build(g, d, closure_parallel); }

Capacity capacity_serial(const FlowGraph& g, const FlowDomain& d) {
  return build(g, d, closure_serial);
}

Capacity::Capacity(std::vector<NodeId> nodes, std::vector<NodeId> sinks, std::vector<Value> cells,
                   Value zero)
    : nodes_(std::move(nodes)),
      sinks_(std::move(sinks)),
      cells_(std::move(cells)),
      zero_(std::move(zero)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    row_[nodes_[i]] = i;
    col_[nodes_[i]] = i;
  }
  for (std::size_t s = 0; s < sinks_.size(); ++s) col_[sinks_[s]] = nodes_.size() + s;
}

const Value& Capacity::at(NodeId from, NodeId to) const {
  auto r = row_.find(from);
  auto c = col_.find(to);
  if (r == row_.end() || c == col_.end()) return zero_;
  return cells_[r->second * (nodes_.size() + sinks_.size()) + c->second];
}

bool Capacity::operator==(const Capacity& other) const {
  return nodes_ == other.nodes_ && sinks_ == other.sinks_ && cells_ == other.cells_;
}

}  // namespace flows
