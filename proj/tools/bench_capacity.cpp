// Times the serial and OpenMP capacity closures on random path-count graphs
// and checks that they agree.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "flows/graph.hpp"

using namespace flows;

namespace {

FlowGraph random_graph(std::uint32_t n, double density, std::mt19937_64& rng) {
  const auto d = path_count_domain();
  std::bernoulli_distribution edge(density);
  std::uniform_int_distribution<int> weight(1, 3);
  FlowGraph g;
  for (std::uint32_t i = 0; i < n; ++i) g.nodes.emplace(NodeId{i}, Label{});
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = 0; b < n; ++b) {
      // Forward edges only, so most capacities stay finite.
      if (a < b && edge(rng)) g.set_edge(NodeId{a}, NodeId{b}, weight(rng), *d);
    }
  }
  return g;
}

template <typename F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  const auto d = path_count_domain();
  std::mt19937_64 rng(1);
  std::printf("threads=%d\n%6s %10s %10s %8s %6s\n", omp_get_max_threads(), "nodes", "serial_s", "openmp_s",
              "speedup", "agree");
  bool all = true;
  for (std::uint32_t n : {16u, 32u, 64u, 128u, 192u}) {
    const FlowGraph g = random_graph(n, 4.0 / n, rng);
    Capacity serial = capacity_serial(g, *d), parallel = capacity(g, *d);
    const double ts = seconds([&] { serial = capacity_serial(g, *d); });
    const double tp = seconds([&] { parallel = capacity(g, *d); });
    const bool agree = serial == parallel;
    all = all && agree;
    std::printf("%6u %10.4f %10.4f %8.2f %6s\n", n, ts, tp, ts / tp, agree ? "yes" : "NO");
  }
  return all ? 0 : 1;
}
