// Regenerates the files in fixtures/ from the built-in worlds.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "flows/io.hpp"

using namespace flows;

namespace {

std::filesystem::path out_dir;

void write(const std::string& file, const json& j) {
  std::ofstream(out_dir / file) << j.dump(2) << "\n";
}

NameTable names(std::initializer_list<std::pair<const char*, std::uint32_t>> binds) {
  NameTable t;
  for (auto [name, id] : binds) t.bind(name, NodeId{id});
  return t;
}

Document path_graph(std::vector<std::pair<std::uint32_t, std::uint32_t>> edges, std::uint32_t nodes,
                    const Inflow& in, NameTable t) {
  const auto d = path_count_domain();
  FlowGraph g;
  for (std::uint32_t i = 0; i < nodes; ++i) g.nodes.emplace(NodeId{i}, Label{FlatLabel::bottom()});
  for (auto [a, b] : edges) g.set_edge(NodeId{a}, NodeId{b}, 1, *d);
  return graph_document(make_inflowed(g, in, *d), d, flat_label_domain({}), std::move(t));
}

Document tree_graph(std::vector<std::pair<std::uint32_t, std::uint32_t>> edges, std::uint32_t nodes,
                    const Inflow& in, NameTable t) {
  Document doc = path_graph(std::move(edges), nodes, in, std::move(t));
  doc.condition = "tree";
  doc.params = {{"root", NodeId{0}}};
  return doc;
}

HeapRecord next_to(NodeId n) { return {{"next", ptr_to(n)}}; }

Document fig4(bool after) {
  const NodeId l{0}, r{1}, n{2};
  const auto g = tree_condition();
  Heap heap{{l, next_to(after ? n : r)}, {r, HeapRecord{{"next", Ptr{}}}}, {n, next_to(r)}};
  auto st = abstract_state(heap, *g, {{l, 1}});
  if (!st) throw std::logic_error("insertion heap does not abstract");
  World w{*st, {{"root", l}}};
  return snapshot_document(w, *g, names({{"l", 0}, {"r", 1}, {"n", 2}}));
}

json run(const std::string& structure, std::vector<std::int64_t> initial,
         std::vector<std::vector<std::pair<OpKind, std::int64_t>>> threads, const std::string& mutant = "") {
  RunSpec r;
  r.structure = structure;
  r.initial = std::move(initial);
  std::int64_t tid = 1;
  for (const auto& ops : threads) {
    ThreadProgram p{tid++, {}};
    for (auto [k, key] : ops) p.ops.push_back({k, key});
    r.threads.push_back(p);
  }
  r.mutant = mutant;
  return to_json(r);
}

HistoryEvent call(std::int64_t t, OpKind k, std::int64_t key) { return {t, true, {k, key}, false}; }
HistoryEvent ret(std::int64_t t, OpKind k, std::int64_t key, bool r) { return {t, false, {k, key}, r}; }

}  // namespace

int main(int argc, char** argv) {
  out_dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(out_dir);

  write("fig2.graph", to_json(tree_graph({{0, 1}, {0, 2}, {1, 3}, {1, 4}, {4, 5}, {2, 6}}, 7, {{NodeId{0}, 1}},
                                         names({{"n0", 0}, {"n1", 1}, {"n2", 2}, {"n3", 3}, {"n4", 4},
                                                {"n5", 5}, {"n6", 6}}))));
  write("diamond.graph", to_json(tree_graph({{0, 1}, {0, 2}, {1, 3}, {2, 3}}, 4, {{NodeId{0}, 1}},
                                            names({{"a", 0}, {"b", 1}, {"c", 2}, {"d", 3}}))));
  write("inf-cycle.graph",
        to_json(path_graph({{0, 1}, {1, 0}}, 2, {{NodeId{0}, 1}}, names({{"n1", 0}, {"n2", 1}}))));
  write("fig4-before.snapshot", to_json(fig4(false)));
  write("fig4-after.snapshot", to_json(fig4(true)));
  write("fig12.snapshot", to_json(snapshot_document(bptree_sample_world(), *dictionary_condition(bptree_layout(2)),
                                                    names({{"root", 0}, {"cl", 1}, {"c", 2}, {"y0", 3},
                                                           {"n", 4}, {"y2", 5}}))));
  write("harris-fig1.snapshot", to_json(snapshot_document(harris_sample_world(), *harris_condition(),
                                                          names({{"mh", 0}, {"n1", 1}, {"n2", 2}, {"n3", 3},
                                                                 {"fh", 4}, {"x", 5}}))));

  using K = OpKind;
  write("harris.run", run("harris", {}, {{{K::Insert, 0}}, {{K::Delete, 0}}}));
  write("harris-skip-marking.run", run("harris", {}, {{{K::Insert, 0}}, {{K::Delete, 0}}}, "skip_marking"));
  write("sorted-list.run", run("sorted_list", {1, 3}, {{{K::Insert, 2}, {K::Delete, 1}}, {{K::Insert, 2}, {K::Member, 2}}}));
  write("bptree.run", run("bptree", {1, 3}, {{{K::Insert, 2}, {K::Delete, 1}}, {{K::Insert, 2}, {K::Member, 2}}}));
  write("sorted-list-skip-range.run", run("sorted_list", {1, 3}, {{{K::Delete, 1}, {K::Delete, 3}}, {{K::Member, 3}, {K::Insert, 3}}},
                                           "skip_range_check"));

  write("double-insert.history",
        to_json(HistoryFile{{}, {call(1, K::Insert, 5), call(2, K::Insert, 5), ret(1, K::Insert, 5, true),
                                 ret(2, K::Insert, 5, true)}, std::nullopt}));
  write("insert-member.history",
        to_json(HistoryFile{{}, {call(1, K::Insert, 5), call(2, K::Member, 5), ret(2, K::Member, 5, false),
                                 ret(1, K::Insert, 5, true)}, std::vector<std::size_t>{1, 0}}));
  std::cout << "fixtures written to " << out_dir << "\n";
}
