// Acceptance run: one PASS/FAIL line per criterion with its wall time.
#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "flows/io.hpp"

using namespace flows;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

struct Shell {
  int code = -1;
  std::string out;
};

Shell sh(const std::string& cmd) {
  Shell r;
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const std::string& name) { return (fs::path(FIXTURE_DIR) / name).string(); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Document load(const std::string& name) { return parse_document(json::parse(slurp(fixture(name)))); }

NodeSet ids(const Document& doc, std::initializer_list<const char*> names) {
  NodeSet out;
  for (const char* n : names) out.insert(doc.names.id(n));
  return out;
}

FlowMap flowmap(const Document& doc, std::initializer_list<std::tuple<const char*, const char*, Value>> entries) {
  FlowMap out;
  for (const auto& [a, b, v] : entries) out[{doc.names.id(a), doc.names.id(b)}] = v;
  return out;
}

Inflow inflow(const Document& doc, std::initializer_list<const char*> names) {
  Inflow out;
  for (const char* n : names) out[doc.names.id(n)] = 1;
  return out;
}

// Runs doctest cases of one suite binary.
void suite(Outcome& o, const std::string& binary, const std::string& cases) {
  const Shell r = sh(std::string(TEST_DIR) + "/" + binary + " --test-case='" + cases + "' --no-intro");
  const auto pos = r.out.find("test cases:");
  std::string summary = pos == std::string::npos ? "no summary" : r.out.substr(pos, r.out.find('\n', pos) - pos);
  summary.erase(std::remove(summary.begin(), summary.end(), ' '), summary.end());
  o.require(r.code == 0, binary + " " + cases);
  o.require(summary.rfind("testcases:0|", 0) != 0, binary + " ran no cases");
  o.note(binary + " " + summary);
}

Outcome fig2() {
  Outcome o;
  const Document doc = load("fig2.graph");
  const auto& d = *doc.domain;
  const auto& h = doc.graph;
  for (const auto& [n, v] : h.flow) o.require(v == Value(1), "flow 1 at " + doc.names.name(n));
  o.require(h.flow.size() == 7, "seven nodes");
  const auto [h1, h2] = fg_decompose(h, ids(doc, {"n1", "n2", "n4"}), d);
  o.require(h1.inflow == inflow(doc, {"n1", "n2"}), "projected inflow of H1");
  o.require(h2.inflow == inflow(doc, {"n0", "n3", "n5", "n6"}), "projected inflow of H2");
  const auto i1 = interface_of(h1, d, *doc.labels);
  o.require(i1.flowmap == flowmap(doc, {{"n1", "n3", 1}, {"n1", "n5", 1}, {"n2", "n6", 1}}), "flow map of I1");
  const auto back = fg_compose(h1, h2, d);
  o.require(back && inflowed_equiv(*back.value, h, d), "compose(decompose) equivalent to the original");
  return o;
}

Outcome fig4() {
  Outcome o;
  const Document before = load("fig4-before.snapshot");
  const Document after = load("fig4-after.snapshot");
  const auto& d = *before.domain;
  auto fm = [&](const Document& doc, std::initializer_list<const char*> region) {
    return interface_of(fg_decompose(doc.graph, ids(doc, region), d).first, d, *doc.labels).flowmap;
  };
  o.require(fm(before, {"l"}) == flowmap(before, {{"l", "r", 1}}), "H_{l}");
  o.require(fm(after, {"l"}) == flowmap(after, {{"l", "n", 1}}), "H'_{l}");
  o.require(fm(before, {"l", "n"}) == flowmap(before, {{"l", "r", 1}}), "H_{l,n}");
  o.require(fm(after, {"l", "n"}) == flowmap(after, {{"l", "r", 1}}), "H'_{l,n}");
  const std::string files = fixture("fig4-before.snapshot") + " " + fixture("fig4-after.snapshot");
  o.require(sh(std::string(FLOWTOOL) + " extend " + files + " --region l,n").code == 0, "extend holds on {l,n}");
  o.require(sh(std::string(FLOWTOOL) + " extend " + files + " --region l").code == 1, "extend fails on {l}");
  return o;
}

Outcome inf_cycle() {
  Outcome o;
  const Document doc = load("inf-cycle.graph");
  const auto& d = *doc.domain;
  const auto [h1, h2] = fg_decompose(doc.graph, ids(doc, {"n1"}), d);
  const auto c = fg_compose(h1, h2, d);
  o.require(c.value.has_value(), "composition defined");
  if (c) {
    o.require(inflow_equiv(c.value->inflow, inflow(doc, {"n1"}), c.value->graph, d), "composite inflow ~ {n1:1}");
    o.require(inflow_equiv(c.value->inflow, inflow(doc, {"n2"}), c.value->graph, d), "composite inflow ~ {n2:1}");
  }
  return o;
}

MonitorConfig harris_config(bool mutant) {
  RunSpec r;
  r.structure = "harris";
  r.threads = {{1, {{OpKind::Insert, 0}}}, {2, {{OpKind::Delete, 0}}}};
  if (mutant) r.mutant = "skip_marking";
  return r.config();
}

Outcome harris() {
  Outcome o;
  const World w = harris_world(3);
  o.require(w.state.graph.graph.has(w.globals.at("fh")) && w.state.graph.graph.has(w.globals.at("ft")),
            "free list {fh, ft}");
  const auto r = explore(w, harris_config(false));
  o.require(r.ok(), "every interleaving passes");
  o.require(r.terminals > 0 && r.syncs > 0, "terminals and syncs reached");
  const auto m = explore(w, harris_config(true));
  o.require(!m.ok() && !m.violations.empty(), "skip-marking mutant fails");
  o.note("configs=" + std::to_string(r.configs) + " transitions=" + std::to_string(r.transitions) +
         " syncs=" + std::to_string(r.syncs) + " schedules=" + (r.schedules ? std::to_string(*r.schedules) : "unbounded"));
  if (!m.violations.empty()) {
    o.note("mutant: " + m.violations.front().check + " (" + m.violations.front().detail + ") after " +
           std::to_string(m.violations.front().schedule.size()) + " steps");
  }
  return o;
}

struct Workload {
  std::vector<std::int64_t> initial;
  std::vector<ThreadProgram> threads;
};

// Hand-picked conflicting workloads followed by seeded random ones.
std::vector<Workload> dictionary_workloads(std::size_t random_count) {
  using K = OpKind;
  auto two = [](std::vector<std::int64_t> init, std::vector<OpSpec> a, std::vector<OpSpec> b) {
    return Workload{std::move(init), {{1, std::move(a)}, {2, std::move(b)}}};
  };
  std::vector<Workload> out{
      two({1, 3}, {{K::Insert, 2}, {K::Delete, 1}}, {{K::Insert, 2}, {K::Member, 2}}),
      two({1, 2, 3}, {{K::Delete, 3}, {K::Insert, 4}}, {{K::Insert, 3}, {K::Member, 4}}),
      two({}, {{K::Insert, 1}, {K::Insert, 4}}, {{K::Delete, 1}, {K::Delete, 4}}),
      two({3}, {{K::Member, 3}, {K::Insert, 2}}, {{K::Delete, 3}, {K::Insert, 1}}),
      two({1, 2, 3, 4}, {{K::Delete, 2}, {K::Delete, 3}}, {{K::Delete, 3}, {K::Member, 2}}),
  };
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> key(1, 4), kind(0, 2), coin(0, 1);
  while (out.size() < random_count + 5) {
    Workload w;
    for (std::int64_t k = 1; k <= 4; ++k) {
      if (coin(rng)) w.initial.push_back(k);
    }
    for (std::int64_t t = 1; t <= 2; ++t) {
      ThreadProgram p{t, {}};
      for (int i = 0; i < 2; ++i) p.ops.push_back({static_cast<K>(kind(rng)), key(rng)});
      w.threads.push_back(p);
    }
    out.push_back(std::move(w));
  }
  return out;
}

Outcome dictionaries() {
  Outcome o;
  const auto workloads = dictionary_workloads(RANDOM_WORKLOADS);
  for (const std::string structure : {"sorted_list", "bptree"}) {
    std::size_t configs = 0, histories = 0, agreements = 0, excluded = 0, failures = 0;
    for (const auto& w : workloads) {
      RunSpec r;
      r.structure = structure;
      r.initial = w.initial;
      r.threads = w.threads;
      const auto rep = explore(r.world(), r.config());
      configs += rep.configs;
      histories += rep.histories;
      agreements += rep.oracle_agreements;
      excluded += rep.excluded;
      if (!rep.ok() || rep.histories == 0 || rep.histories != rep.oracle_agreements) {
        ++failures;
        if (failures == 1) {
          std::string what = structure + " workload " + to_json(r).dump();
          if (!rep.violations.empty()) what += ": " + rep.violations.front().check + " " + rep.violations.front().detail;
          o.require(false, what);
        }
      }
    }
    o.require(failures == 0, structure + " has " + std::to_string(failures) + " failing workloads");
    o.note(structure + ": workloads=" + std::to_string(workloads.size()) + " configs=" + std::to_string(configs) +
           " histories=" + std::to_string(histories) + " oracle_agreements=" + std::to_string(agreements) +
           " excluded_steps=" + std::to_string(excluded));
  }
  return o;
}

Outcome cli() {
  Outcome o;
  const std::string tool = FLOWTOOL;
  for (const char* f : {"fig2.graph", "diamond.graph", "inf-cycle.graph", "fig4-before.snapshot", "fig4-after.snapshot",
                        "fig12.snapshot", "harris-fig1.snapshot"}) {
    const std::string text = slurp(fixture(f));
    const json raw = json::parse(text);
    const json again = to_json(parse_document(raw));
    o.require(again == raw && again.dump(2) + "\n" == text, std::string("canonical round trip of ") + f);
  }
  for (const char* f : {"harris.run", "sorted-list.run", "bptree.run"}) {
    const json raw = json::parse(slurp(fixture(f)));
    o.require(to_json(parse_run(raw)) == raw, std::string("round trip of ") + f);
  }
  const fs::path bad = fs::temp_directory_path() / "acceptance-bad.graph";
  std::ofstream(bad) << "{\"domain\": \"path_count\", \"nodes\": [";
  const std::vector<std::pair<std::string, int>> cases{
      {"flow " + fixture("fig2.graph"), 0},
      {"check " + fixture("fig2.graph"), 0},
      {"check " + fixture("fig12.snapshot"), 0},
      {"check " + fixture("harris-fig1.snapshot"), 0},
      {"check " + fixture("diamond.graph"), 1},
      {"check " + fixture("fig2.graph") + " --condition dictionary:bptree", 2},
      {"flow " + bad.string(), 2},
      {"flow " + fixture("fig2.graph") + " --domain keyset", 2},
      {"lin " + fixture("double-insert.history"), 1},
      {"lin " + fixture("insert-member.history"), 0},
      {"simulate " + fixture("harris-skip-marking.run"), 1},
      {"nosuch", 2},
  };
  for (const auto& [args, code] : cases) {
    const int got = sh(tool + " " + args).code;
    o.require(got == code, "'" + args.substr(0, args.find(' ')) + "' exit " + std::to_string(got) + " != " +
                               std::to_string(code) + " (" + args + ")");
  }
  o.note(std::to_string(cases.size()) + " exit-code cases");
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, 1, fig2},
      {2, 1, fig4},
      {3, 1, inf_cycle},
      {4, 60,
       [] {
         Outcome o;
         suite(o, "test_graph",
               "capacity equals brute-force path counts,keyset flow equals per-key reachability,"
               "projection lemma and Kleene identity");
         suite(o, "test_algebra", "star agrees with Kleene iteration");
         return o;
       }},
      {5, 60,
       [] {
         Outcome o;
         suite(o, "test_algebra", "built-in domains satisfy every law*,pairwise products*");
         suite(o, "test_graph", "composition forms a separation algebra*");
         suite(o, "test_heap", "state composition is a separation algebra*");
         return o;
       }},
      {6, 120,
       [] {
         Outcome o;
         suite(o, "test_interface",
               "witness independence of interface composition on path counts,good congruence,"
               "replacement theorem and the Repl rule,Decomp*,Uniq*,AddIn and AddF,ReplIn and ReplF,Step*");
         return o;
       }},
      {7, 300, harris},
      {8, 600, dictionaries},
      {9, 5, cli},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(s < c.limit_s, "time limit " + std::to_string(static_cast<int>(c.limit_s)) + " s");
    all = all && o.ok;
    std::printf("criterion %d: %s (%.2f s) %s\n", c.id, o.ok ? "PASS" : "FAIL", s, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
