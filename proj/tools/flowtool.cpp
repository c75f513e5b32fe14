// Command-line front end. Reports are JSON on stdout; exit codes are
// 0 pass, 1 violation, 2 malformed input or usage.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "flows/io.hpp"

using namespace flows;

namespace {

constexpr int kPass = 0, kViolation = 1, kMalformed = 2;

struct Malformed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Malformed("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Malformed(path + ": " + e.what());
  }
}

int emit(const json& report, bool ok) {
  std::cout << report.dump(2) << "\n";
  return ok ? kPass : kViolation;
}

// Documents parsed with one id assignment.
std::vector<Document> read_documents(const std::vector<std::string>& paths) {
  std::vector<json> raw;
  std::vector<std::string> names;
  for (const auto& p : paths) {
    raw.push_back(read_json(p));
    const auto n = document_names(raw.back());
    names.insert(names.end(), n.begin(), n.end());
  }
  std::vector<Document> docs;
  for (const auto& j : raw) docs.push_back(parse_document(j, names));
  for (const auto& d : docs) {
    if (d.domain->descriptor() != docs.front().domain->descriptor() ||
        d.labels->descriptor() != docs.front().labels->descriptor()) {
      throw Malformed("files use different domains");
    }
  }
  return docs;
}

json parse_descriptor(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return text;  // bare name such as path_count
  }
}

void expect_domain(const Document& doc, const std::string& domain) {
  if (domain.empty()) return;
  if (domain_from_descriptor(parse_descriptor(domain))->descriptor() != doc.domain->descriptor()) {
    throw Malformed("file domain " + doc.domain->descriptor().dump() + " does not match --domain " + domain);
  }
}

NodeSet read_region(const std::vector<std::string>& region, const Document& doc) {
  NodeSet out;
  for (const auto& name : region) {
    const NodeId n = doc.names.id(name);
    if (!doc.graph.graph.has(n)) throw Malformed("region node \"" + name + "\" is not a graph node");
    out.insert(n);
  }
  return out;
}

json node_names(const NodeSet& s, const NameTable& names) {
  json out = json::array();
  for (auto n : s) out.push_back(names.name(n));
  return out;
}

json encode_inflow(const Inflow& in, const FlowDomain& d, const NameTable& names) {
  json out = json::object();
  for (const auto& [n, v] : in) {
    if (!d.is_zero(v)) out[names.name(n)] = d.encode(v);
  }
  return out;
}

json encode_interface(const FlowInterface& i, const FlowDomain& d, const LabelDomain& a, const NameTable& names) {
  json fm = json::array();
  for (const auto& [key, v] : i.flowmap) {
    fm.push_back({{"source", names.name(key.first)}, {"sink", names.name(key.second)}, {"value", d.encode(v)}});
  }
  return {{"inflow", encode_inflow(i.inflow_rep, d, names)},
          {"sources", node_names(i.sources, names)},
          {"label", a.encode(i.label_join)},
          {"flowmap", fm}};
}

json encode_keys(const KeySet& k) { return keyset_domain()->encode(Value(k)); }

int cmd_flow(const std::string& file, const std::vector<std::string>& cap, const std::string& domain) {
  const Document doc = read_documents({file}).front();
  expect_domain(doc, domain);
  const FlowDomain& d = *doc.domain;
  json out;
  json flows = json::object();
  for (const auto& [n, v] : doc.graph.flow) flows[doc.names.name(n)] = d.encode(v);
  out["flow"] = flows;
  if (!cap.empty()) {
    const NodeId src = doc.names.id(cap[0]), dst = doc.names.id(cap[1]);
    const auto& g = doc.graph.graph;
    if (!g.has(src)) throw Malformed("capacity source \"" + cap[0] + "\" is not a node");
    if (!g.has(dst) && !g.sinks.count(dst)) throw Malformed("capacity target \"" + cap[1] + "\" is not a node or sink");
    out["capacity"] = {{"source", cap[0]}, {"target", cap[1]}, {"value", d.encode(capacity(g, d).at(src, dst))}};
  }
  return emit(out, true);
}

int cmd_check(const std::string& file, std::string kind, const std::vector<std::string>& params,
              const std::string& domain) {
  const Document doc = read_documents({file}).front();
  expect_domain(doc, domain);
  if (kind.empty()) kind = doc.condition.value_or("");
  if (kind.empty()) throw Malformed("no condition given and none in the file");
  const ConditionPtr g = builtin_condition(kind);
  if (g->domain()->descriptor() != doc.domain->descriptor() ||
      g->labels()->descriptor() != doc.labels->descriptor()) {
    throw Malformed("condition " + kind + " needs domain " + g->domain()->descriptor().dump() + " and labels " +
                    g->labels()->descriptor().dump());
  }
  Params p = doc.params;
  for (const auto& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Malformed("--param expects role=node, got " + kv);
    p[kv.substr(0, eq)] = doc.names.id(kv.substr(eq + 1));
  }
  check_params(*g, p);
  const FlowDomain& d = *doc.domain;
  const auto& h = doc.graph;
  const Heap* heap = doc.heap ? &*doc.heap : nullptr;

  bool ok = true;
  json nodes = json::object();
  for (const auto& [n, _] : h.graph.nodes) nodes[doc.names.name(n)] = json::array();
  for (const auto& f : good_denotation_check(h, *g, p, heap).failures) {
    nodes[doc.names.name(f.node)].push_back(f.clause);
    ok = false;
  }
  const auto global = check_global(interface_of(h, d, *doc.labels), g->global(p), d);
  ok = ok && global.empty();
  json out{{"condition", kind}, {"nodes", nodes}, {"global", global}};

  if (heap) {
    // Each node's ghost abstraction must be the one its cell yields.
    json stale = json::array();
    for (const auto& [n, label] : h.graph.nodes) {
      auto cell = heap->find(n);
      if (cell == heap->end()) continue;
      const NodeAbstraction current{label, h.graph.out(n)};
      bool same = false;
      try {
        same = g->extract(n, cell->second, &current) == current;
      } catch (const std::exception&) {
      }
      if (!same) stale.push_back(doc.names.name(n));
    }
    ok = ok && stale.empty();
    out["abstraction"] = stale;
  }

  if (kind.rfind("dictionary", 0) == 0) {
    const auto rep = edgeset_report(h);
    json per = json::object();
    for (const auto& [n, k] : rep.nodes) {
      per[doc.names.name(n)] = {{"inset", encode_keys(k.inset)}, {"keyset", encode_keys(k.keyset)},
                                {"contents", encode_keys(k.contents)}};
    }
    json bad = json::array();
    for (const auto& v : rep.violations) {
      json e{{"condition", v.condition}, {"node", doc.names.name(v.node)}, {"witness", encode_keys(v.witness)}};
      if (v.other) e["other"] = doc.names.name(*v.other);
      if (v.other2) e["other2"] = doc.names.name(*v.other2);
      bad.push_back(e);
    }
    ok = ok && rep.ok();
    out["gs"] = {{"nodes", per}, {"violations", bad}};
  }
  out["ok"] = ok;
  return emit(out, ok);
}

int cmd_compose(const std::string& a, const std::string& b, const std::string& domain) {
  const auto docs = read_documents({a, b});
  expect_domain(docs[0], domain);
  const FlowDomain& d = *docs[0].domain;
  const auto r = fg_compose(docs[0].graph, docs[1].graph, d);
  if (!r) {
    json out{{"defined", false}, {"failure", to_string(r.failure)}};
    if (r.at) out["at"] = docs[0].names.name(*r.at);
    return emit(out, false);
  }
  return emit(to_json(graph_document(*r.value, docs[0].domain, docs[0].labels, docs[0].names)), true);
}

int cmd_split(const std::string& file, const std::vector<std::string>& region, const std::string& domain) {
  const Document doc = read_documents({file}).front();
  expect_domain(doc, domain);
  const auto [part, rest] = fg_decompose(doc.graph, read_region(region, doc), *doc.domain);
  return emit({{"region", to_json(graph_document(part, doc.domain, doc.labels, doc.names))},
               {"context", to_json(graph_document(rest, doc.domain, doc.labels, doc.names))}},
              true);
}

int cmd_extend(const std::string& before_file, const std::string& after_file, const std::vector<std::string>& region,
               const std::string& domain) {
  const auto docs = read_documents({before_file, after_file});
  const Document &before = docs[0], &after = docs[1];
  expect_domain(before, domain);
  const FlowDomain& d = *before.domain;
  const LabelDomain& a = *before.labels;
  const NodeSet r = read_region(region, before);
  read_region(region, after);
  const auto [b_region, b_context] = fg_decompose(before.graph, r, d);
  const auto a_region = fg_decompose(after.graph, r, d).first;
  const auto ib = interface_of(b_region, d, a);
  const auto ia = interface_of(a_region, d, a);
  const bool ext = contextual_extension(ib, ia, d);
  const auto recomposed = fg_compose(a_region, b_context, d);
  json out{{"region", node_names(r, before.names)},
           {"before", encode_interface(ib, d, a, before.names)},
           {"after", encode_interface(ia, d, a, before.names)},
           {"extension", ext},
           {"context_recomposes", static_cast<bool>(recomposed)}};
  if (!recomposed) out["recompose_failure"] = to_string(recomposed.failure);
  return emit(out, ext && recomposed);
}

json encode_schedule(const Schedule& s) {
  json out = json::array();
  for (const auto& st : s) out.push_back({{"tid", st.tid}, {"choice", st.choice}});
  return out;
}

json encode_violation(const Violation& v) {
  return {{"check", v.check}, {"detail", v.detail}, {"schedule", encode_schedule(v.schedule)}, {"trace", v.trace}};
}

json encode_trace(const std::vector<TraceStep>& trace, const std::string& op_prefix = "") {
  json out = json::array();
  for (const auto& t : trace) {
    json syncs = json::array();
    for (const auto& region : t.syncs) syncs.push_back(node_names(region, NameTable{}));
    out.push_back({{"tid", t.tid}, {"step", op_prefix + t.label}, {"pre", t.pre}, {"post", t.post},
                   {"syncs", syncs}, {"lp", t.lp}});
  }
  return out;
}

int cmd_simulate(const std::string& file, std::optional<std::uint64_t> seed, bool exhaustive,
                 const std::string& mutant) {
  json raw = read_json(file);
  if (!mutant.empty()) raw["mutant"] = mutant;
  RunSpec spec = parse_run(raw);
  if (seed) spec.seed = seed;
  if (exhaustive) spec.seed.reset();
  const World w = spec.world();
  const MonitorConfig cfg = spec.config();
  json out{{"run", to_json(spec)}};

  if (!spec.seed) {
    const auto r = explore(w, cfg);
    json counts = json::object();
    for (const auto& [k, n] : r.counts) counts[k] = n;
    out["report"] = {{"configs", r.configs},
                     {"transitions", r.transitions},
                     {"terminals", r.terminals},
                     {"schedules", r.schedules ? json(*r.schedules) : json("unbounded")},
                     {"syncs", r.syncs},
                     {"histories", r.histories},
                     {"oracle_agreements", r.oracle_agreements},
                     {"excluded", r.excluded},
                     {"max_depth", r.max_depth},
                     {"violations", counts}};
    if (!r.violations.empty()) {
      const Violation& v = r.violations.front();
      json cx = encode_violation(v);
      cx["replay"] = encode_trace(run(w, cfg, v.schedule).trace);
      out["counterexample"] = cx;
    }
    const std::string verdict = !r.counts.empty() ? "violation" : r.truncated ? "bound-exhausted" : "pass";
    out["verdict"] = verdict;
    return emit(out, verdict == "pass");
  }

  json runs = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < spec.runs; ++i) {
    const std::uint64_t s = *spec.seed + i;
    const auto r = random_run(w, cfg, s, spec.max_steps);
    json entry{{"seed", s}, {"steps", r.trace.size()}, {"complete", r.complete},
               {"verdict", r.violation ? "violation" : r.complete ? "pass" : "bound-exhausted"}};
    if (r.violation && ok) {
      json cx = encode_violation(*r.violation);
      cx["replay"] = encode_trace(r.trace);
      out["counterexample"] = cx;
      ok = false;
    }
    runs.push_back(entry);
  }
  out["runs"] = runs;
  out["verdict"] = ok ? "pass" : "violation";
  return emit(out, ok);
}

int cmd_lin(const std::string& file) {
  const HistoryFile h = parse_history(read_json(file));
  const bool complete = std::count_if(h.events.begin(), h.events.end(), [](const HistoryEvent& e) { return e.invoke; }) * 2 ==
                        static_cast<std::ptrdiff_t>(h.events.size());
  if (h.events.size() > 16 * 2 && !h.lp_order) throw Malformed("history too long for the brute-force oracle");
  const bool oracle = linearizable(h.events, h.initial);
  json out{{"complete", complete}, {"oracle", oracle}};
  bool ok = oracle;
  if (h.lp_order && complete) {
    const bool lp = lp_linearizable(h.events, *h.lp_order, h.initial);
    out["lp"] = lp;
    out["agree"] = lp == oracle;
    ok = ok && lp == oracle;
  } else {
    out["lp"] = nullptr;
  }
  out["linearizable"] = oracle;
  return emit(out, ok);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flow-graph and flow-interface toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string domain;
  app.add_option("--domain", domain, "Expected flow domain descriptor (name or JSON)");

  std::string file, file2, condition, mutant;
  std::vector<std::string> region, params, cap;
  std::optional<std::uint64_t> seed;
  bool exhaustive = false;

  auto* flow = app.add_subcommand("flow", "Print per-node flows");
  flow->add_option("file", file, "Graph or snapshot file")->required();
  flow->add_option("--capacity", cap, "Print the capacity from SRC to DST")->expected(2);

  auto* check = app.add_subcommand("check", "Check a good condition");
  check->add_option("file", file, "Graph or snapshot file")->required();
  check->add_option("--condition", condition, "Condition kind (default: the file's)");
  check->add_option("--param", params, "Parameter role=node");

  auto* compose = app.add_subcommand("compose", "Compose two inflowed graphs");
  compose->add_option("first", file, "Graph file")->required();
  compose->add_option("second", file2, "Graph file")->required();

  auto* split = app.add_subcommand("split", "Split off a region");
  split->add_option("file", file, "Graph file")->required();
  split->add_option("--region", region, "Region nodes")->required()->delimiter(',');

  auto* extend = app.add_subcommand("extend", "Check contextual extension of a region");
  extend->add_option("before", file, "Graph file before")->required();
  extend->add_option("after", file2, "Graph file after")->required();
  extend->add_option("--region", region, "Region nodes")->required()->delimiter(',');

  auto* simulate = app.add_subcommand("simulate", "Run the monitor on a run file");
  simulate->add_option("file", file, "Run file")->required();
  simulate->add_option("--seed", seed, "Random schedules from this seed");
  simulate->add_flag("--exhaustive", exhaustive, "Explore every interleaving");
  simulate->add_option("--mutant", mutant, "Fault injection: skip_marking (harris) or skip_range_check (dictionaries)");

  auto* lin = app.add_subcommand("lin", "Check linearizability of a history file");
  lin->add_option("file", file, "History file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kMalformed;
  }

  try {
    if (*flow) return cmd_flow(file, cap, domain);
    if (*check) return cmd_check(file, condition, params, domain);
    if (*compose) return cmd_compose(file, file2, domain);
    if (*split) return cmd_split(file, region, domain);
    if (*extend) return cmd_extend(file, file2, region, domain);
    if (*simulate) return cmd_simulate(file, seed, exhaustive, mutant);
    if (*lin) return cmd_lin(file);
  } catch (const std::exception& e) {
    // Malformed files, unknown names, domain mismatches and bad parameters.
    std::cerr << "error: " << e.what() << "\n";
    return kMalformed;
  }
  return kMalformed;
}
