#include "flows/io.hpp"

#include <algorithm>
#include <charconv>
#include <set>

namespace flows {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw FormatError(where + ": " + what);
}

const json& member(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, "missing \"" + key + "\"");
  return *it;
}

std::string as_string(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string, got " + j.dump());
  return j.get<std::string>();
}

std::int64_t as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer, got " + j.dump());
  return j.get<std::int64_t>();
}

std::optional<std::uint32_t> decimal(const std::string& s) {
  std::uint32_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty() || (s.size() > 1 && s[0] == '0')) {
    return std::nullopt;
  }
  if (NodeId{v} == kNullAddr) return std::nullopt;
  return v;
}

json encode_ext(ExtInt x) {
  if (x.is_pos_inf()) return "inf";
  if (x.is_neg_inf()) return "-inf";
  return x.raw;
}

ExtInt decode_ext(const json& j, const std::string& where) {
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v != ExtInt::kNegInf && v != ExtInt::kPosInf) return ExtInt(v);
  } else if (j == "inf") {
    return ExtInt::pos_inf();
  } else if (j == "-inf") {
    return ExtInt::neg_inf();
  }
  fail(where, "expected an integer, \"inf\" or \"-inf\", got " + j.dump());
}

std::vector<std::string> collect_names(const json& j) {
  std::set<std::string> out;
  auto add = [&](const json& n) {
    if (n.is_string()) out.insert(n.get<std::string>());
  };
  if (auto it = j.find("nodes"); it != j.end() && it->is_array()) {
    for (const auto& n : *it) {
      if (!n.is_object()) continue;
      if (auto id = n.find("id"); id != n.end()) add(*id);
      if (auto e = n.find("edges"); e != n.end() && e->is_object()) {
        for (const auto& [to, _] : e->items()) out.insert(to);
      }
    }
  }
  if (auto it = j.find("sinks"); it != j.end() && it->is_array()) {
    for (const auto& s : *it) add(s);
  }
  if (auto it = j.find("heap"); it != j.end() && it->is_object()) {
    for (const auto& [cell, rec] : it->items()) {
      out.insert(cell);
      if (!rec.is_object()) continue;
      for (const auto& [_, v] : rec.items()) {
        if (v.is_object() && v.contains("ptr")) add(v["ptr"]);
      }
    }
  }
  if (auto it = j.find("nodemap"); it != j.end() && it->is_object()) {
    for (const auto& [cell, node] : it->items()) {
      out.insert(cell);
      add(node);
    }
  }
  return {out.begin(), out.end()};
}

NodeSet read_ids(const json& j, const NameTable& names, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of node names");
  NodeSet out;
  for (const auto& n : j) out.insert(names.id(as_string(n, where)));
  return out;
}

}  // namespace

NameTable NameTable::from_names(const std::vector<std::string>& names) {
  NameTable t;
  std::uint32_t next = 0;
  std::vector<std::string> symbolic;
  for (const auto& n : names) {
    if (auto v = decimal(n)) {
      t.bind(n, NodeId{*v});
      next = std::max(next, *v + 1);
    } else {
      symbolic.push_back(n);
    }
  }
  std::sort(symbolic.begin(), symbolic.end());
  for (const auto& n : symbolic) {
    if (!t.has(n)) t.bind(n, NodeId{next++});
  }
  return t;
}

NodeId NameTable::id(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) throw FormatError("unknown node \"" + name + "\"");
  return it->second;
}

std::string NameTable::name(NodeId n) const {
  auto it = names_.find(n);
  return it == names_.end() ? std::to_string(n.v) : it->second;
}

void NameTable::bind(const std::string& name, NodeId n) {
  ids_[name] = n;
  names_[n] = name;
}

State Document::state() const {
  if (!heap) throw FormatError("not a snapshot");
  return State{*heap, graph, nodemap};
}

json encode_field(const FieldValue& v, const LabelDomain& a, const NameTable& names) {
  if (is_null(v)) return nullptr;
  if (const Ptr* p = std::get_if<Ptr>(&v)) {
    json out{{"ptr", p->is_null() ? json(nullptr) : json(names.name(p->addr))}};
    if (p->mark) out["mark"] = true;
    return out;
  }
  if (const ExtInt* x = std::get_if<ExtInt>(&v)) return encode_ext(*x);
  return json{{"label", a.encode(std::get<Label>(v))}};
}

FieldValue decode_field(const json& j, const LabelDomain& a, const NameTable& names) {
  if (j.is_null()) return null_field();
  if (j.is_object() && j.contains("ptr")) {
    Ptr p;
    if (!j["ptr"].is_null()) p.addr = names.id(as_string(j["ptr"], "ptr"));
    if (auto m = j.find("mark"); m != j.end()) {
      if (!m->is_boolean()) fail("ptr", "mark must be a boolean");
      p.mark = m->get<bool>();
    }
    return p;
  }
  if (j.is_object() && j.contains("label")) return a.decode(j["label"]);
  return decode_ext(j, "field");
}

std::vector<std::string> document_names(const json& j) {
  if (!j.is_object()) fail("document", "expected an object");
  return collect_names(j);
}

Document parse_document(const json& j, const std::vector<std::string>& shared_names) {
  if (!j.is_object()) fail("document", "expected an object");
  Document doc;
  doc.domain = domain_from_descriptor(member(j, "domain", "document"));
  doc.labels = label_domain_from_descriptor(member(j, "labels", "document"));
  auto all = collect_names(j);
  all.insert(all.end(), shared_names.begin(), shared_names.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  doc.names = NameTable::from_names(all);
  const auto& names = doc.names;
  const FlowDomain& d = *doc.domain;

  FlowGraph g;
  const json& nodes = member(j, "nodes", "document");
  if (!nodes.is_array()) fail("nodes", "expected an array");
  for (const auto& n : nodes) {
    const std::string name = as_string(member(n, "id", "nodes[]"), "nodes[].id");
    const NodeId id = names.id(name);
    if (g.has(id)) fail("nodes." + name, "duplicate node");
    Label label = doc.labels->bottom();
    if (auto it = n.find("label"); it != n.end()) label = doc.labels->decode(*it);
    g.nodes.emplace(id, label);
  }
  if (auto it = j.find("sinks"); it != j.end()) g.sinks = read_ids(*it, names, "sinks");
  for (auto s : g.sinks) {
    if (g.has(s)) fail("sinks", "\"" + names.name(s) + "\" is also a node");
  }
  for (const auto& n : nodes) {
    const NodeId from = names.id(n["id"].get<std::string>());
    auto it = n.find("edges");
    if (it == n.end()) continue;
    if (!it->is_object()) fail("nodes." + names.name(from) + ".edges", "expected an object");
    for (const auto& [to, value] : it->items()) {
      const NodeId target = names.id(to);
      if (!g.has(target) && !g.sinks.count(target)) {
        fail("nodes." + names.name(from) + ".edges", "target \"" + to + "\" is neither a node nor a sink");
      }
      g.set_edge(from, target, d.decode(value), d);
    }
  }
  if (auto bad = g.check_well_formed(d)) fail("graph", *bad);

  Inflow in;
  if (auto it = j.find("inflow"); it != j.end()) {
    if (!it->is_object()) fail("inflow", "expected an object");
    for (const auto& [name, value] : it->items()) {
      const NodeId n = names.id(name);
      if (!g.has(n)) fail("inflow", "\"" + name + "\" is not a node");
      in[n] = d.decode(value);
    }
  }
  doc.graph = make_inflowed(std::move(g), sparse(in, d), d);

  if (auto it = j.find("condition"); it != j.end()) doc.condition = as_string(*it, "condition");
  if (auto it = j.find("params"); it != j.end()) {
    if (!it->is_object()) fail("params", "expected an object");
    for (const auto& [role, node] : it->items()) doc.params[role] = names.id(as_string(node, "params." + role));
  }

  if (auto it = j.find("heap"); it != j.end()) {
    if (!it->is_object()) fail("heap", "expected an object");
    Heap heap;
    for (const auto& [cell, rec] : it->items()) {
      if (!rec.is_object()) fail("heap." + cell, "expected an object");
      HeapRecord r;
      for (const auto& [field, value] : rec.items()) r[field] = decode_field(value, *doc.labels, names);
      heap[names.id(cell)] = std::move(r);
    }
    doc.heap = std::move(heap);
    if (auto m = j.find("nodemap"); m != j.end()) {
      if (!m->is_object()) fail("nodemap", "expected an object");
      for (const auto& [cell, node] : m->items()) {
        doc.nodemap[names.id(cell)] = names.id(as_string(node, "nodemap." + cell));
      }
    }
    if (auto bad = doc.state().check_well_formed()) fail("snapshot", *bad);
  } else if (j.contains("nodemap")) {
    fail("nodemap", "only allowed together with a heap");
  }
  return doc;
}

json to_json(const Document& doc) {
  const FlowDomain& d = *doc.domain;
  const auto& names = doc.names;
  json out;
  out["domain"] = d.descriptor();
  out["labels"] = doc.labels->descriptor();
  std::vector<std::pair<std::string, NodeId>> order;
  for (const auto& [n, _] : doc.graph.graph.nodes) order.emplace_back(names.name(n), n);
  std::sort(order.begin(), order.end());
  json nodes = json::array();
  for (const auto& [name, n] : order) {
    json edges = json::object();
    for (const auto& [to, value] : doc.graph.graph.out(n)) {
      if (!d.is_zero(value)) edges[names.name(to)] = d.encode(value);
    }
    nodes.push_back({{"id", name}, {"label", doc.labels->encode(doc.graph.graph.nodes.at(n))}, {"edges", edges}});
  }
  out["nodes"] = nodes;
  std::vector<std::string> sinks;
  for (auto s : doc.graph.graph.sinks) sinks.push_back(names.name(s));
  std::sort(sinks.begin(), sinks.end());
  out["sinks"] = sinks;
  json in = json::object();
  for (const auto& [n, v] : doc.graph.inflow) {
    if (!d.is_zero(v)) in[names.name(n)] = d.encode(v);
  }
  out["inflow"] = in;
  if (doc.condition) out["condition"] = *doc.condition;
  if (!doc.params.empty()) {
    json p = json::object();
    for (const auto& [role, n] : doc.params) p[role] = names.name(n);
    out["params"] = p;
  }
  if (doc.heap) {
    json heap = json::object();
    for (const auto& [cell, rec] : *doc.heap) {
      json r = json::object();
      for (const auto& [field, value] : rec) r[field] = encode_field(value, *doc.labels, names);
      heap[names.name(cell)] = r;
    }
    out["heap"] = heap;
    json nm = json::object();
    for (const auto& [cell, node] : doc.nodemap) nm[names.name(cell)] = names.name(node);
    out["nodemap"] = nm;
  }
  return out;
}

Document graph_document(const InflowedGraph& h, DomainPtr d, LabelDomainPtr a, NameTable names) {
  Document doc;
  doc.domain = std::move(d);
  doc.labels = std::move(a);
  doc.graph = h;
  doc.names = std::move(names);
  return doc;
}

Document snapshot_document(const World& w, const GoodCondition& g, NameTable names) {
  Document doc = graph_document(w.state.graph, g.domain(), g.labels(), std::move(names));
  doc.heap = w.state.heap;
  doc.nodemap = w.state.nodemap;
  doc.condition = g.kind();
  doc.params = w.globals;
  return doc;
}

OpKind parse_op(const std::string& s) {
  for (OpKind k : {OpKind::Member, OpKind::Insert, OpKind::Delete}) {
    if (s == to_string(k)) return k;
  }
  throw FormatError("unknown operation \"" + s + "\"");
}

World RunSpec::world() const {
  if (structure == "harris") return harris_world(main_nodes);
  if (structure == "sorted_list") return sortedlist_world(initial);
  if (structure == "bptree") return bptree_world(initial);
  throw FormatError("unknown structure \"" + structure + "\"");
}

MonitorConfig RunSpec::config() const {
  MonitorConfig cfg;
  cfg.threads = threads;
  cfg.max_configs = max_configs;
  if (structure == "harris") {
    if (!mutant.empty() && mutant != "skip_marking") throw FormatError("mutant \"" + mutant + "\" does not apply to harris");
    const HarrisOptions opts{mutant == "skip_marking"};
    cfg.condition = harris_condition();
    cfg.factory = [opts](const OpSpec& op, std::int64_t tid) { return harris_machine(op.kind, tid, opts); };
    return cfg;
  }
  NodeOpsPtr ops;
  if (structure == "sorted_list") {
    ops = sortedlist_node_ops();
  } else if (structure == "bptree") {
    ops = bptree_node_ops(branching);
  } else {
    throw FormatError("unknown structure \"" + structure + "\"");
  }
  if (!mutant.empty() && mutant != "skip_range_check") {
    throw FormatError("mutant \"" + mutant + "\" does not apply to " + structure);
  }
  const GiveUpOptions opts{mutant == "skip_range_check"};
  cfg.condition = ops->condition();
  cfg.factory = [ops, opts](const OpSpec& op, std::int64_t tid) { return giveup_machine(op, tid, ops, opts); };
  cfg.dictionary = true;
  return cfg;
}

RunSpec parse_run(const json& j) {
  RunSpec r;
  r.structure = as_string(member(j, "structure", "run"), "structure");
  const bool harris = r.structure == "harris";
  if (!harris && r.structure != "sorted_list" && r.structure != "bptree") {
    fail("structure", "unknown structure \"" + r.structure + "\"");
  }
  if (auto it = j.find("params"); it != j.end()) {
    if (!it->is_object()) fail("params", "expected an object");
    for (const auto& [key, value] : it->items()) {
      if (key == "initial") {
        if (!value.is_array()) fail("params.initial", "expected an array of keys");
        for (const auto& k : value) r.initial.push_back(as_int(k, "params.initial"));
      } else if (key == "main_nodes") {
        r.main_nodes = static_cast<int>(as_int(value, "params.main_nodes"));
        if (r.main_nodes < 0) fail("params.main_nodes", "must be nonnegative");
      } else if (key == "branching") {
        r.branching = static_cast<int>(as_int(value, "params.branching"));
        if (r.branching < 2) fail("params.branching", "must be at least 2");
      } else {
        fail("params", "unknown parameter \"" + key + "\"");
      }
    }
  }
  const json& threads = member(j, "threads", "run");
  if (!threads.is_array() || threads.empty()) fail("threads", "expected a nonempty array");
  std::int64_t tid = 1;
  for (const auto& t : threads) {
    if (!t.is_array()) fail("threads[]", "expected an array of operations");
    ThreadProgram p{tid++, {}};
    for (const auto& op : t) {
      OpSpec s{parse_op(as_string(member(op, "op", "threads[][]"), "op")), 0};
      if (auto k = op.find("key"); k != op.end()) {
        s.key = as_int(*k, "key");
      } else if (!harris) {
        fail("threads[][]", "dictionary operations need a key");
      }
      if (harris && s.kind == OpKind::Member) fail("threads[][]", "harris has no member operation");
      p.ops.push_back(s);
    }
    r.threads.push_back(std::move(p));
  }
  const json& mode = member(j, "mode", "run");
  if (mode == "exhaustive") {
  } else if (mode.is_object() && mode.contains("seed")) {
    r.seed = static_cast<std::uint64_t>(as_int(mode["seed"], "mode.seed"));
    if (auto it = mode.find("runs"); it != mode.end()) r.runs = static_cast<std::size_t>(as_int(*it, "mode.runs"));
  } else {
    fail("mode", "expected \"exhaustive\" or {\"seed\": n}");
  }
  if (auto it = j.find("bounds"); it != j.end()) {
    if (!it->is_object()) fail("bounds", "expected an object");
    for (const auto& [key, value] : it->items()) {
      const auto v = as_int(value, "bounds." + key);
      if (v <= 0) fail("bounds." + key, "must be positive");
      if (key == "max_configs") {
        r.max_configs = static_cast<std::size_t>(v);
      } else if (key == "max_steps") {
        r.max_steps = static_cast<std::size_t>(v);
      } else {
        fail("bounds", "unknown bound \"" + key + "\"");
      }
    }
  }
  if (auto it = j.find("mutant"); it != j.end()) r.mutant = as_string(*it, "mutant");
  r.config();  // validates the mutant
  return r;
}

json to_json(const RunSpec& r) {
  json out;
  out["structure"] = r.structure;
  json params = json::object();
  if (r.structure == "harris") {
    params["main_nodes"] = r.main_nodes;
  } else {
    params["initial"] = r.initial;
    if (r.structure == "bptree") params["branching"] = r.branching;
  }
  out["params"] = params;
  json threads = json::array();
  for (const auto& t : r.threads) {
    json ops = json::array();
    for (const auto& op : t.ops) {
      json o{{"op", to_string(op.kind)}};
      if (r.structure != "harris") o["key"] = op.key;
      ops.push_back(o);
    }
    threads.push_back(ops);
  }
  out["threads"] = threads;
  if (r.seed) {
    out["mode"] = {{"seed", *r.seed}, {"runs", r.runs}};
  } else {
    out["mode"] = "exhaustive";
  }
  out["bounds"] = {{"max_configs", r.max_configs}, {"max_steps", r.max_steps}};
  if (!r.mutant.empty()) out["mutant"] = r.mutant;
  return out;
}

HistoryFile parse_history(const json& j) {
  HistoryFile h;
  if (!j.is_object()) fail("history", "expected an object");
  if (auto it = j.find("initial"); it != j.end()) {
    if (!it->is_array()) fail("initial", "expected an array of keys");
    for (const auto& k : *it) h.initial.push_back(as_int(k, "initial"));
  }
  const json& events = member(j, "events", "history");
  if (!events.is_array()) fail("events", "expected an array");
  std::map<std::int64_t, OpSpec> open;
  for (const auto& e : events) {
    const std::int64_t tid = as_int(member(e, "tid", "events[]"), "events[].tid");
    if (auto call = e.find("call"); call != e.end()) {
      if (open.count(tid)) fail("events[]", "thread " + std::to_string(tid) + " calls while an operation is pending");
      const OpSpec op{parse_op(as_string(*call, "call")), as_int(member(e, "key", "events[]"), "key")};
      open[tid] = op;
      h.events.push_back({tid, true, op, false});
    } else if (auto ret = e.find("return"); ret != e.end()) {
      auto it = open.find(tid);
      if (it == open.end()) fail("events[]", "thread " + std::to_string(tid) + " returns without a call");
      if (!ret->is_boolean()) fail("events[].return", "expected a boolean");
      h.events.push_back({tid, false, it->second, ret->get<bool>()});
      open.erase(it);
    } else {
      fail("events[]", "expected \"call\" or \"return\"");
    }
  }
  if (auto it = j.find("lp_order"); it != j.end()) {
    if (!it->is_array()) fail("lp_order", "expected an array of operation indices");
    std::vector<std::size_t> order;
    for (const auto& i : *it) {
      const auto v = as_int(i, "lp_order");
      if (v < 0) fail("lp_order", "negative index");
      order.push_back(static_cast<std::size_t>(v));
    }
    h.lp_order = std::move(order);
  }
  return h;
}

json to_json(const HistoryFile& h) {
  json events = json::array();
  for (const auto& e : h.events) {
    if (e.invoke) {
      events.push_back({{"tid", e.tid}, {"call", to_string(e.op.kind)}, {"key", e.op.key}});
    } else {
      events.push_back({{"tid", e.tid}, {"return", e.result}});
    }
  }
  json out{{"initial", h.initial}, {"events", events}};
  if (h.lp_order) out["lp_order"] = *h.lp_order;
  return out;
}

}  // namespace flows
