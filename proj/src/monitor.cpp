#include "flows/monitor.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

namespace flows {

namespace {

void put_field(std::ostringstream& o, const FieldValue& v) {
  if (is_null(v)) {
    o << '_';
  } else if (const Ptr* p = std::get_if<Ptr>(&v)) {
    o << '@' << (p->is_null() ? std::string("null") : std::to_string(p->addr.v)) << (p->mark ? "*" : "");
  } else if (const ExtInt* x = std::get_if<ExtInt>(&v)) {
    o << x->str();
  } else {
    o << std::get<Label>(v).str();
  }
}

struct Key {
  std::uint64_t a, b;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    return static_cast<std::size_t>(k.a ^ (k.b * 0x9e3779b97f4a7c15ULL));
  }
};

Key hash_key(const std::string& s) {
  std::uint64_t fnv = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    fnv ^= c;
    fnv *= 0x100000001b3ULL;
  }
  return {std::hash<std::string_view>{}(s), fnv};
}

std::string hex(const Key& k) {
  std::ostringstream o;
  o << std::hex << k.a << k.b;
  return o.str();
}

const LockSet* lock_of(const Label& a) {
  if (!a.is_pair() || !a.second().is_locks()) return nullptr;
  return &a.second().as_locks();
}

bool owned_by(const Label& a, std::int64_t tid) {
  const LockSet* l = lock_of(a);
  return l && (*l == LockSet::held(tid) || *l == LockSet::held_dirty(tid));
}

std::set<std::int64_t> apply(std::set<std::int64_t> s, const OpSpec& op, bool& res) {
  switch (op.kind) {
    case OpKind::Member: res = s.count(op.key) != 0; break;
    case OpKind::Insert: res = s.insert(op.key).second; break;
    case OpKind::Delete: res = s.erase(op.key) != 0; break;
  }
  return s;
}

KeySet as_keyset(const std::set<std::int64_t>& s) {
  KeySet out;
  for (auto k : s) out = out.unite(KeySet::single(k));
  return out;
}

KeySet graph_contents(const InflowedGraph& h) {
  KeySet out;
  for (const auto& [_, label] : h.graph.nodes) out = out.unite(label_contents(label));
  return out;
}

struct ThreadRun {
  std::int64_t tid = 0;
  const std::vector<OpSpec>* ops = nullptr;
  std::size_t idx = 0;
  MachinePtr m;  // current operation
  bool invoked = false;
  std::size_t op_index = 0;  // position among invocations
  int lps = 0;

  bool finished() const { return idx >= ops->size(); }

  ThreadRun copy() const { return {tid, ops, idx, m ? m->clone() : nullptr, invoked, op_index, lps}; }
};

struct Config {
  World world;
  std::vector<ThreadRun> threads;
  std::set<std::int64_t> spec;
  std::vector<HistoryEvent> history;
  std::vector<std::size_t> lp_order;

  Config copy() const {
    Config c{world, {}, spec, history, lp_order};
    for (const auto& t : threads) c.threads.push_back(t.copy());
    return c;
  }

  std::string digest() const {
    std::ostringstream o;
    o << world_digest(world) << '|';
    for (const auto& t : threads) {
      o << t.idx << ',' << t.invoked << ',' << t.lps << ',' << (t.m ? t.m->digest() : "") << ';';
    }
    o << '|';
    for (auto k : spec) o << k << ',';
    o << '|';
    for (const auto& h : history) {
      o << h.tid << (h.invoke ? 'i' : 'r') << static_cast<int>(h.op.kind) << h.op.key << h.result;
    }
    o << '|';
    for (auto i : lp_order) o << i << ',';
    return o.str();
  }

  bool terminal() const {
    return std::all_of(threads.begin(), threads.end(), [](const ThreadRun& t) { return t.finished(); });
  }

  NodeSet locals() const {
    NodeSet out;
    for (const auto& t : threads) {
      if (t.m) {
        auto l = t.m->local_nodes();
        out.insert(l.begin(), l.end());
      }
    }
    return out;
  }
};

constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();
constexpr std::uint64_t kInProgress = kUnbounded - 1;

std::uint64_t add_saturating(std::uint64_t a, std::uint64_t b) {
  if (a == kUnbounded || b == kUnbounded || a > kInProgress - 1 - b) return kUnbounded;
  return a + b;
}

class Explorer {
 public:
  Explorer(const MonitorConfig& cfg, ExploreReport& report)
      : cfg_(cfg), g_(*cfg.condition), d_(*g_.domain()), a_(*g_.labels()), report_(report) {}

  Config initial(const World& w) {
    Config c;
    c.world = w;
    for (const auto& p : cfg_.threads) {
      ThreadRun t;
      t.tid = p.tid;
      t.ops = &p.ops;
      c.threads.push_back(std::move(t));
    }
    if (cfg_.dictionary) {
      for (auto k : dictionary_contents(w.state).members()) c.spec.insert(k);
    }
    initial_.assign(c.spec.begin(), c.spec.end());
    for (auto& t : c.threads) ensure_machine(t);
    return c;
  }

  void explore(const World& w) {
    Config c = initial(w);
    if (!check_config(c, -1)) return;
    const std::uint64_t n = dfs(c, 0, c.digest());
    if (n != kUnbounded) report_.schedules = n;
  }

  RunResult replay(const World& w, const Schedule& schedule) {
    RunResult out;
    Config c = initial(w);
    if (!check_config(c, -1)) {
      out.violation = report_.violations.front();
      return out;
    }
    for (const auto& s : schedule) {
      if (!advance(c, s, out)) return out;
    }
    finish(c, out);
    return out;
  }

  RunResult random(const World& w, std::uint64_t seed, std::size_t max_steps) {
    RunResult out;
    Config c = initial(w);
    if (!check_config(c, -1)) {
      out.violation = report_.violations.front();
      return out;
    }
    std::mt19937_64 rng(seed);
    for (std::size_t n = 0; n < max_steps && !c.terminal(); ++n) {
      std::vector<ScheduleStep> enabled;
      for (const auto& t : c.threads) {
        if (t.finished()) continue;
        const int k = t.m->choices(c.world);
        for (int choice = 0; choice < k; ++choice) enabled.push_back({t.tid, choice});
      }
      const ScheduleStep s = enabled[std::uniform_int_distribution<std::size_t>(0, enabled.size() - 1)(rng)];
      if (!advance(c, s, out)) return out;
    }
    finish(c, out);
    return out;
  }

 private:
  // One replayed step; false when the run stops here.
  bool advance(Config& c, const ScheduleStep& s, RunResult& out) {
    auto it = std::find_if(c.threads.begin(), c.threads.end(), [&](const ThreadRun& t) { return t.tid == s.tid; });
    if (it == c.threads.end()) throw std::invalid_argument("schedule names unknown thread " + std::to_string(s.tid));
    if (it->finished()) throw std::invalid_argument("schedule steps finished thread " + std::to_string(s.tid));
    if (s.choice < 0 || s.choice >= it->m->choices(c.world)) {
      throw std::invalid_argument("choice " + std::to_string(s.choice) + " out of range");
    }
    schedule_.push_back(s);
    out.schedule.push_back(s);
    Config next = c.copy();
    const std::size_t before = report_.violations.size();
    StepEvent ev;
    const bool ok = step(c, next, static_cast<std::size_t>(it - c.threads.begin()), s.choice, &ev);
    out.trace.push_back({s.tid, ev.label, hex(hash_key(c.digest())), hex(hash_key(next.digest())), ev.syncs, ev.lp});
    out.history = next.history;
    if (report_.violations.size() > before) {
      out.violation = report_.violations[before];
      return false;
    }
    if (!ok) return false;  // excluded step
    c = std::move(next);
    return true;
  }

  void finish(const Config& c, RunResult& out) {
    out.history = c.history;
    if (!c.terminal()) return;
    out.complete = true;
    const std::size_t before = report_.violations.size();
    on_terminal(c);
    if (report_.violations.size() > before) out.violation = report_.violations[before];
  }

  void ensure_machine(ThreadRun& t) {
    if (!t.m && !t.finished()) {
      t.m = cfg_.factory((*t.ops)[t.idx], t.tid);
      t.invoked = false;
      t.lps = 0;
    }
  }

  void violation(const std::string& check, const std::string& detail) {
    ++report_.counts[check];
    if (report_.violations.size() < cfg_.max_violations) {
      report_.violations.push_back({check, detail, schedule_, trace_});
    }
  }

  // Number of maximal executions from c.
  std::uint64_t dfs(const Config& c, std::size_t depth, const std::string& digest) {
    const Key key = hash_key(digest);
    auto [memo, fresh] = memo_.try_emplace(key, kInProgress);
    if (!fresh) return memo->second == kInProgress ? kUnbounded : memo->second;
    ++report_.configs;
    report_.max_depth = std::max(report_.max_depth, depth);
    if (report_.configs >= cfg_.max_configs) {
      report_.truncated = true;
      return memo_[key] = kUnbounded;
    }
    if (c.terminal()) {
      on_terminal(c);
      return memo_[key] = 1;
    }
    std::uint64_t total = 0;
    bool moved = false;
    for (std::size_t i = 0; i < c.threads.size(); ++i) {
      const ThreadRun& t = c.threads[i];
      if (t.finished()) continue;
      const int n = t.m->choices(c.world);
      for (int choice = 0; choice < n && !report_.truncated; ++choice) {
        Config next = c.copy();
        schedule_.push_back({t.tid, choice});
        if (step(c, next, i, choice, nullptr)) {
          const std::string after = next.digest();
          if (after != digest) {  // otherwise a spin that changes nothing
            moved = true;
            total = add_saturating(total, dfs(next, depth + 1, after));
          }
        } else {
          moved = true;
          total = add_saturating(total, 1);
        }
        trace_.pop_back();
        schedule_.pop_back();
      }
    }
    if (!moved) {
      violation("deadlock", "no thread can make progress");
      total = 1;
    }
    return memo_[key] = total;
  }

  // Runs one step of thread i into `next`; false when the branch ends here.
  // Pushes one trace entry.
  bool step(const Config& prev, Config& next, std::size_t i, int choice, StepEvent* out) {
    ThreadRun& t = next.threads[i];
    const OpSpec op = (*t.ops)[t.idx];
    if (!t.invoked) {
      t.invoked = true;
      t.op_index = static_cast<std::size_t>(
          std::count_if(next.history.begin(), next.history.end(), [](const HistoryEvent& e) { return e.invoke; }));
      next.history.push_back({t.tid, true, op, false});
    }
    StepEvent ev = t.m->step(next.world, choice);
    ++report_.transitions;
    trace_.push_back("T" + std::to_string(t.tid) + " " + to_string(op.kind) +
                     (cfg_.dictionary ? " " + std::to_string(op.key) : "") + ": " + ev.label);
    if (out) *out = ev;
    if (ev.failure) {
      violation("step", *ev.failure);
      return false;
    }
    if (ev.exclusion) {
      ++report_.excluded;
      return false;
    }
    bool ok = true;
    if (cfg_.dictionary) {
      if (ev.decisive) ok = check_decisive(prev.world, *ev.decisive) && ok;
      if (ev.lp) {
        ++t.lps;
        bool res = false;
        next.spec = apply(next.spec, op, res);
        next.lp_order.push_back(t.op_index);
      }
      NodeSet locals = prev.locals();
      for (auto n : next.locals()) locals.insert(n);
      for (const auto& bad : action_conformance(prev.world, next.world, t.tid, g_, locals)) {
        violation("action-conformance", bad);
        ok = false;
      }
    }
    for (const auto& region : ev.syncs) ok = check_sync(prev.world, next.world, region) && ok;
    if (t.m->done()) {
      next.history.push_back({t.tid, false, op, t.m->result().value_or(false)});
      if (cfg_.dictionary && t.lps != 1) {
        violation("lp-count", std::to_string(t.lps) + " linearization points");
        ok = false;
      }
      t.m.reset();
      ++t.idx;
      ensure_machine(t);
    }
    return check_config(next, static_cast<int>(i)) && ok;
  }

  bool check_decisive(const World& w, const std::pair<NodeId, std::int64_t>& dk) {
    const auto& [c, k] = dk;
    const auto& g = w.state.graph;
    if (!g.graph.has(c)) {
      violation("decisive-keyset", "node " + std::to_string(c.v) + " is not in the graph");
      return false;
    }
    KeySet keyset = g.flow.at(c).as_keys();
    for (const auto& [_, e] : g.graph.out(c)) keyset = keyset.minus(e.as_keys());
    if (!keyset.contains(ExtInt(k))) {
      violation("decisive-keyset",
                std::to_string(k) + " not in keyset " + keyset.str() + " of node " + std::to_string(c.v));
      return false;
    }
    return true;
  }

  bool check_sync(const World& prev, const World& next, const NodeSet& region) {
    ++report_.syncs;
    const auto& pg = prev.state.graph;
    const bool existed = std::all_of(region.begin(), region.end(), [&](NodeId n) { return pg.graph.has(n); });
    if (!existed) return true;  // fresh nodes: checked as allocation
    const auto before = interface_of(fg_decompose(pg, region, d_).first, d_, a_);
    const auto after = interface_of(fg_decompose(next.state.graph, region, d_).first, d_, a_);
    if (!contextual_extension(before, after, d_)) {
      violation("extension", "interface of the synced region is not contextually extended");
      return false;
    }
    return true;
  }

  // Whole-configuration checks.
  bool check_config(const Config& c, int stepper) {
    const State& s = c.world.state;
    if (auto bad = s.check_well_formed()) {
      violation("well-formed", *bad);
      return false;
    }
    for (const auto& [cell, _] : s.heap) {
      if (!s.nodemap.count(cell)) {
        violation("leak", "cell " + std::to_string(cell.v) + " is not covered by the graph");
        return false;
      }
    }
    const NodeSet locals = c.locals();
    bool ok = true;
    const auto good = good_denotation_check(s.graph, g_, c.world.globals, &s.heap, locals);
    if (!good.ok()) {
      const auto& f = good.failures.front();
      violation("good", "node " + std::to_string(f.node.v) + ": " + f.clause);
      ok = false;
    }
    NodeSet shared_nodes;
    for (const auto& [n, _] : s.graph.graph.nodes) {
      if (!locals.count(n)) shared_nodes.insert(n);
    }
    const auto shared = fg_decompose(s.graph, shared_nodes, d_).first;
    const auto bad = check_global(interface_of(shared, d_, a_), g_.global(c.world.globals), d_);
    if (!bad.empty()) {
      violation("global", bad.front());
      ok = false;
    }
    if (!cfg_.dictionary) return ok;
    const auto rep = edgeset_report(shared);
    if (!rep.ok()) {
      const auto& v = rep.violations.front();
      violation(v.condition, "node " + std::to_string(v.node.v) + " witness " + v.witness.str());
      ok = false;
    }
    if (graph_contents(shared) != as_keyset(c.spec)) {
      violation("abstract-contents",
                "contents " + graph_contents(shared).str() + " differ from the specification state");
      ok = false;
    }
    for (const auto& t : c.threads) {
      if (!t.m) continue;
      for (const auto& [node, k] : t.m->facts()) {
        const auto it = s.graph.graph.nodes.find(node);
        const bool holds = it != s.graph.graph.nodes.end() && owned_by(it->second, t.tid) &&
                           s.graph.flow.at(node).as_keys().contains(ExtInt(k));
        if (!holds) {
          const bool other = stepper >= 0 && c.threads[static_cast<std::size_t>(stepper)].tid != t.tid;
          violation(other ? "stability" : "local-fact", "thread " + std::to_string(t.tid) + " loses (" +
                                                            std::to_string(node.v) + ", " +
                                                            std::to_string(k) + ")");
          ok = false;
        }
      }
    }
    return ok;
  }

  void on_terminal(const Config& c) {
    ++report_.terminals;
    if (!cfg_.dictionary) return;
    ++report_.histories;
    const bool oracle = linearizable(c.history, initial_);
    const bool by_lp = lp_linearizable(c.history, c.lp_order, initial_);
    if (oracle == by_lp) {
      ++report_.oracle_agreements;
    } else {
      violation("oracle-disagreement", oracle ? "oracle accepts a history the linearization points reject"
                                              : "linearization points accept a non-linearizable history");
    }
    if (!by_lp) violation("linearizability", "results differ from the specification at the linearization points");
  }

  const MonitorConfig& cfg_;
  const GoodCondition& g_;
  const FlowDomain& d_;
  const LabelDomain& a_;
  ExploreReport& report_;
  std::vector<std::int64_t> initial_;
  std::unordered_map<Key, std::uint64_t, KeyHash> memo_;
  std::vector<std::string> trace_;
  Schedule schedule_;
};

struct CompletedOp {
  OpSpec spec;
  bool result = false;
  std::size_t inv = 0, resp = 0;
  bool pending = true;
};

std::vector<CompletedOp> history_ops(const std::vector<HistoryEvent>& history, bool allow_pending) {
  std::vector<CompletedOp> ops;
  std::map<std::int64_t, std::size_t> open;
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& e = history[i];
    if (e.invoke) {
      if (open.count(e.tid)) throw std::invalid_argument("thread invokes while an operation is pending");
      open[e.tid] = ops.size();
      ops.push_back({e.op, false, i, history.size()});
    } else {
      auto it = open.find(e.tid);
      if (it == open.end()) throw std::invalid_argument("response without invocation");
      if (ops[it->second].spec.kind != e.op.kind || ops[it->second].spec.key != e.op.key) {
        throw std::invalid_argument("response does not match the pending invocation");
      }
      ops[it->second].result = e.result;
      ops[it->second].resp = i;
      ops[it->second].pending = false;
      open.erase(it);
    }
  }
  if (!open.empty() && !allow_pending) throw std::invalid_argument("history has pending operations");
  return ops;
}

}  // namespace

std::string world_digest(const World& w) {
  std::ostringstream o;
  for (const auto& [n, rec] : w.state.heap) {
    o << n.v << '{';
    for (const auto& [name, v] : rec) {
      o << name << '=';
      put_field(o, v);
      o << ',';
    }
    o << '}';
  }
  o << '|';
  for (const auto& [cell, node] : w.state.nodemap) o << cell.v << '>' << node.v << ',';
  o << '|';
  const auto& g = w.state.graph;
  for (const auto& [n, label] : g.graph.nodes) {
    o << n.v << ':' << label.str() << '[';
    for (const auto& [to, e] : g.graph.out(n)) o << to.v << '=' << e.str() << ',';
    o << ']';
  }
  o << '|';
  for (const auto& [n, v] : g.inflow) o << n.v << '=' << v.str() << ',';
  o << '|';
  for (const auto& [name, n] : w.globals) o << name << '=' << n.v << ',';
  return o.str();
}

ExploreReport explore(const World& initial, const MonitorConfig& cfg) {
  ExploreReport report;
  Explorer(cfg, report).explore(initial);
  return report;
}

RunResult run(const World& initial, const MonitorConfig& cfg, const Schedule& schedule) {
  ExploreReport report;
  return Explorer(cfg, report).replay(initial, schedule);
}

RunResult random_run(const World& initial, const MonitorConfig& cfg, std::uint64_t seed, std::size_t max_steps) {
  ExploreReport report;
  return Explorer(cfg, report).random(initial, seed, max_steps);
}

std::vector<std::string> action_conformance(const World& pre, const World& post, std::int64_t tid,
                                            const GoodCondition& g, const NodeSet& locals) {
  std::vector<std::string> bad;
  const auto& pg = pre.state.graph;
  const auto& qg = post.state.graph;
  const std::string who = "thread " + std::to_string(tid);
  NodeSet cells;
  for (const auto& [n, _] : pre.state.heap) cells.insert(n);
  for (const auto& [n, _] : post.state.heap) cells.insert(n);
  for (const auto& [n, _] : pg.graph.nodes) cells.insert(n);
  for (const auto& [n, _] : qg.graph.nodes) cells.insert(n);
  NodeSet region;
  for (auto n : cells) {
    auto ph = pre.state.heap.find(n), qh = post.state.heap.find(n);
    const bool heap_same = (ph == pre.state.heap.end()) == (qh == post.state.heap.end()) &&
                           (ph == pre.state.heap.end() || ph->second == qh->second);
    const bool in_pre = pg.graph.has(n), in_post = qg.graph.has(n);
    const bool ghost_same = in_pre == in_post &&
                            (!in_pre || (pg.graph.nodes.at(n) == qg.graph.nodes.at(n) &&
                                         pg.graph.out(n) == qg.graph.out(n)));
    if (heap_same && ghost_same) continue;
    if (locals.count(n)) {
      if (in_pre && in_post) region.insert(n);  // thread-local, but part of the synced interface
      continue;
    }
    const std::string node = "node " + std::to_string(n.v);
    if (!in_pre) {
      // Alloc: a fresh node owned out of sync with no contents and no inflow.
      if (!in_post) {
        bad.push_back(who + " changed unmarked cell " + std::to_string(n.v));
        continue;
      }
      const Label& a = qg.graph.nodes.at(n);
      const bool fresh_shape = a.is_pair() && a.first().is_keys() && a.first().as_keys().empty() &&
                               owned_by(a, tid) && g.domain()->is_zero(lookup(qg.inflow, n, *g.domain()));
      if (!fresh_shape) bad.push_back(who + " allocated " + node + " without the fresh-node shape");
      continue;
    }
    const Label& a0 = pg.graph.nodes.at(n);
    if (owned_by(a0, tid)) {
      region.insert(n);  // Sync
      continue;
    }
    const LockSet* l0 = lock_of(a0);
    const Label* a1 = in_post ? &qg.graph.nodes.at(n) : nullptr;
    const LockSet* l1 = a1 ? lock_of(*a1) : nullptr;
    const bool lock = l0 && l1 && *l0 == LockSet::unlocked() && *l1 == LockSet::held(tid) &&
                      a0.first() == a1->first() && pg.graph.out(n) == qg.graph.out(n);
    if (lock) {
      region.insert(n);
      continue;
    }
    bad.push_back(who + " changed " + node + " it does not own");
  }
  const bool existed =
      std::all_of(region.begin(), region.end(), [&](NodeId n) { return pg.graph.has(n) && qg.graph.has(n); });
  if (!region.empty() && existed) {
    const auto& d = *g.domain();
    const auto& a = *g.labels();
    const auto before = interface_of(fg_decompose(pg, region, d).first, d, a);
    const auto after = interface_of(fg_decompose(qg, region, d).first, d, a);
    if (!contextual_extension(before, after, d)) bad.push_back(who + " sync region not contextually extended");
  }
  return bad;
}

bool linearizable(const std::vector<HistoryEvent>& history, const std::vector<std::int64_t>& initial) {
  const auto all = history_ops(history, true);
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (all[i].pending) pending.push_back(i);
  }
  if (pending.size() > 16) throw std::invalid_argument("too many pending operations");
  // Each pending operation is either dropped or took effect with any result.
  for (std::uint32_t keep = 0; keep < (1u << pending.size()); ++keep) {
    std::vector<CompletedOp> ops;
    for (std::size_t i = 0, p = 0; i < all.size(); ++i) {
      if (all[i].pending && !((keep >> p++) & 1u)) continue;
      ops.push_back(all[i]);
    }
    std::vector<std::size_t> order(ops.size());
    std::iota(order.begin(), order.end(), 0);
    do {
      bool ok = true;
      for (std::size_t a = 0; a < order.size() && ok; ++a) {
        for (std::size_t b = a + 1; b < order.size() && ok; ++b) {
          if (ops[order[b]].resp < ops[order[a]].inv) ok = false;
        }
      }
      if (!ok) continue;
      std::set<std::int64_t> s(initial.begin(), initial.end());
      for (std::size_t j = 0; j < order.size() && ok; ++j) {
        bool res = false;
        s = apply(std::move(s), ops[order[j]].spec, res);
        ok = ops[order[j]].pending || res == ops[order[j]].result;
      }
      if (ok) return true;
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return false;
}

bool lp_linearizable(const std::vector<HistoryEvent>& history, const std::vector<std::size_t>& lp_order,
                     const std::vector<std::int64_t>& initial) {
  const auto ops = history_ops(history, false);
  std::vector<std::size_t> sorted = lp_order;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> all(ops.size());
  std::iota(all.begin(), all.end(), 0);
  if (sorted != all) return false;
  std::set<std::int64_t> s(initial.begin(), initial.end());
  for (auto i : lp_order) {
    bool res = false;
    s = apply(std::move(s), ops[i].spec, res);
    if (res != ops[i].result) return false;
  }
  return true;
}

}  // namespace flows
