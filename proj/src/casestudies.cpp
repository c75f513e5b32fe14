#include "flows/casestudies.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace flows {

namespace {

const ExtInt kInf = ExtInt::pos_inf();
const ExtInt kNegInf = ExtInt::neg_inf();

struct MemoryFault : std::runtime_error {
  using std::runtime_error::runtime_error;
};

HeapRecord& cell(World& w, NodeId n) {
  auto it = w.state.heap.find(n);
  if (n == kNullAddr || it == w.state.heap.end()) {
    throw MemoryFault("access to unallocated address " +
                      (n == kNullAddr ? std::string("null") : std::to_string(n.v)));
  }
  return it->second;
}

struct StepAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void sync(World& w, const NodeSet& region, const GoodCondition& g, StepEvent& ev) {
  auto r = sync_region(w.state, region, g, w.globals);
  if (!r) {
    std::string msg = std::string("sync aborted: ") + to_string(r.abort);
    if (!r.detail.empty()) msg += " (" + r.detail + ")";
    throw StepAbort(msg);
  }
  w.state = std::move(*r.value);
  ev.syncs.push_back(region);
}

void mark_fresh(World& w, NodeId n, const GoodCondition& g, StepEvent& ev) {
  auto r = ghost_mark(w.state, n, n, *g.domain(), *g.labels());
  if (!r) throw StepAbort("mark aborted: " + r.abort);
  w.state = std::move(*r.value);
  ev.allocated.push_back(n);
}

void unmark(World& w, NodeId n, const GoodCondition& g) {
  auto r = ghost_unmark(w.state, n, *g.domain());
  if (!r) throw StepAbort("unmark aborted: " + r.abort);
  w.state = std::move(*r.value);
}

KeySet region_contents(const State& s, const NodeSet& region) {
  KeySet out;
  for (auto n : region) {
    auto it = s.graph.graph.nodes.find(n);
    if (it != s.graph.graph.nodes.end()) out = out.unite(label_contents(it->second));
  }
  return out;
}

// Sync that may change contents; the change must match the operation.
void contents_sync(World& w, const NodeSet& region, const GoodCondition& g, const OpSpec& op,
                   StepEvent& ev) {
  const KeySet before = region_contents(w.state, region);
  sync(w, region, g, ev);
  const KeySet after = region_contents(w.state, region);
  const KeySet k = KeySet::single(op.key);
  const KeySet expected = op.kind == OpKind::Insert   ? before.unite(k)
                          : op.kind == OpKind::Delete ? before.minus(k)
                                                      : before;
  if (after != expected) {
    throw StepAbort("contents change " + before.str() + " -> " + after.str() +
                    " does not match the operation");
  }
  ev.contents_changed = after != before;
  ev.lp = true;
}

template <typename F>
StepEvent guarded(F&& body) {
  StepEvent ev;
  try {
    body(ev);
  } catch (const MemoryFault& e) {
    ev.failure = std::string("memory fault: ") + e.what();
  } catch (const StepAbort& e) {
    ev.failure = e.what();
  } catch (const std::exception& e) {
    ev.failure = std::string("fault: ") + e.what();
  }
  return ev;
}

std::string addr(NodeId n) { return n == kNullAddr ? "null" : std::to_string(n.v); }
std::string addr(Ptr p) { return addr(p.addr) + (p.mark ? "*" : ""); }

HeapRecord harris_cell(Ptr next, Ptr fnext, FlatLabel marker) {
  HeapRecord r;
  r["next"] = next;
  r["fnext"] = fnext;
  r["marker"] = Label(marker);
  return r;
}

ConditionPtr harris() {
  static const ConditionPtr g = harris_condition();
  return g;
}

class HarrisMachine : public Machine {
 public:
  HarrisMachine(OpKind op, std::int64_t tid, HarrisOptions opts)
      : Machine(tid), op_(op), opts_(opts) {
    if (op == OpKind::Member) throw std::invalid_argument("harris list supports insert and delete");
  }

  MachinePtr clone() const override { return std::make_unique<HarrisMachine>(*this); }
  bool done() const override { return pc_ == kDone; }

  int choices(const World&) const override {
    if (pc_ == kTraverse && !r_.is_null()) return 2;
    return 1;
  }

  StepEvent step(World& w, int choice) override {
    return guarded([&](StepEvent& ev) {
      if (op_ == OpKind::Insert) {
        insert_step(w, choice, ev);
      } else {
        delete_step(w, choice, ev);
      }
    });
  }

  std::string digest() const override {
    std::ostringstream o;
    o << to_string(op_) << ' ' << pc_ << ' ' << addr(l_) << ' ' << addr(r_) << ' ' << addr(n_)
      << ' ' << addr(x_) << ' ' << marked_seen_;
    return o.str();
  }

  NodeSet local_nodes() const override {
    if (op_ == OpKind::Insert && (pc_ == kCas || pc_ == kRetire)) return {n_};
    return {};
  }

  std::optional<bool> result() const override {
    if (!done()) return std::nullopt;
    return res_;
  }

 private:
  enum Pc { kStart, kTraverse, kCas, kRetire, kMark, kAppend, kAdvanceTail, kUnlink, kDone };

  void read_from(World& w, NodeId from) {
    l_ = from;
    const Ptr v = ptr_field(cell(w, l_), "next");
    r_ = v.unmarked();
    marked_seen_ = v.mark;
  }

  void insert_step(World& w, int choice, StepEvent& ev) {
    const auto& g = *harris();
    switch (pc_) {
      case kStart:
        ev.label = "read mh.next";
        read_from(w, w.globals.at("mh"));
        pc_ = kTraverse;
        return;
      case kTraverse:
        if (choice == 1) {
          ev.label = "advance";
          read_from(w, r_.addr);
          return;
        }
        if (marked_seen_) {
          ev.label = "give up at marked node";
          res_ = false;
          pc_ = kDone;
          return;
        }
        ev.label = "alloc";
        n_ = fresh_address(w);
        w.state.heap[n_] = harris_cell(r_, Ptr{}, FlatLabel::bottom());
        mark_fresh(w, n_, g, ev);
        pc_ = kCas;
        return;
      case kCas: {
        HeapRecord& lc = cell(w, l_);
        if (ptr_field(lc, "next") == Ptr{r_.addr, false}) {
          ev.label = "cas l.next -> n";
          lc["next"] = Ptr{n_, false};
          sync(w, {l_, n_}, g, ev);
          res_ = true;
          pc_ = kDone;
        } else {
          ev.label = "cas l.next failed";
          pc_ = kRetire;
        }
        return;
      }
      case kRetire:
        ev.label = "free n";
        unmark(w, n_, g);
        cell(w, n_);
        w.state.heap.erase(n_);
        n_ = kNullAddr;
        pc_ = kStart;
        return;
      default:
        throw std::logic_error("insert stepped after completion");
    }
  }

  void delete_step(World& w, int choice, StepEvent& ev) {
    const auto& g = *harris();
    switch (pc_) {
      case kStart:
        ev.label = "read mh.next";
        read_from(w, w.globals.at("mh"));
        pc_ = kTraverse;
        return;
      case kTraverse:
        if (r_.is_null()) {
          ev.label = "nothing to delete";
          res_ = false;
          pc_ = kDone;
          return;
        }
        if (choice == 1) {
          ev.label = "advance";
          read_from(w, r_.addr);
          return;
        }
        ev.label = "read r.next";
        x_ = ptr_field(cell(w, r_.addr), "next");
        pc_ = x_.mark ? kStart : kMark;
        return;
      case kMark: {
        if (opts_.skip_marking) {
          ev.label = "skip marking";
          pc_ = kAppend;
          return;
        }
        HeapRecord& rc = cell(w, r_.addr);
        if (ptr_field(rc, "next") == x_) {
          ev.label = "cas r.next -> marked";
          rc["next"] = Ptr{x_.addr, true};
          rc["marker"] = Label(FlatLabel::of(tid()));
          sync(w, {r_.addr}, g, ev);
          pc_ = kAppend;
        } else {
          ev.label = "cas r.next failed";
          pc_ = kStart;
        }
        return;
      }
      case kAppend: {
        const NodeId ft = w.globals.at("ft");
        HeapRecord& fc = cell(w, ft);
        if (ptr_field(fc, "fnext").is_null()) {
          ev.label = "cas ft.fnext -> r";
          fc["fnext"] = Ptr{r_.addr, false};
          sync(w, {ft, r_.addr}, g, ev);
          pc_ = kAdvanceTail;
        } else {
          ev.label = "cas ft.fnext failed";
        }
        return;
      }
      case kAdvanceTail:
        ev.label = "ft := r";
        w.globals["ft"] = r_.addr;
        pc_ = kUnlink;
        return;
      case kUnlink: {
        HeapRecord& lc = cell(w, l_);
        if (ptr_field(lc, "next") == Ptr{r_.addr, false}) {
          ev.label = "cas l.next -> x";
          lc["next"] = Ptr{x_.addr, false};
          sync(w, {l_, r_.addr}, g, ev);
        } else {
          ev.label = "cas l.next failed";
        }
        res_ = true;
        pc_ = kDone;
        return;
      }
      default:
        throw std::logic_error("delete stepped after completion");
    }
  }

  OpKind op_;
  HarrisOptions opts_;
  int pc_ = kStart;
  NodeId l_ = kNullAddr;
  Ptr r_;
  NodeId n_ = kNullAddr;
  Ptr x_;
  bool marked_seen_ = false;
  bool res_ = false;
};

std::string bkey(std::int64_t i) { return "key" + std::to_string(i); }
std::string bptr(std::int64_t i) { return "ptr" + std::to_string(i); }

class BPlusOps : public NodeOps {
 public:
  explicit BPlusOps(int b) : b_(b), g_(dictionary_condition(bptree_layout(b))) {}

  std::string name() const override { return "bptree"; }
  ConditionPtr condition() const override { return g_; }

  bool in_range(const HeapRecord& c, std::int64_t k) const override {
    return int_field(c, "range_lo") <= ExtInt(k) && ExtInt(k) < int_field(c, "range_hi");
  }

  Ptr find_next(const HeapRecord& c, std::int64_t k) const override {
    const std::int64_t len = int_field(c, "len").raw;
    std::int64_t i = 0;
    while (i < len && ExtInt(k) >= int_field(c, bkey(i))) ++i;
    return ptr_field(c, bptr(i));
  }

  StepEvent decisive(World& w, NodeId c, const OpSpec& op, std::int64_t,
                     DecisiveState& st) const override {
    return guarded([&](StepEvent& ev) {
      HeapRecord& rec = cell(w, c);
      const std::int64_t len = int_field(rec, "len").raw;
      switch (st.phase) {
        case 0: {
          ev.label = "decisive read";
          ev.decisive = std::make_pair(c, op.key);
          std::int64_t i = 0;
          while (i < len && ExtInt(op.key) > int_field(rec, bkey(i))) ++i;
          const bool found = i < len && int_field(rec, bkey(i)) == ExtInt(op.key);
          st.slot = i;
          if (op.kind == OpKind::Member || found != (op.kind == OpKind::Delete)) {
            st.res = op.kind == OpKind::Member && found;
            ev.lp = true;
            st.finished = true;
          } else if (op.kind == OpKind::Insert && len >= 2 * b_ - 1) {
            ev.label = "node full";
            ev.exclusion = true;
            st.finished = true;
          } else {
            st.phase = 1;
          }
          return;
        }
        case 1:
          ev.label = "go out of sync";
          rec["dirty"] = ExtInt(1);
          sync(w, {c}, *g_, ev);
          st.cursor = op.kind == OpKind::Insert ? len - 1 : st.slot;
          st.phase = op.kind == OpKind::Insert ? (st.cursor >= st.slot ? 2 : 3)
                                               : (st.cursor < len - 1 ? 2 : 3);
          return;
        case 2:
          ev.label = "shift key";
          if (op.kind == OpKind::Insert) {
            rec[bkey(st.cursor + 1)] = rec.at(bkey(st.cursor));
            --st.cursor;
            if (st.cursor < st.slot) st.phase = 3;
          } else {
            rec[bkey(st.cursor)] = rec.at(bkey(st.cursor + 1));
            ++st.cursor;
            if (st.cursor >= len - 1) st.phase = 3;
          }
          sync(w, {c}, *g_, ev);
          return;
        case 3:
          if (op.kind == OpKind::Insert) {
            ev.label = "write key";
            rec[bkey(st.slot)] = ExtInt(op.key);
            rec["len"] = ExtInt(len + 1);
          } else {
            ev.label = "clear last key";
            rec[bkey(len - 1)] = null_field();
            rec["len"] = ExtInt(len - 1);
          }
          rec["dirty"] = ExtInt(0);
          contents_sync(w, {c}, *g_, op, ev);
          st.res = true;
          st.finished = true;
          return;
        default:
          throw std::logic_error("decisive stepped after completion");
      }
    });
  }

 private:
  int b_;
  ConditionPtr g_;
};

class SortedListOps : public NodeOps {
 public:
  SortedListOps() : g_(dictionary_condition(sorted_list_layout())) {}

  std::string name() const override { return "sorted_list"; }
  ConditionPtr condition() const override { return g_; }

  bool in_range(const HeapRecord& c, std::int64_t k) const override {
    return int_field(c, "range_lo") <= ExtInt(k);
  }

  Ptr find_next(const HeapRecord& c, std::int64_t k) const override {
    if (ExtInt(k) > int_field(c, "key")) return ptr_field(c, "next");
    return Ptr{};
  }

  StepEvent decisive(World& w, NodeId c, const OpSpec& op, std::int64_t tid,
                     DecisiveState& st) const override {
    return guarded([&](StepEvent& ev) {
      HeapRecord& rec = cell(w, c);
      switch (st.phase) {
        case 0: {
          ev.label = "decisive read";
          ev.decisive = std::make_pair(c, op.key);
          const bool at_key = int_field(rec, "key") == ExtInt(op.key);
          const bool found = at_key && int_field(rec, "present") != ExtInt(0);
          if (op.kind == OpKind::Member || found != (op.kind == OpKind::Delete)) {
            st.res = op.kind == OpKind::Member && found;
            ev.lp = true;
            st.finished = true;
          } else if (op.kind == OpKind::Insert && at_key) {
            ev.label = "set present";
            rec["present"] = ExtInt(1);
            contents_sync(w, {c}, *g_, op, ev);
            st.res = true;
            st.finished = true;
          } else {
            st.phase = 1;
          }
          return;
        }
        case 1:
          if (op.kind == OpKind::Insert) {
            ev.label = "alloc";
            const NodeId n = fresh_address(w);
            HeapRecord fresh = sortedlist_cell(kInf, false, std::nullopt, kInf);
            fresh["lock"] = ExtInt(tid);
            fresh["dirty"] = ExtInt(1);
            w.state.heap[n] = std::move(fresh);
            mark_fresh(w, n, *g_, ev);
            sync(w, {n}, *g_, ev);
            st.aux = n;
            st.phase = 2;
          } else {
            const NodeId d = ptr_field(rec, "next").addr;
            HeapRecord& dc = cell(w, d);
            if (int_field(dc, "lock") == ExtInt(0)) {
              ev.label = "lock successor";
              dc["lock"] = ExtInt(tid);
              sync(w, {d}, *g_, ev);
              st.aux = d;
              st.phase = 2;
            } else {
              ev.label = "lock successor failed";
            }
          }
          return;
        case 2: {
          HeapRecord& other = cell(w, st.aux);
          if (op.kind == OpKind::Insert) {
            ev.label = "split";
            other["key"] = rec.at("key");
            other["present"] = rec.at("present");
            other["next"] = rec.at("next");
            other["range_lo"] = ExtInt(op.key + 1);
            other["lock"] = ExtInt(0);
            other["dirty"] = ExtInt(0);
            rec["key"] = ExtInt(op.key);
            rec["present"] = ExtInt(1);
            rec["next"] = Ptr{st.aux, false};
            contents_sync(w, {c, st.aux}, *g_, op, ev);
            st.res = true;
            st.finished = true;
          } else {
            ev.label = "absorb successor";
            rec["key"] = other.at("key");
            rec["present"] = other.at("present");
            rec["next"] = other.at("next");
            other["range_lo"] = kInf;
            other["present"] = ExtInt(0);
            contents_sync(w, {c, st.aux}, *g_, op, ev);
            st.res = true;
            st.phase = 3;
          }
          return;
        }
        case 3:
          ev.label = "unlock successor";
          cell(w, st.aux)["lock"] = ExtInt(0);
          sync(w, {st.aux}, *g_, ev);
          st.finished = true;
          return;
        default:
          throw std::logic_error("decisive stepped after completion");
      }
    });
  }

 private:
  ConditionPtr g_;
};

class GiveUpMachine : public Machine {
 public:
  GiveUpMachine(OpSpec op, std::int64_t tid, NodeOpsPtr ops, GiveUpOptions opts)
      : Machine(tid), op_(op), ops_(std::move(ops)), opts_(opts) {}

  MachinePtr clone() const override { return std::make_unique<GiveUpMachine>(*this); }
  bool done() const override { return pc_ == kDone; }

  StepEvent step(World& w, int) override {
    if (pc_ == kDecisive) {
      StepEvent ev = ops_->decisive(w, c_, op_, tid(), ds_);
      if (ds_.finished && !ev.failure) pc_ = kFinalUnlock;
      return ev;
    }
    return guarded([&](StepEvent& ev) {
      const auto& g = *ops_->condition();
      switch (pc_) {
        case kStart:
          ev.label = "c := root";
          c_ = w.globals.at("root");
          pc_ = kLock;
          return;
        case kLock: {
          HeapRecord& rec = cell(w, c_);
          if (int_field(rec, "lock") == ExtInt(0)) {
            ev.label = "lock";
            rec["lock"] = ExtInt(tid());
            sync(w, {c_}, g, ev);
            pc_ = kRange;
          } else {
            ev.label = "lock failed";
          }
          return;
        }
        case kRange:
          ev.label = "inRange";
          if (opts_.skip_range_check || ops_->in_range(cell(w, c_), op_.key)) {
            pc_ = kFind;
          } else {
            next_ = Ptr{w.globals.at("root"), false};
            pc_ = kUnlock;
          }
          return;
        case kFind:
          ev.label = "findNext";
          next_ = ops_->find_next(cell(w, c_), op_.key);
          pc_ = next_.is_null() ? kDecisive : kUnlock;
          return;
        case kUnlock:
          ev.label = "unlock";
          cell(w, c_)["lock"] = ExtInt(0);
          sync(w, {c_}, g, ev);
          c_ = next_.addr;
          pc_ = kLock;
          return;
        case kFinalUnlock:
          ev.label = "unlock";
          cell(w, c_)["lock"] = ExtInt(0);
          sync(w, {c_}, g, ev);
          pc_ = kDone;
          return;
        default:
          throw std::logic_error("operation stepped after completion");
      }
    });
  }

  std::string digest() const override {
    std::ostringstream o;
    o << to_string(op_.kind) << ' ' << op_.key << ' ' << pc_ << ' ' << addr(c_) << ' '
      << addr(next_) << ' ' << ds_.phase << ' ' << ds_.slot << ' ' << ds_.cursor << ' '
      << addr(ds_.aux) << ' ' << ds_.res << ' ' << ds_.finished;
    return o.str();
  }

  NodeSet local_nodes() const override {
    if (op_.kind == OpKind::Insert && pc_ == kDecisive && ds_.phase == 2 && !ds_.finished &&
        ops_->name() == "sorted_list") {
      return {ds_.aux};
    }
    return {};
  }

  std::vector<std::pair<NodeId, std::int64_t>> facts() const override {
    if (pc_ == kFind || (pc_ == kDecisive && ds_.phase == 0)) return {{c_, op_.key}};
    return {};
  }

  std::optional<bool> result() const override {
    if (!done()) return std::nullopt;
    return ds_.res;
  }

 private:
  enum Pc { kStart, kLock, kRange, kFind, kUnlock, kDecisive, kFinalUnlock, kDone };

  OpSpec op_;
  NodeOpsPtr ops_;
  GiveUpOptions opts_;
  int pc_ = kStart;
  NodeId c_ = kNullAddr;
  Ptr next_;
  DecisiveState ds_;
};

World dictionary_world(const Heap& heap, const ConditionPtr& g) {
  World w;
  w.globals["root"] = NodeId{0};
  auto s = abstract_state(heap, *g, {{NodeId{0}, Value(KeySet::all())}});
  if (!s) throw std::logic_error("dictionary world does not abstract");
  w.state = std::move(*s);
  return w;
}

}  // namespace

NodeId fresh_address(const World& w) {
  std::uint32_t v = 0;
  for (const auto& [n, _] : w.state.heap) {
    if (n.v != v) break;
    ++v;
  }
  return NodeId{v};
}

const char* to_string(OpKind k) {
  switch (k) {
    case OpKind::Member: return "member";
    case OpKind::Insert: return "insert";
    case OpKind::Delete: return "delete";
  }
  return "?";
}

World harris_world(int main_nodes) {
  if (main_nodes < 0) throw std::invalid_argument("negative main list length");
  const auto m = static_cast<std::uint32_t>(main_nodes);
  const NodeId mh{0}, fh{m + 1}, ft{m + 2};
  Heap heap;
  for (std::uint32_t i = 0; i <= m; ++i) {
    const Ptr next = i < m ? Ptr{NodeId{i + 1}, false} : Ptr{};
    heap[NodeId{i}] = harris_cell(next, Ptr{}, FlatLabel::bottom());
  }
  heap[fh] = harris_cell(Ptr{kNullAddr, true}, Ptr{ft, false}, FlatLabel::of(0));
  heap[ft] = harris_cell(Ptr{kNullAddr, true}, Ptr{}, FlatLabel::of(0));
  World w;
  w.globals = {{"mh", mh}, {"fh", fh}, {"ft", ft}};
  auto s = abstract_state(heap, *harris(), {{mh, Value(1, 0)}, {fh, Value(0, 1)}});
  if (!s) throw std::logic_error("harris world does not abstract");
  w.state = std::move(*s);
  return w;
}

World harris_sample_world() {
  const NodeId mh{0}, n1{1}, n2{2}, n3{3}, fh{4}, x{5};
  Heap heap;
  heap[mh] = harris_cell(Ptr{n1, false}, Ptr{}, FlatLabel::bottom());
  heap[n1] = harris_cell(Ptr{n2, false}, Ptr{}, FlatLabel::bottom());
  heap[n2] = harris_cell(Ptr{n3, true}, Ptr{}, FlatLabel::of(1));
  heap[n3] = harris_cell(Ptr{}, Ptr{}, FlatLabel::bottom());
  heap[fh] = harris_cell(Ptr{kNullAddr, true}, Ptr{x, false}, FlatLabel::of(0));
  heap[x] = harris_cell(Ptr{n2, true}, Ptr{n2, false}, FlatLabel::of(1));
  World w;
  w.globals = {{"mh", mh}, {"fh", fh}, {"ft", n2}};
  auto s = abstract_state(heap, *harris(), {{mh, Value(1, 0)}, {fh, Value(0, 1)}});
  if (!s) throw std::logic_error("harris sample world does not abstract");
  w.state = std::move(*s);
  return w;
}

MachinePtr harris_machine(OpKind op, std::int64_t tid, HarrisOptions opts) {
  return std::make_unique<HarrisMachine>(op, tid, opts);
}

NodeOpsPtr bptree_node_ops(int branching) { return std::make_shared<BPlusOps>(branching); }
NodeOpsPtr sortedlist_node_ops() { return std::make_shared<SortedListOps>(); }

HeapRecord bptree_cell(std::int64_t len, ExtInt lo, ExtInt hi, const std::vector<ExtInt>& keys,
                       const std::vector<NodeId>& ptrs, int branching) {
  HeapRecord r;
  r["lock"] = ExtInt(0);
  r["dirty"] = ExtInt(0);
  r["len"] = ExtInt(len);
  r["range_lo"] = lo;
  r["range_hi"] = hi;
  for (std::size_t i = 0; i < static_cast<std::size_t>(2 * branching); ++i) {
    r[bkey(static_cast<std::int64_t>(i))] = i < keys.size() ? FieldValue(keys[i]) : null_field();
    r[bptr(static_cast<std::int64_t>(i))] = i < ptrs.size() ? ptr_to(ptrs[i]) : null_field();
  }
  return r;
}

HeapRecord sortedlist_cell(ExtInt key, bool present, std::optional<NodeId> next, ExtInt lo) {
  HeapRecord r;
  r["lock"] = ExtInt(0);
  r["dirty"] = ExtInt(0);
  r["key"] = key;
  r["present"] = ExtInt(present ? 1 : 0);
  r["next"] = next ? ptr_to(*next) : null_field();
  r["range_lo"] = lo;
  return r;
}

World bptree_world(const std::vector<std::int64_t>& keys) {
  std::vector<ExtInt> left, right;
  for (auto k : keys) (k < 3 ? left : right).push_back(ExtInt(k));
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  Heap heap;
  heap[NodeId{0}] = bptree_cell(1, kNegInf, kInf, {ExtInt(3)}, {NodeId{1}, NodeId{2}});
  heap[NodeId{1}] = bptree_cell(static_cast<std::int64_t>(left.size()), kNegInf, ExtInt(3), left, {});
  heap[NodeId{2}] = bptree_cell(static_cast<std::int64_t>(right.size()), ExtInt(3), kInf, right, {});
  return dictionary_world(heap, dictionary_condition(bptree_layout(2)));
}

World sortedlist_world(const std::vector<std::int64_t>& keys) {
  std::vector<std::int64_t> sorted = keys;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const auto n = static_cast<std::uint32_t>(sorted.size());
  Heap heap;
  heap[NodeId{0}] = sortedlist_cell(kNegInf, false, NodeId{1}, kNegInf);
  ExtInt lo = kNegInf;
  for (std::uint32_t i = 0; i < n; ++i) {
    heap[NodeId{i + 1}] = sortedlist_cell(ExtInt(sorted[i]), true, NodeId{i + 2}, lo);
    lo = ExtInt(sorted[i] + 1);
  }
  heap[NodeId{n + 1}] = sortedlist_cell(kInf, false, std::nullopt, lo);
  return dictionary_world(heap, dictionary_condition(sorted_list_layout()));
}

World bptree_sample_world() {
  const NodeId root{0}, cl{1}, c{2}, y0{3}, n{4}, y2{5};
  Heap heap;
  heap[root] = bptree_cell(1, kNegInf, kInf, {ExtInt(3)}, {cl, c});
  heap[cl] = bptree_cell(2, kNegInf, ExtInt(3), {ExtInt(1), ExtInt(2)}, {});
  heap[c] = bptree_cell(2, ExtInt(3), kInf, {ExtInt(5), ExtInt(7)}, {y0, n, y2});
  heap[y0] = bptree_cell(2, ExtInt(3), ExtInt(5), {ExtInt(3), ExtInt(4)}, {});
  heap[n] = bptree_cell(1, ExtInt(5), ExtInt(7), {ExtInt(5)}, {});
  heap[y2] = bptree_cell(2, ExtInt(7), kInf, {ExtInt(7), ExtInt(8)}, {});
  return dictionary_world(heap, dictionary_condition(bptree_layout(2)));
}

MachinePtr giveup_machine(OpSpec op, std::int64_t tid, NodeOpsPtr ops, GiveUpOptions opts) {
  return std::make_unique<GiveUpMachine>(op, tid, std::move(ops), opts);
}

std::vector<bool> sequential_spec(const std::vector<OpSpec>& history,
                                  std::vector<std::int64_t> initial) {
  std::set<std::int64_t> c(initial.begin(), initial.end());
  std::vector<bool> out;
  out.reserve(history.size());
  for (const auto& op : history) {
    switch (op.kind) {
      case OpKind::Member: out.push_back(c.count(op.key) != 0); break;
      case OpKind::Insert: out.push_back(c.insert(op.key).second); break;
      case OpKind::Delete: out.push_back(c.erase(op.key) != 0); break;
    }
  }
  return out;
}

KeySet dictionary_contents(const State& s) {
  KeySet out;
  for (const auto& [_, label] : s.graph.graph.nodes) out = out.unite(label_contents(label));
  return out;
}

}  // namespace flows
