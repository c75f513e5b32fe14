#include "flows/good.hpp"

#include <algorithm>

namespace flows {

bool operator==(const NodeAbstraction& a, const NodeAbstraction& b) {
  return a.label == b.label && a.edges == b.edges;
}

namespace {

const ExtInt kInf = ExtInt::pos_inf();
const ExtInt kNegInf = ExtInt::neg_inf();

ExtInt succ(ExtInt k) { return k.is_finite() ? ExtInt(k.raw + 1) : k; }
ExtInt pred(ExtInt k) { return k.is_finite() ? ExtInt(k.raw - 1) : k; }

void add_edge(EdgeMap& out, Ptr p, const Value& label, const FlowDomain& d) {
  if (p.is_null()) return;
  auto [it, fresh] = out.emplace(p.addr, label);
  if (!fresh) it->second = d.plus(it->second, label);
}

NodeId require(const Params& p, const std::string& name) {
  auto it = p.find(name);
  if (it == p.end()) throw std::invalid_argument("missing parameter '" + name + "'");
  return it->second;
}

bool is_one_edge_each(const EdgeMap& out, const Value& label) {
  return std::all_of(out.begin(), out.end(), [&](const auto& e) { return e.second == label; });
}

// Shape conditions over plain path counting.
class PathShape : public GoodCondition {
 public:
  enum class Shape { Tree, List, Cyclic };
  explicit PathShape(Shape s) : shape_(s), d_(path_count_domain()), a_(flat_label_domain({})) {}

  std::string kind() const override {
    switch (shape_) {
      case Shape::Tree: return "tree";
      case Shape::List: return "list";
      case Shape::Cyclic: return "cyclic_list";
    }
    return "?";
  }
  DomainPtr domain() const override { return d_; }
  LabelDomainPtr labels() const override { return a_; }
  std::vector<std::string> param_names() const override { return {"root"}; }

  // Every non-null address field is an edge of label 1.
  NodeAbstraction extract(NodeId, const HeapRecord& rec, const NodeAbstraction*) const override {
    NodeAbstraction out;
    for (const auto& [name, v] : rec) {
      if (const Ptr* p = std::get_if<Ptr>(&v)) add_edge(out.edges, p->unmarked(), 1, *d_);
    }
    return out;
  }

  std::vector<std::string> check_node(NodeId n, const Value& in, const Label&, const EdgeMap& out,
                                      const HeapRecord*, const Params& p) const override {
    std::vector<std::string> bad;
    const ExtInt want = shape_ == Shape::Cyclic ? kInf : ExtInt(1);
    if (in.as_int() != want) bad.emplace_back(shape_ == Shape::Cyclic ? "inflow-infinite" : "inflow-one");
    if (!is_one_edge_each(out, 1)) bad.emplace_back("edge-label");
    if (shape_ == Shape::List) {
      auto t = p.find("terminator");
      if (t == p.end()) {
        if (out.size() > 1) bad.emplace_back("out-degree");
      } else if (t->second == n) {
        if (!out.empty()) bad.emplace_back("terminator-no-edge");
      } else if (out.size() != 1) {
        bad.emplace_back("out-degree");
      }
    }
    if (shape_ == Shape::Cyclic && out.size() != 1) bad.emplace_back("out-degree");
    return bad;
  }

  GlobalInvariant global(const Params& p) const override {
    GlobalInvariant g;
    g.required[require(p, "root")] = 1;
    g.flowmap = FlowMap{};
    return g;
  }

 private:
  Shape shape_;
  DomainPtr d_;
  LabelDomainPtr a_;
};

// Ascending list: path count paired with the lower-bound flow.
class SortedList : public GoodCondition {
 public:
  SortedList()
      : d_(product_domain(path_count_domain(), lower_bound_domain())), a_(keyset_label_domain()) {}

  std::string kind() const override { return "sorted_list"; }
  DomainPtr domain() const override { return d_; }
  LabelDomainPtr labels() const override { return a_; }
  std::vector<std::string> param_names() const override { return {"root"}; }

  NodeAbstraction extract(NodeId, const HeapRecord& rec, const NodeAbstraction*) const override {
    const ExtInt k = int_field(rec, "key");
    if (!k.is_finite()) throw ExtractError("sorted list key must be finite");
    NodeAbstraction out;
    out.label = KeySet::single(k.raw);
    add_edge(out.edges, ptr_field(rec, "next").unmarked(), Value(1, k), *d_);
    return out;
  }

  std::vector<std::string> check_node(NodeId, const Value& in, const Label& a, const EdgeMap& out,
                                      const HeapRecord*, const Params&) const override {
    std::vector<std::string> bad;
    if (in.first().as_int() != ExtInt(1)) bad.emplace_back("inflow-one");
    if (out.size() > 1) bad.emplace_back("out-degree");
    const auto keys = a.is_keys() ? a.as_keys().members(2) : std::vector<std::int64_t>{};
    if (keys.size() != 1) {
      bad.emplace_back("label-singleton");
      return bad;
    }
    const ExtInt k(keys.front());
    if (!is_one_edge_each(out, Value(1, k))) bad.emplace_back("edge-label");
    if (!(in.second().as_int() <= k)) bad.emplace_back("sorted");
    return bad;
  }

  GlobalInvariant global(const Params& p) const override {
    GlobalInvariant g;
    g.required[require(p, "root")] = Value(1, kNegInf);
    g.flowmap = FlowMap{};
    return g;
  }

 private:
  DomainPtr d_;
  LabelDomainPtr a_;
};

// Main list and free list as two path-counting flows; labels record the
// marking thread. The ghost field "marker" holds the label.
class Harris : public GoodCondition {
 public:
  Harris() : d_(product_domain(path_count_domain(), path_count_domain())), a_(harris_label_domain()) {}

  std::string kind() const override { return "harris"; }
  DomainPtr domain() const override { return d_; }
  LabelDomainPtr labels() const override { return a_; }
  std::vector<std::string> param_names() const override { return {"mh", "fh", "ft"}; }

  NodeAbstraction extract(NodeId, const HeapRecord& rec, const NodeAbstraction*) const override {
    NodeAbstraction out;
    out.label = label_field(rec, "marker");
    add_edge(out.edges, ptr_field(rec, "next").unmarked(), Value(1, 0), *d_);
    add_edge(out.edges, ptr_field(rec, "fnext"), Value(0, 1), *d_);
    return out;
  }

  std::vector<std::string> check_node(NodeId n, const Value& in, const Label& a, const EdgeMap& out,
                                      const HeapRecord* rec, const Params& p) const override {
    std::vector<std::string> bad;
    const ExtInt main = in.first().as_int(), free = in.second().as_int();
    const bool unmarked = a.is_flat() && a.as_flat().kind == FlatLabel::Kind::Bottom;
    if (!a.is_flat() || a.as_flat().kind == FlatLabel::Kind::Top) bad.emplace_back("label-not-top");
    if (rec && ptr_field(*rec, "next").mark == unmarked) bad.emplace_back("marked-iff-labelled");
    if (main > ExtInt(1) || free > ExtInt(1) || (main == ExtInt(0) && free == ExtInt(0))) {
      bad.emplace_back("path-count-range");
    }
    if (free >= ExtInt(1) && unmarked) bad.emplace_back("free-list-marked");
    if (n == require(p, "ft") && free < ExtInt(1)) bad.emplace_back("ft-on-free-list");
    if (free == ExtInt(0)) {
      const bool fnext_edge = std::any_of(out.begin(), out.end(), [](const auto& e) {
        return e.second.second().as_int() != ExtInt(0);
      });
      if (fnext_edge || (rec && !ptr_field(*rec, "fnext").is_null())) bad.emplace_back("main-no-fnext");
    }
    return bad;
  }

  GlobalInvariant global(const Params& p) const override {
    GlobalInvariant g;
    g.required[require(p, "mh")] = Value(1, 0);
    g.required[require(p, "fh")] = Value(0, 1);
    g.flowmap = FlowMap{};
    g.members.insert(require(p, "ft"));
    return g;
  }

 private:
  DomainPtr d_;
  LabelDomainPtr a_;
};

class Dictionary : public GoodCondition {
 public:
  explicit Dictionary(LayoutPtr layout)
      : layout_(std::move(layout)),
        d_(keyset_domain()),
        a_(product_label_domain(keyset_label_domain(), lockset_label_domain())) {}

  std::string kind() const override { return "dictionary:" + layout_->name(); }
  DomainPtr domain() const override { return d_; }
  LabelDomainPtr labels() const override { return a_; }
  std::vector<std::string> param_names() const override { return {"root"}; }

  NodeAbstraction extract(NodeId n, const HeapRecord& rec,
                          const NodeAbstraction* previous) const override {
    const ExtInt tid = int_field(rec, "lock");
    if (int_field(rec, "dirty") != ExtInt(0)) {
      // Out-of-sync nodes keep the abstraction they had when they went dirty.
      if (!previous || !previous->label.is_pair()) {
        throw ExtractError("out-of-sync node " + std::to_string(n.v) + " has no previous abstraction");
      }
      return {Label(previous->label.first(), LockSet::held_dirty(tid.raw)), previous->edges};
    }
    auto [contents, edges] = layout_->abstract(rec);
    return {Label(std::move(contents), LockSet::held(tid.raw)), std::move(edges)};
  }

  std::vector<std::string> check_node(NodeId, const Value& in, const Label& a, const EdgeMap& out,
                                      const HeapRecord* rec, const Params&) const override {
    std::vector<std::string> bad;
    if (!a.is_pair() || !a.first().is_keys() || !a.second().is_locks()) {
      bad.emplace_back("label-shape");
      return bad;
    }
    const KeySet& c = a.first().as_keys();
    const auto& tags = a.second().as_locks().tags;
    if (tags.size() != 1) {
      bad.emplace_back("lock-label-singleton");
    } else {
      const LockTag tag = tags.front();
      if (rec && int_field(*rec, "lock") != ExtInt(tag.tid)) bad.emplace_back("lock-field");
      if (tag.out_of_sync) {
        if (tag.tid == 0) bad.emplace_back("dirty-owner-nonzero");
      } else if (rec) {
        for (auto& clause : layout_->check_synced(in.as_keys(), *rec)) bad.push_back(std::move(clause));
      }
    }
    if (!c.subset_of(in.as_keys())) bad.emplace_back("contents-in-inset");
    for (auto it = out.begin(); it != out.end(); ++it) {
      if (!c.disjoint(it->second.as_keys())) bad.emplace_back("contents-not-forwarded");
      for (auto jt = std::next(it); jt != out.end(); ++jt) {
        if (!it->second.as_keys().disjoint(jt->second.as_keys())) bad.emplace_back("edgesets-disjoint");
      }
    }
    return bad;
  }

  GlobalInvariant global(const Params& p) const override {
    GlobalInvariant g;
    g.required[require(p, "root")] = KeySet::all();
    g.flowmap = FlowMap{};
    return g;
  }

 private:
  LayoutPtr layout_;
  DomainPtr d_;
  LabelDomainPtr a_;
};

// Fields: lock, dirty, len, range_lo, range_hi, key0.., ptr0..
class BPlusLayout : public DictionaryLayout {
 public:
  explicit BPlusLayout(int b) : b_(b) {}
  std::string name() const override { return "bptree"; }

  std::pair<KeySet, EdgeMap> abstract(const HeapRecord& rec) const override {
    const std::int64_t len = int_field(rec, "len").raw;
    if (len < 0 || len >= 2 * b_) throw ExtractError("len out of bounds");
    std::vector<ExtInt> keys;
    for (std::int64_t i = 0; i < len; ++i) keys.push_back(int_field(rec, key(i)));
    KeySet contents;
    EdgeMap edges;
    const bool leaf = ptr_field(rec, ptr(0)).is_null();
    if (leaf) {
      for (auto k : keys) {
        if (!k.is_finite()) throw ExtractError("infinite key");
        contents = contents.unite(KeySet::single(k.raw));
      }
    }
    for (std::int64_t i = 0; i < 2 * b_; ++i) {
      const Ptr y = ptr_field(rec, ptr(i));
      if (y.is_null()) continue;
      const ExtInt lo = i <= 0 ? kNegInf : (i - 1 < len ? keys[static_cast<std::size_t>(i - 1)] : kInf);
      const ExtInt hi = i >= len ? kInf : keys[static_cast<std::size_t>(i)];
      const KeySet set = KeySet::range(lo, hi);
      if (set.empty()) continue;
      auto [it, fresh] = edges.emplace(y.addr, set);
      if (!fresh) it->second = it->second.as_keys().unite(set);
    }
    return {contents, edges};
  }

  std::vector<std::string> check_synced(const KeySet& in, const HeapRecord& rec) const override {
    std::vector<std::string> bad;
    const std::int64_t len = int_field(rec, "len").raw;
    if (len < 0 || len >= 2 * b_) {
      bad.emplace_back("len-bound");
      return bad;
    }
    const ExtInt r0 = int_field(rec, "range_lo"), r1 = int_field(rec, "range_hi");
    if (in != KeySet::range(r0, r1)) bad.emplace_back("inset-is-range");
    std::vector<std::optional<ExtInt>> keys;
    for (std::int64_t i = 0; i < 2 * b_; ++i) keys.push_back(opt_int_field(rec, key(i)));
    for (std::int64_t i = 0; i < len; ++i) {
      if (!keys[static_cast<std::size_t>(i)]) {
        bad.emplace_back("keys-present");
        return bad;
      }
    }
    if (len > 0 && !(r0 <= *keys[0] && *keys[static_cast<std::size_t>(len - 1)] < r1)) {
      bad.emplace_back("keys-in-range");
    }
    for (std::int64_t i = 1; i < 2 * b_; ++i) {
      const auto& prev = keys[static_cast<std::size_t>(i - 1)];
      const auto& cur = keys[static_cast<std::size_t>(i)];
      if (i < len && !(*prev < *cur)) bad.emplace_back("keys-sorted");
    }
    for (std::int64_t i = len; i < 2 * b_; ++i) {
      if (keys[static_cast<std::size_t>(i)]) bad.emplace_back("unused-keys-null");
    }
    auto shape_ok = [&](std::int64_t bound) {
      for (std::int64_t i = 0; i < 2 * b_; ++i) {
        if ((bound <= i) != ptr_field(rec, ptr(i)).is_null()) return false;
      }
      return true;
    };
    if (!shape_ok(0) && !shape_ok(len + 1)) bad.emplace_back("pointer-shape");
    return bad;
  }

  static std::string key(std::int64_t i) { return "key" + std::to_string(i); }
  static std::string ptr(std::int64_t i) { return "ptr" + std::to_string(i); }

 private:
  int b_;
};

// One key per node. Fields: lock, dirty, key, present, next, range_lo.
// The edge to the successor carries every key above this node's key.
class SortedListLayout : public DictionaryLayout {
 public:
  std::string name() const override { return "sorted_list"; }

  std::pair<KeySet, EdgeMap> abstract(const HeapRecord& rec) const override {
    const ExtInt k = int_field(rec, "key");
    KeySet contents;
    if (int_field(rec, "present") != ExtInt(0)) {
      if (!k.is_finite()) throw ExtractError("present key must be finite");
      contents = KeySet::single(k.raw);
    }
    EdgeMap edges;
    const Ptr next = ptr_field(rec, "next");
    const KeySet beyond = KeySet::range(succ(k), kInf);
    if (!next.is_null() && !beyond.empty()) edges[next.addr] = beyond;
    return {contents, edges};
  }

  std::vector<std::string> check_synced(const KeySet& in, const HeapRecord& rec) const override {
    std::vector<std::string> bad;
    const ExtInt lo = int_field(rec, "range_lo");
    if (in != KeySet::range(lo, kInf)) bad.emplace_back("inset-is-range");
    if (int_field(rec, "present") != ExtInt(0) && !(lo <= int_field(rec, "key"))) {
      bad.emplace_back("present-in-range");
    }
    return bad;
  }
};

// Binary search tree: path count paired with lower and upper bounds.
class Bst : public GoodCondition {
 public:
  Bst()
      : d_(product_domain(path_count_domain(),
                          product_domain(lower_bound_domain(), upper_bound_domain()))),
        a_(keyset_label_domain()) {}

  std::string kind() const override { return "bst"; }
  DomainPtr domain() const override { return d_; }
  LabelDomainPtr labels() const override { return a_; }
  std::vector<std::string> param_names() const override { return {"root"}; }

  NodeAbstraction extract(NodeId, const HeapRecord& rec, const NodeAbstraction*) const override {
    const ExtInt k = int_field(rec, "key");
    if (!k.is_finite()) throw ExtractError("bst key must be finite");
    NodeAbstraction out;
    out.label = KeySet::single(k.raw);
    add_edge(out.edges, ptr_field(rec, "left"), Value(1, Value(kNegInf, pred(k))), *d_);
    add_edge(out.edges, ptr_field(rec, "right"), Value(1, Value(succ(k), kInf)), *d_);
    return out;
  }

  std::vector<std::string> check_node(NodeId, const Value& in, const Label& a, const EdgeMap&,
                                      const HeapRecord*, const Params&) const override {
    std::vector<std::string> bad;
    if (in.first().as_int() != ExtInt(1)) bad.emplace_back("inflow-one");
    const auto keys = a.is_keys() ? a.as_keys().members(2) : std::vector<std::int64_t>{};
    if (keys.size() != 1) {
      bad.emplace_back("label-singleton");
      return bad;
    }
    const ExtInt k(keys.front());
    if (!(in.second().first().as_int() <= k && k <= in.second().second().as_int())) {
      bad.emplace_back("bst-order");
    }
    return bad;
  }

  GlobalInvariant global(const Params& p) const override {
    GlobalInvariant g;
    g.required[require(p, "root")] = Value(1, Value(kNegInf, kInf));
    g.flowmap = FlowMap{};
    return g;
  }

 private:
  DomainPtr d_;
  LabelDomainPtr a_;
};

// Tree whose nodes may hang lists: path count paired with the last-edge
// flow over edge kinds {tree, list}. Labels: element 0 = tree node,
// element 1 = list node. Fields: kind, left, right, down (tree nodes), next
// (list nodes).
class NestedTreeOfLists : public GoodCondition {
 public:
  NestedTreeOfLists()
      : d_(product_domain(path_count_domain(), last_edge_domain({"tree", "list"}))),
        a_(flat_label_domain({"tree", "list"})) {}

  std::string kind() const override { return "nested_tree_of_lists"; }
  DomainPtr domain() const override { return d_; }
  LabelDomainPtr labels() const override { return a_; }
  std::vector<std::string> param_names() const override { return {"root"}; }

  NodeAbstraction extract(NodeId, const HeapRecord& rec, const NodeAbstraction*) const override {
    NodeAbstraction out;
    out.label = label_field(rec, "kind");
    const Value tree_edge(1, TagSet::of({"tree"})), list_edge(1, TagSet::of({"list"}));
    for (const char* f : {"left", "right"}) {
      if (rec.count(f)) add_edge(out.edges, ptr_field(rec, f), tree_edge, *d_);
    }
    for (const char* f : {"down", "next"}) {
      if (rec.count(f)) add_edge(out.edges, ptr_field(rec, f), list_edge, *d_);
    }
    return out;
  }

  std::vector<std::string> check_node(NodeId, const Value& in, const Label& a, const EdgeMap& out,
                                      const HeapRecord*, const Params&) const override {
    std::vector<std::string> bad;
    if (in.first().as_int() != ExtInt(1)) bad.emplace_back("inflow-one");
    if (!a.is_flat() || a.as_flat().kind != FlatLabel::Kind::Element) {
      bad.emplace_back("label-kind");
      return bad;
    }
    const TagSet& last = in.second().as_tags();
    if (a.as_flat().element == 0) {
      if (last != TagSet::of({"tree"}) && last != TagSet::identity()) bad.emplace_back("tree-entered-by-tree-edge");
    } else {
      if (last != TagSet::of({"list"})) bad.emplace_back("list-entered-by-list-edge");
      for (const auto& [_, e] : out) {
        if (e.second() != Value(TagSet::of({"list"}))) bad.emplace_back("list-no-tree-edge");
      }
    }
    return bad;
  }

  GlobalInvariant global(const Params& p) const override {
    GlobalInvariant g;
    g.required[require(p, "root")] = Value(1, TagSet::identity());
    g.flowmap = FlowMap{};
    return g;
  }

 private:
  DomainPtr d_;
  LabelDomainPtr a_;
};

}  // namespace

LayoutPtr bptree_layout(int branching) {
  if (branching < 2) throw std::invalid_argument("branching parameter must be at least 2");
  return std::make_shared<BPlusLayout>(branching);
}

LayoutPtr sorted_list_layout() { return std::make_shared<SortedListLayout>(); }

ConditionPtr tree_condition() { return std::make_shared<PathShape>(PathShape::Shape::Tree); }
ConditionPtr list_condition() { return std::make_shared<PathShape>(PathShape::Shape::List); }
ConditionPtr cyclic_list_condition() { return std::make_shared<PathShape>(PathShape::Shape::Cyclic); }
ConditionPtr sorted_list_condition() { return std::make_shared<SortedList>(); }
ConditionPtr harris_condition() { return std::make_shared<Harris>(); }
ConditionPtr dictionary_condition(LayoutPtr layout) {
  return std::make_shared<Dictionary>(std::move(layout));
}
ConditionPtr bst_condition() { return std::make_shared<Bst>(); }
ConditionPtr nested_tree_of_lists_condition() { return std::make_shared<NestedTreeOfLists>(); }

std::vector<std::string> builtin_condition_kinds() {
  return {"tree", "list", "cyclic_list", "sorted_list", "harris", "dictionary:bptree",
          "dictionary:sorted_list", "bst", "nested_tree_of_lists"};
}

ConditionPtr builtin_condition(const std::string& kind) {
  if (kind == "tree") return tree_condition();
  if (kind == "list") return list_condition();
  if (kind == "cyclic_list") return cyclic_list_condition();
  if (kind == "sorted_list") return sorted_list_condition();
  if (kind == "harris") return harris_condition();
  if (kind == "dictionary:bptree") return dictionary_condition(bptree_layout(2));
  if (kind == "dictionary:sorted_list") return dictionary_condition(sorted_list_layout());
  if (kind == "bst") return bst_condition();
  if (kind == "nested_tree_of_lists") return nested_tree_of_lists_condition();
  throw std::invalid_argument("unknown condition kind '" + kind + "'");
}

void check_params(const GoodCondition& g, const Params& p) {
  for (const auto& name : g.param_names()) require(p, name);
}

GoodReport good_denotation_check(const InflowedGraph& h, const GoodCondition& g, const Params& p,
                                 const Heap* heap, const NodeSet& skip) {
  GoodReport report;
  for (const auto& [n, label] : h.graph.nodes) {
    if (skip.count(n)) continue;
    const HeapRecord* rec = nullptr;
    if (heap) {
      auto it = heap->find(n);
      if (it != heap->end()) rec = &it->second;
    }
    std::vector<std::string> bad;
    try {
      bad = g.check_node(n, h.flow.at(n), label, h.graph.out(n), rec, p);
    } catch (const FieldError& e) {
      bad.emplace_back(std::string("heap-layout: ") + e.what());
    }
    for (auto& clause : bad) report.failures.push_back({n, std::move(clause)});
  }
  return report;
}

std::vector<std::string> check_global(const FlowInterface& i, const GlobalInvariant& inv,
                                      const FlowDomain& d) {
  std::vector<std::string> bad;
  const NodeSet dom = i.dom();
  bool roots_ok = true;
  for (const auto& [n, v] : inv.required) {
    if (!d.is_zero(v) && !dom.count(n)) roots_ok = false;
  }
  if (!roots_ok) {
    bad.emplace_back("required-root-outside-domain");
  } else if (!inflow_equiv(sparse(inv.required, d), i.inflow_rep, i.witness.graph, d)) {
    bad.emplace_back("inflow");
  }
  if (inv.flowmap && *inv.flowmap != i.flowmap) bad.emplace_back("flowmap");
  for (auto n : inv.members) {
    if (!dom.count(n)) bad.emplace_back("member-" + std::to_string(n.v));
  }
  return bad;
}

const KeySet& label_contents(const Label& a) {
  if (a.is_keys()) return a.as_keys();
  if (a.is_pair() && a.first().is_keys()) return a.first().as_keys();
  throw std::invalid_argument("label carries no contents");
}

EdgesetReport edgeset_report(const InflowedGraph& h) {
  EdgesetReport r;
  for (const auto& [n, label] : h.graph.nodes) {
    NodeKeys k;
    const Value& in = h.flow.at(n);
    if (!in.is_keys()) throw std::invalid_argument("edgeset report needs keyset flows");
    k.inset = in.as_keys();
    k.contents = label_contents(label);
    KeySet leaving;
    for (const auto& [to, e] : h.graph.out(n)) {
      if (!e.is_keys()) throw std::invalid_argument("edgeset report needs keyset edges");
      k.outsets[to] = e.as_keys();
      leaving = leaving.unite(e.as_keys());
    }
    k.keyset = k.inset.minus(leaving);
    if (!k.contents.subset_of(k.keyset)) {
      r.violations.push_back({"GS2", n, std::nullopt, std::nullopt, k.contents.minus(k.keyset)});
    }
    for (auto it = k.outsets.begin(); it != k.outsets.end(); ++it) {
      for (auto jt = std::next(it); jt != k.outsets.end(); ++jt) {
        KeySet both = it->second.intersect(jt->second);
        if (!both.empty()) r.violations.push_back({"GS3", n, it->first, jt->first, both});
      }
    }
    r.nodes.emplace(n, std::move(k));
  }
  for (auto it = r.nodes.begin(); it != r.nodes.end(); ++it) {
    for (auto jt = std::next(it); jt != r.nodes.end(); ++jt) {
      KeySet both = it->second.keyset.intersect(jt->second.keyset);
      if (!both.empty()) r.violations.push_back({"GS1", it->first, jt->first, std::nullopt, both});
    }
  }
  return r;
}

}  // namespace flows
