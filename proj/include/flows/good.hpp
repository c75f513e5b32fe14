#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "flows/interface.hpp"
#include "flows/record.hpp"

namespace flows {

// Distinguished nodes a condition refers to, by role name ("root", "mh", ...).
using Params = std::map<std::string, NodeId>;

struct NodeAbstraction {
  Label label;
  EdgeMap edges;
};

bool operator==(const NodeAbstraction& a, const NodeAbstraction& b);

struct ExtractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalInvariant {
  Inflow required;                 // compared after lifting both sides by zero
  std::optional<FlowMap> flowmap;  // nullopt: unconstrained
  NodeSet members;                 // nodes that must belong to the domain
};

class GoodCondition {
 public:
  virtual ~GoodCondition() = default;

  virtual std::string kind() const = 0;
  virtual DomainPtr domain() const = 0;
  virtual LabelDomainPtr labels() const = 0;
  virtual std::vector<std::string> param_names() const = 0;

  // Deterministic abstraction of one heap record. `previous` is the node's
  // current ghost abstraction, when it has one. Throws ExtractError or
  // FieldError on records outside the expected layout.
  virtual NodeAbstraction extract(NodeId n, const HeapRecord& rec,
                                  const NodeAbstraction* previous) const = 0;

  // Names of the clauses that node n violates under flow `in`. Clauses that
  // read the heap are skipped when `rec` is null.
  virtual std::vector<std::string> check_node(NodeId n, const Value& in, const Label& a,
                                              const EdgeMap& out, const HeapRecord* rec,
                                              const Params& p) const = 0;

  virtual GlobalInvariant global(const Params& p) const = 0;
};

using ConditionPtr = std::shared_ptr<const GoodCondition>;

// Node layout of a lock-based dictionary: the in-sync half of the condition.
// Every layout record carries "lock" (owner tid, 0 when free) and "dirty"
// (nonzero while the owner has the node out of sync).
class DictionaryLayout {
 public:
  virtual ~DictionaryLayout() = default;
  virtual std::string name() const = 0;
  // Contents and out-edgesets of an in-sync node.
  virtual std::pair<KeySet, EdgeMap> abstract(const HeapRecord& rec) const = 0;
  // In-sync clauses relating the node's inset to its record.
  virtual std::vector<std::string> check_synced(const KeySet& in, const HeapRecord& rec) const = 0;
};

using LayoutPtr = std::shared_ptr<const DictionaryLayout>;

LayoutPtr bptree_layout(int branching);
LayoutPtr sorted_list_layout();

ConditionPtr tree_condition();
ConditionPtr list_condition();  // optional param "terminator"
ConditionPtr cyclic_list_condition();
ConditionPtr sorted_list_condition();
ConditionPtr harris_condition();
ConditionPtr dictionary_condition(LayoutPtr layout);
ConditionPtr bst_condition();
ConditionPtr nested_tree_of_lists_condition();

// Kinds: tree, list, cyclic_list, sorted_list, harris, dictionary:bptree,
// dictionary:sorted_list, bst, nested_tree_of_lists.
// Throws std::invalid_argument on unknown kinds.
ConditionPtr builtin_condition(const std::string& kind);
std::vector<std::string> builtin_condition_kinds();

// Throws std::invalid_argument when a required parameter is missing.
void check_params(const GoodCondition& g, const Params& p);

struct NodeFailure {
  NodeId node;
  std::string clause;
};

struct GoodReport {
  std::vector<NodeFailure> failures;
  bool ok() const { return failures.empty(); }
};

// Evaluates the condition at every node with its singleton flow. Nodes in
// `skip` are not checked.
GoodReport good_denotation_check(const InflowedGraph& h, const GoodCondition& g, const Params& p,
                                 const Heap* heap = nullptr, const NodeSet& skip = {});

// Names of the violated global clauses.
std::vector<std::string> check_global(const FlowInterface& i, const GlobalInvariant& inv,
                                      const FlowDomain& d);

struct NodeKeys {
  KeySet inset;
  std::map<NodeId, KeySet> outsets;
  KeySet keyset;
  KeySet contents;
};

struct GsViolation {
  std::string condition;  // "GS1", "GS2" or "GS3"
  NodeId node;
  std::optional<NodeId> other;   // second node (GS1) or first edge target (GS3)
  std::optional<NodeId> other2;  // second edge target (GS3)
  KeySet witness;
};

struct EdgesetReport {
  std::map<NodeId, NodeKeys> nodes;
  std::vector<GsViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Requires keyset flows and labels carrying contents (a key set, or a pair
// whose first component is one). Throws std::invalid_argument otherwise.
EdgesetReport edgeset_report(const InflowedGraph& h);

// Contents of a dictionary node label.
const KeySet& label_contents(const Label& a);

}  // namespace flows
