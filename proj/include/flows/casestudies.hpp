#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flows/heap.hpp"

namespace flows {

// Shared state the machines act on: the instrumented state plus the shared
// pointer variables (mh, fh, ft for Harris; root for dictionaries).
struct World {
  State state;
  std::map<std::string, NodeId> globals;
};

// Smallest address not allocated in w.
NodeId fresh_address(const World& w);

struct StepEvent {
  std::string label;
  std::vector<NodeSet> syncs;          // regions synced by this step
  std::vector<NodeId> allocated;       // cells allocated and marked by this step
  bool contents_changed = false;
  bool lp = false;                     // linearization point of the running operation
  std::optional<std::pair<NodeId, std::int64_t>> decisive;  // node and key at decisiveOp
  std::optional<std::string> failure;  // ghost abort, memory fault or contract breach
  bool exclusion = false;              // workload outside the modeled bound
};

// One thread's operation as a sequence of atomic steps.
class Machine {
 public:
  explicit Machine(std::int64_t tid) : tid_(tid) {}
  virtual ~Machine() = default;

  virtual std::unique_ptr<Machine> clone() const = 0;
  virtual bool done() const = 0;
  // Alternatives for the next step; at least 1 while not done.
  virtual int choices(const World&) const { return 1; }
  virtual StepEvent step(World& w, int choice) = 0;
  // Program counter and locals.
  virtual std::string digest() const = 0;
  // Graph nodes owned by this thread and not yet published.
  virtual NodeSet local_nodes() const { return {}; }
  // Pairs (c, k) the thread relies on: c locked by it and k in c's inset.
  virtual std::vector<std::pair<NodeId, std::int64_t>> facts() const { return {}; }
  virtual std::optional<bool> result() const { return std::nullopt; }

  std::int64_t tid() const { return tid_; }

 private:
  std::int64_t tid_;
};

using MachinePtr = std::unique_ptr<Machine>;

enum class OpKind { Member, Insert, Delete };

const char* to_string(OpKind k);

struct OpSpec {
  OpKind kind = OpKind::Member;
  std::int64_t key = 0;  // unused by Harris
};

// Harris list. Cells: next, fnext (addresses with mark bit) and the ghost
// label field "marker". Main list mh -> n1 -> ... -> null with `main_nodes`
// nodes after mh; free list fh -> ft.
World harris_world(int main_nodes);
// mh -> n1 -> n2 -> n3, n2 marked by thread 1 and appended to the free list
// fh -> x -> n2 with ft = n2.
World harris_sample_world();

struct HarrisOptions {
  bool skip_marking = false;  // mutant: unlink without marking first
};

MachinePtr harris_machine(OpKind op, std::int64_t tid, HarrisOptions opts = {});

// Progress of a multi-step decisive operation.
struct DecisiveState {
  int phase = 0;
  std::int64_t slot = 0;
  std::int64_t cursor = 0;
  NodeId aux{};
  bool res = false;
  bool finished = false;
};

// Node layout operations for the give-up template.
class NodeOps {
 public:
  virtual ~NodeOps() = default;
  virtual std::string name() const = 0;
  virtual ConditionPtr condition() const = 0;
  virtual bool in_range(const HeapRecord& c, std::int64_t k) const = 0;
  // Successor whose edgeset contains k, or null.
  virtual Ptr find_next(const HeapRecord& c, std::int64_t k) const = 0;
  // One atomic step of decisiveOp(c, k) by thread tid on the locked node c.
  virtual StepEvent decisive(World& w, NodeId c, const OpSpec& op, std::int64_t tid,
                             DecisiveState& st) const = 0;
};

using NodeOpsPtr = std::shared_ptr<const NodeOps>;

NodeOpsPtr bptree_node_ops(int branching);
NodeOpsPtr sortedlist_node_ops();

// Dictionary worlds holding `keys` with root "root". B+ tree (B = 2): root
// [3] over leaves for keys below 3 and from 3 on. Sorted list: head (-inf)
// -> one node per key -> tail (+inf).
World bptree_world(const std::vector<std::int64_t>& keys);
World sortedlist_world(const std::vector<std::int64_t>& keys);
// Root [3] over leaf {1,2} and internal [5,7] with leaves {3,4}, {5}, {7,8}.
World bptree_sample_world();

// Cell builders for the dictionary layouts.
HeapRecord bptree_cell(std::int64_t len, ExtInt lo, ExtInt hi, const std::vector<ExtInt>& keys,
                       const std::vector<NodeId>& ptrs, int branching = 2);
HeapRecord sortedlist_cell(ExtInt key, bool present, std::optional<NodeId> next, ExtInt lo);

struct GiveUpOptions {
  bool skip_range_check = false;  // mutant: trust a node reached after a concurrent change
};

MachinePtr giveup_machine(OpSpec op, std::int64_t tid, NodeOpsPtr ops, GiveUpOptions opts = {});

std::vector<bool> sequential_spec(const std::vector<OpSpec>& history,
                                  std::vector<std::int64_t> initial = {});

// Contents of the whole dictionary: union of the node contents.
KeySet dictionary_contents(const State& s);

}  // namespace flows
