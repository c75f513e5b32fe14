#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flows/heap.hpp"
#include "flows/monitor.hpp"

namespace flows {

// Structurally valid JSON that violates a file format. Carries the JSON path
// of the offending element.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Node names of a file. Decimal names denote themselves; other names get ids
// above every decimal one, in sorted order.
class NameTable {
 public:
  static NameTable from_names(const std::vector<std::string>& names);

  NodeId id(const std::string& name) const;  // throws FormatError when unknown
  std::string name(NodeId n) const;          // decimal id when unnamed
  bool has(const std::string& name) const { return ids_.count(name) != 0; }
  void bind(const std::string& name, NodeId n);

 private:
  std::map<std::string, NodeId> ids_;
  std::map<NodeId, std::string> names_;
};

// A graph file, or a snapshot file when `heap` is present.
struct Document {
  DomainPtr domain;
  LabelDomainPtr labels;
  InflowedGraph graph;
  std::optional<Heap> heap;
  std::map<NodeId, NodeId> nodemap;  // cell -> node; snapshots only
  std::optional<std::string> condition;
  Params params;
  NameTable names;

  bool is_snapshot() const { return heap.has_value(); }
  State state() const;  // requires a snapshot
};

// Every node or cell name a document mentions.
std::vector<std::string> document_names(const json& j);

// Throws FormatError, or DecodeError for values outside their carrier. Ids
// are assigned over the document's names together with `shared_names`, so
// documents parsed with the same shared names agree on ids.
Document parse_document(const json& j, const std::vector<std::string>& shared_names = {});
// Canonical form: sorted keys, nodes sorted by name, zero inflow entries and
// zero edges omitted.
json to_json(const Document& doc);

Document graph_document(const InflowedGraph& h, DomainPtr d, LabelDomainPtr a, NameTable names = {});
Document snapshot_document(const World& w, const GoodCondition& g, NameTable names = {});

json encode_field(const FieldValue& v, const LabelDomain& a, const NameTable& names);
FieldValue decode_field(const json& j, const LabelDomain& a, const NameTable& names);

// Workload description for the monitor.
struct RunSpec {
  std::string structure;  // "harris", "sorted_list" or "bptree"
  std::vector<std::int64_t> initial;  // dictionary keys
  int main_nodes = 3;                 // harris
  int branching = 2;                  // bptree
  std::vector<ThreadProgram> threads;
  std::optional<std::uint64_t> seed;  // random mode when set
  std::size_t runs = 1;               // random mode
  std::size_t max_steps = 10'000;     // random mode, per run
  std::size_t max_configs = 20'000'000;
  std::string mutant;  // "", "skip_marking" or "skip_range_check"

  World world() const;
  MonitorConfig config() const;
};

RunSpec parse_run(const json& j);
json to_json(const RunSpec& r);

struct HistoryFile {
  std::vector<std::int64_t> initial;
  std::vector<HistoryEvent> events;
  std::optional<std::vector<std::size_t>> lp_order;
};

HistoryFile parse_history(const json& j);
json to_json(const HistoryFile& h);

OpKind parse_op(const std::string& s);

}  // namespace flows
