#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "flows/graph.hpp"

namespace flows {

// Distinguished non-node address.
inline constexpr NodeId kNullAddr{0xFFFFFFFFu};

// Address with a mark bit. An empty field reads as the unmarked null address.
struct Ptr {
  NodeId addr = kNullAddr;
  bool mark = false;
  bool is_null() const { return addr == kNullAddr; }
  Ptr unmarked() const { return Ptr{addr, false}; }
  auto operator<=>(const Ptr&) const = default;
};

using FieldValue = std::variant<std::monostate, Ptr, ExtInt, Label>;
using HeapRecord = std::map<std::string, FieldValue>;
using Heap = std::map<NodeId, HeapRecord>;

// Missing field or field of the wrong kind.
struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline bool is_null(const FieldValue& v) { return std::holds_alternative<std::monostate>(v); }

const FieldValue& field(const HeapRecord& rec, const std::string& name);
Ptr ptr_field(const HeapRecord& rec, const std::string& name);
ExtInt int_field(const HeapRecord& rec, const std::string& name);
// nullopt for null
std::optional<ExtInt> opt_int_field(const HeapRecord& rec, const std::string& name);
const Label& label_field(const HeapRecord& rec, const std::string& name);

inline FieldValue null_field() { return std::monostate{}; }
inline FieldValue ptr_to(NodeId n, bool mark = false) { return Ptr{n, mark}; }

}  // namespace flows
