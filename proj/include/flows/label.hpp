#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "flows/value.hpp"

namespace flows {

// Element of a flat lattice: bottom, one unordered element, or top.
struct FlatLabel {
  enum class Kind : std::uint8_t { Bottom, Element, Top };
  Kind kind = Kind::Bottom;
  std::int64_t element = 0;

  static FlatLabel bottom() { return {}; }
  static FlatLabel top() { return {Kind::Top, 0}; }
  static FlatLabel of(std::int64_t e) { return {Kind::Element, e}; }

  bool operator==(const FlatLabel&) const = default;
  auto operator<=>(const FlatLabel&) const = default;
};

// Lock owner tag: thread id, plus a flag for the barred "locked but out of
// sync" variant. Thread 0 denotes "unlocked".
struct LockTag {
  std::int64_t tid = 0;
  bool out_of_sync = false;

  bool operator==(const LockTag&) const = default;
  auto operator<=>(const LockTag&) const = default;
};

struct LockSet {
  std::vector<LockTag> tags;  // sorted, unique

  static LockSet of(std::vector<LockTag> tags);
  static LockSet unlocked() { return of({{0, false}}); }
  static LockSet held(std::int64_t tid) { return of({{tid, false}}); }
  static LockSet held_dirty(std::int64_t tid) { return of({{tid, true}}); }

  bool subset_of(const LockSet& other) const;
  LockSet unite(const LockSet& other) const;

  bool operator==(const LockSet&) const = default;
  auto operator<=>(const LockSet&) const = default;
};

struct Label;

struct LabelPair {
  std::vector<Label> items;  // exactly two
};

struct Label {
  std::variant<FlatLabel, KeySet, LockSet, LabelPair> v;

  Label() = default;
  Label(FlatLabel f) : v(f) {}          // NOLINT
  Label(KeySet s) : v(std::move(s)) {}  // NOLINT
  Label(LockSet s) : v(std::move(s)) {} // NOLINT
  Label(Label a, Label b) : v(LabelPair{{std::move(a), std::move(b)}}) {}

  bool is_flat() const { return std::holds_alternative<FlatLabel>(v); }
  bool is_keys() const { return std::holds_alternative<KeySet>(v); }
  bool is_locks() const { return std::holds_alternative<LockSet>(v); }
  bool is_pair() const { return std::holds_alternative<LabelPair>(v); }

  const FlatLabel& as_flat() const { return std::get<FlatLabel>(v); }
  const KeySet& as_keys() const { return std::get<KeySet>(v); }
  const LockSet& as_locks() const { return std::get<LockSet>(v); }
  const Label& first() const { return std::get<LabelPair>(v).items.at(0); }
  const Label& second() const { return std::get<LabelPair>(v).items.at(1); }

  std::string str() const;
};

bool operator==(const Label& a, const Label& b);
inline bool operator!=(const Label& a, const Label& b) { return !(a == b); }
bool operator<(const Label& a, const Label& b);

}  // namespace flows
