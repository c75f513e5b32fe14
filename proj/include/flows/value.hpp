#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace flows {

// Integer extended with -inf and +inf. The two sentinels occupy the extreme
// int64 values, so the natural integer order is the extended order.
struct ExtInt {
  std::int64_t raw = 0;

  static constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
  static constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();

  constexpr ExtInt() = default;
  constexpr ExtInt(std::int64_t v) : raw(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtInt neg_inf() { return ExtInt(kNegInf); }
  static constexpr ExtInt pos_inf() { return ExtInt(kPosInf); }

  constexpr bool is_neg_inf() const { return raw == kNegInf; }
  constexpr bool is_pos_inf() const { return raw == kPosInf; }
  constexpr bool is_finite() const { return !is_neg_inf() && !is_pos_inf(); }

  constexpr auto operator<=>(const ExtInt&) const = default;

  std::string str() const;
};

// Finite union of half-open intervals [lo, hi) over the extended integers.
// Canonical form: sorted, lo < hi, and consecutive intervals neither overlap
// nor touch. [-inf, inf) is the whole key space.
class KeySet {
 public:
  using Interval = std::pair<ExtInt, ExtInt>;

  KeySet() = default;

  static KeySet all();
  static KeySet range(ExtInt lo, ExtInt hi);  // [lo, hi); empty when lo >= hi
  static KeySet single(std::int64_t key);
  static KeySet of(std::initializer_list<std::int64_t> keys);
  static KeySet from_intervals(std::vector<Interval> ivs);  // normalizes

  bool empty() const { return ivs_.empty(); }
  bool is_all() const;
  bool contains(ExtInt key) const;
  bool subset_of(const KeySet& other) const;
  bool disjoint(const KeySet& other) const { return intersect(other).empty(); }

  KeySet unite(const KeySet& other) const;
  KeySet intersect(const KeySet& other) const;
  KeySet minus(const KeySet& other) const;

  const std::vector<Interval>& intervals() const { return ivs_; }
  // Finite members in ascending order; only meaningful for bounded sets.
  std::vector<std::int64_t> members(std::size_t limit = 1u << 16) const;

  bool operator==(const KeySet&) const = default;
  auto operator<=>(const KeySet&) const = default;

  std::string str() const;

 private:
  std::vector<Interval> ivs_;
};

// Value of the last-edge domain: the set of possible last non-identity edge
// tags. `one` records that the identity is in the set.
struct TagSet {
  bool one = false;
  std::vector<std::string> tags;  // sorted, unique

  static TagSet identity() { return TagSet{true, {}}; }
  static TagSet of(std::vector<std::string> tags, bool one = false);

  bool empty() const { return !one && tags.empty(); }
  bool operator==(const TagSet&) const = default;
  auto operator<=>(const TagSet&) const = default;
};

struct Value;

struct ValuePair {
  std::vector<Value> items;  // exactly two
};

struct Value {
  std::variant<ExtInt, KeySet, TagSet, ValuePair> v;

  Value() = default;
  Value(ExtInt x) : v(x) {}                          // NOLINT
  Value(std::int64_t x) : v(ExtInt(x)) {}            // NOLINT
  Value(int x) : v(ExtInt(static_cast<std::int64_t>(x))) {}  // NOLINT
  Value(KeySet s) : v(std::move(s)) {}               // NOLINT
  Value(TagSet s) : v(std::move(s)) {}               // NOLINT
  Value(Value a, Value b) : v(ValuePair{{std::move(a), std::move(b)}}) {}

  bool is_int() const { return std::holds_alternative<ExtInt>(v); }
  bool is_keys() const { return std::holds_alternative<KeySet>(v); }
  bool is_tags() const { return std::holds_alternative<TagSet>(v); }
  bool is_pair() const { return std::holds_alternative<ValuePair>(v); }

  ExtInt as_int() const { return std::get<ExtInt>(v); }
  const KeySet& as_keys() const { return std::get<KeySet>(v); }
  const TagSet& as_tags() const { return std::get<TagSet>(v); }
  const Value& first() const { return std::get<ValuePair>(v).items.at(0); }
  const Value& second() const { return std::get<ValuePair>(v).items.at(1); }

  std::string str() const;
};

bool operator==(const Value& a, const Value& b);
inline bool operator!=(const Value& a, const Value& b) { return !(a == b); }
bool operator<(const Value& a, const Value& b);  // structural total order

}  // namespace flows
