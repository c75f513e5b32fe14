#include <algorithm>
#include <stdexcept>

#include "flows/algebra.hpp"

namespace flows {

namespace {

json encode_ext(ExtInt x) {
  if (x.is_pos_inf()) return "inf";
  if (x.is_neg_inf()) return "-inf";
  return x.raw;
}

ExtInt decode_ext(const json& j) {
  if (j.is_number_integer()) {
    auto v = j.get<std::int64_t>();
    if (v == ExtInt::kNegInf || v == ExtInt::kPosInf) throw DecodeError("integer out of range");
    return ExtInt(v);
  }
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return ExtInt::pos_inf();
    if (s == "-inf") return ExtInt::neg_inf();
  }
  throw DecodeError("expected integer, \"inf\" or \"-inf\", got " + j.dump());
}

ExtInt checked_add(ExtInt a, ExtInt b) {
  std::int64_t r;
  if (__builtin_add_overflow(a.raw, b.raw, &r) || r == ExtInt::kPosInf) {
    throw std::overflow_error("path count overflow");
  }
  return ExtInt(r);
}

ExtInt checked_mul(ExtInt a, ExtInt b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a.raw, b.raw, &r) || r == ExtInt::kPosInf) {
    throw std::overflow_error("path count overflow");
  }
  return ExtInt(r);
}

class PathCount final : public FlowDomain {
 public:
  bool leq(const Value& a, const Value& b) const override { return a.as_int() <= b.as_int(); }
  Value join(const Value& a, const Value& b) const override {
    return std::max(a.as_int(), b.as_int());
  }
  Value plus(const Value& a, const Value& b) const override {
    ExtInt x = a.as_int(), y = b.as_int();
    if (x.is_pos_inf() || y.is_pos_inf()) return ExtInt::pos_inf();
    return checked_add(x, y);
  }
  Value times(const Value& a, const Value& b) const override {
    ExtInt x = a.as_int(), y = b.as_int();
    if (x.raw == 0 || y.raw == 0) return ExtInt(0);
    if (x.is_pos_inf() || y.is_pos_inf()) return ExtInt::pos_inf();
    return checked_mul(x, y);
  }
  Value zero() const override { return ExtInt(0); }
  Value one() const override { return ExtInt(1); }
  Value star(const Value& a) const override {
    return a.as_int().raw == 0 ? ExtInt(1) : ExtInt::pos_inf();
  }
  std::optional<Value> residual(const Value& target, const Value& part) const override {
    ExtInt t = target.as_int(), p = part.as_int();
    if (t.is_pos_inf()) return p.is_pos_inf() ? ExtInt(0) : ExtInt::pos_inf();
    if (p > t) return std::nullopt;
    return ExtInt(t.raw - p.raw);
  }
  bool member(const Value& a) const override {
    return a.is_int() && (a.as_int().is_pos_inf() || (a.as_int().is_finite() && a.as_int().raw >= 0));
  }
  json encode(const Value& a) const override { return encode_ext(a.as_int()); }
  Value decode(const json& j) const override {
    Value v = decode_ext(j);
    if (!member(v)) throw DecodeError("not a path count: " + j.dump());
    return v;
  }
  json descriptor() const override { return "path_count"; }
  std::vector<Value> samples() const override {
    return {ExtInt(0), ExtInt(1), ExtInt(2), ExtInt(3), ExtInt::pos_inf()};
  }
};

class KeySets final : public FlowDomain {
 public:
  bool leq(const Value& a, const Value& b) const override {
    return a.as_keys().subset_of(b.as_keys());
  }
  Value join(const Value& a, const Value& b) const override {
    return a.as_keys().unite(b.as_keys());
  }
  Value plus(const Value& a, const Value& b) const override { return join(a, b); }
  Value times(const Value& a, const Value& b) const override {
    return a.as_keys().intersect(b.as_keys());
  }
  Value zero() const override { return KeySet(); }
  Value one() const override { return KeySet::all(); }
  Value star(const Value&) const override { return KeySet::all(); }
  std::optional<Value> residual(const Value& target, const Value& part) const override {
    if (!part.as_keys().subset_of(target.as_keys())) return std::nullopt;
    return target.as_keys().minus(part.as_keys());
  }
  bool member(const Value& a) const override { return a.is_keys(); }
  json encode(const Value& a) const override {
    json out = json::array();
    for (const auto& [lo, hi] : a.as_keys().intervals()) {
      out.push_back(json::array({encode_ext(lo), encode_ext(hi)}));
    }
    return out;
  }
  Value decode(const json& j) const override {
    if (!j.is_array()) throw DecodeError("key set must be an array of [lo, hi) pairs");
    std::vector<KeySet::Interval> ivs;
    for (const auto& iv : j) {
      if (!iv.is_array() || iv.size() != 2) throw DecodeError("bad interval " + iv.dump());
      ExtInt lo = decode_ext(iv[0]), hi = decode_ext(iv[1]);
      if (lo.is_pos_inf() || hi.is_neg_inf() || !(lo < hi)) {
        throw DecodeError("empty or inverted interval " + iv.dump());
      }
      ivs.emplace_back(lo, hi);
    }
    return KeySet::from_intervals(std::move(ivs));
  }
  json descriptor() const override { return "keyset"; }
  std::vector<Value> samples() const override {
    return {KeySet(),
            KeySet::range(0, 5),
            KeySet::range(3, 9),
            KeySet::single(2),
            KeySet::range(5, ExtInt::pos_inf()),
            KeySet::range(ExtInt::neg_inf(), 3),
            KeySet::all(),
            KeySet::range(0, 2).unite(KeySet::range(4, 6))};
  }
};

// lower = true: (Z+-inf, >=, min, min, max, inf, -inf); false is the dual.
class Bound final : public FlowDomain {
 public:
  explicit Bound(bool lower) : lower_(lower) {}

  bool leq(const Value& a, const Value& b) const override {
    return lower_ ? a.as_int() >= b.as_int() : a.as_int() <= b.as_int();
  }
  Value join(const Value& a, const Value& b) const override {
    return lower_ ? std::min(a.as_int(), b.as_int()) : std::max(a.as_int(), b.as_int());
  }
  Value plus(const Value& a, const Value& b) const override { return join(a, b); }
  Value times(const Value& a, const Value& b) const override {
    return lower_ ? std::max(a.as_int(), b.as_int()) : std::min(a.as_int(), b.as_int());
  }
  Value zero() const override { return lower_ ? ExtInt::pos_inf() : ExtInt::neg_inf(); }
  Value one() const override { return lower_ ? ExtInt::neg_inf() : ExtInt::pos_inf(); }
  Value star(const Value&) const override { return one(); }
  std::optional<Value> residual(const Value& target, const Value& part) const override {
    ExtInt t = target.as_int(), p = part.as_int();
    if (t == p) return zero();
    if (lower_ ? t < p : t > p) return Value(t);
    return std::nullopt;
  }
  bool member(const Value& a) const override { return a.is_int(); }
  json encode(const Value& a) const override { return encode_ext(a.as_int()); }
  Value decode(const json& j) const override { return decode_ext(j); }
  json descriptor() const override { return lower_ ? "lower_bound" : "upper_bound"; }
  std::vector<Value> samples() const override {
    return {ExtInt::neg_inf(), ExtInt(-2), ExtInt(0), ExtInt(3), ExtInt::pos_inf()};
  }

 private:
  bool lower_;
};

// Sets of last non-identity edge tags; see TagSet.
class LastEdge final : public FlowDomain {
 public:
  explicit LastEdge(std::vector<std::string> base) : base_(TagSet::of(std::move(base)).tags) {}

  bool leq(const Value& a, const Value& b) const override {
    const auto& x = a.as_tags();
    const auto& y = b.as_tags();
    return (!x.one || y.one) &&
           std::includes(y.tags.begin(), y.tags.end(), x.tags.begin(), x.tags.end());
  }
  Value join(const Value& a, const Value& b) const override {
    std::vector<std::string> all = a.as_tags().tags;
    all.insert(all.end(), b.as_tags().tags.begin(), b.as_tags().tags.end());
    return TagSet::of(std::move(all), a.as_tags().one || b.as_tags().one);
  }
  Value plus(const Value& a, const Value& b) const override { return join(a, b); }
  Value times(const Value& a, const Value& b) const override {
    const auto& x = a.as_tags();
    const auto& y = b.as_tags();
    if (x.empty() || y.empty()) return TagSet();
    // x . y keeps y's tags and passes x through y's identity.
    std::vector<std::string> out = y.tags;
    bool one = false;
    if (y.one) {
      out.insert(out.end(), x.tags.begin(), x.tags.end());
      one = x.one;
    }
    return TagSet::of(std::move(out), one);
  }
  Value zero() const override { return TagSet(); }
  Value one() const override { return TagSet::identity(); }
  Value star(const Value& a) const override { return join(one(), a); }
  std::optional<Value> residual(const Value& target, const Value& part) const override {
    if (!leq(part, target)) return std::nullopt;
    const auto& t = target.as_tags();
    const auto& p = part.as_tags();
    std::vector<std::string> out;
    std::set_difference(t.tags.begin(), t.tags.end(), p.tags.begin(), p.tags.end(),
                        std::back_inserter(out));
    return TagSet::of(std::move(out), t.one && !p.one);
  }
  bool member(const Value& a) const override {
    if (!a.is_tags()) return false;
    return std::includes(base_.begin(), base_.end(), a.as_tags().tags.begin(),
                         a.as_tags().tags.end());
  }
  json encode(const Value& a) const override {
    const auto& x = a.as_tags();
    json out = json::array();
    if (x.one) out.push_back("one");
    for (const auto& t : x.tags) out.push_back(t);
    if (out.size() == 1) return out[0];
    return out;
  }
  Value decode(const json& j) const override {
    json items = j.is_array() ? j : json::array({j});
    TagSet s;
    std::vector<std::string> tags;
    for (const auto& it : items) {
      if (!it.is_string()) throw DecodeError("last-edge tag must be a string: " + it.dump());
      const auto& name = it.get_ref<const std::string&>();
      if (name == "one") {
        s.one = true;
      } else if (std::binary_search(base_.begin(), base_.end(), name)) {
        tags.push_back(name);
      } else {
        throw DecodeError("unknown last-edge tag " + name);
      }
    }
    return TagSet::of(std::move(tags), s.one);
  }
  json descriptor() const override { return json{{"last_edge", base_}}; }
  std::vector<Value> samples() const override {
    std::vector<std::string> use(base_.begin(), base_.begin() + std::min<std::size_t>(2, base_.size()));
    std::vector<Value> out;
    const std::size_t n = use.size() + 1;
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<std::string> tags;
      for (std::size_t i = 0; i < use.size(); ++i) {
        if (mask & (1u << (i + 1))) tags.push_back(use[i]);
      }
      out.push_back(TagSet::of(std::move(tags), (mask & 1u) != 0));
    }
    return out;
  }

 private:
  std::vector<std::string> base_;
};

class Product final : public FlowDomain {
 public:
  Product(DomainPtr a, DomainPtr b) : a_(std::move(a)), b_(std::move(b)) {}

  bool leq(const Value& x, const Value& y) const override {
    return a_->leq(x.first(), y.first()) && b_->leq(x.second(), y.second());
  }
  Value join(const Value& x, const Value& y) const override {
    return {a_->join(x.first(), y.first()), b_->join(x.second(), y.second())};
  }
  Value plus(const Value& x, const Value& y) const override {
    return {a_->plus(x.first(), y.first()), b_->plus(x.second(), y.second())};
  }
  Value times(const Value& x, const Value& y) const override {
    return {a_->times(x.first(), y.first()), b_->times(x.second(), y.second())};
  }
  Value zero() const override { return {a_->zero(), b_->zero()}; }
  Value one() const override { return {a_->one(), b_->one()}; }
  Value star(const Value& x) const override {
    return {a_->star(x.first()), b_->star(x.second())};
  }
  std::optional<Value> residual(const Value& t, const Value& p) const override {
    auto r1 = a_->residual(t.first(), p.first());
    auto r2 = b_->residual(t.second(), p.second());
    if (!r1 || !r2) return std::nullopt;
    return Value(*r1, *r2);
  }
  bool member(const Value& x) const override {
    return x.is_pair() && a_->member(x.first()) && b_->member(x.second());
  }
  json encode(const Value& x) const override {
    return json::array({a_->encode(x.first()), b_->encode(x.second())});
  }
  Value decode(const json& j) const override {
    if (!j.is_array() || j.size() != 2) throw DecodeError("pair value must be a 2-element array");
    return {a_->decode(j[0]), b_->decode(j[1])};
  }
  json descriptor() const override {
    return json{{"product", json::array({a_->descriptor(), b_->descriptor()})}};
  }
  std::vector<Value> samples() const override {
    std::vector<Value> out;
    for (const auto& x : a_->samples()) {
      for (const auto& y : b_->samples()) out.emplace_back(x, y);
    }
    return out;
  }

 private:
  DomainPtr a_, b_;
};

}  // namespace

DomainPtr path_count_domain() {
  static const DomainPtr d = std::make_shared<PathCount>();
  return d;
}

DomainPtr keyset_domain() {
  static const DomainPtr d = std::make_shared<KeySets>();
  return d;
}

DomainPtr lower_bound_domain() {
  static const DomainPtr d = std::make_shared<Bound>(true);
  return d;
}

DomainPtr upper_bound_domain() {
  static const DomainPtr d = std::make_shared<Bound>(false);
  return d;
}

DomainPtr last_edge_domain(std::vector<std::string> base_tags) {
  for (const auto& t : base_tags) {
    if (t == "one") throw std::invalid_argument("\"one\" is reserved");
  }
  return std::make_shared<LastEdge>(std::move(base_tags));
}

DomainPtr product_domain(DomainPtr first, DomainPtr second) {
  return std::make_shared<Product>(std::move(first), std::move(second));
}

DomainPtr domain_from_descriptor(const json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "path_count") return path_count_domain();
    if (s == "keyset") return keyset_domain();
    if (s == "lower_bound") return lower_bound_domain();
    if (s == "upper_bound") return upper_bound_domain();
  } else if (j.is_object() && j.size() == 1) {
    if (j.contains("product")) {
      const auto& parts = j["product"];
      if (!parts.is_array() || parts.size() != 2) throw DecodeError("product needs two domains");
      return product_domain(domain_from_descriptor(parts[0]), domain_from_descriptor(parts[1]));
    }
    if (j.contains("last_edge")) {
      const auto& tags = j["last_edge"];
      if (!tags.is_array()) throw DecodeError("last_edge needs an array of tags");
      std::vector<std::string> names;
      for (const auto& t : tags) {
        if (!t.is_string() || t == "one") throw DecodeError("bad last_edge tag " + t.dump());
        names.push_back(t.get<std::string>());
      }
      return last_edge_domain(std::move(names));
    }
  }
  throw DecodeError("unknown flow domain descriptor " + j.dump());
}

}  // namespace flows
