#include <algorithm>

#include "flows/algebra.hpp"

namespace flows {

namespace {

class Flat final : public LabelDomain {
 public:
  // Named elements when `names` is set; raw thread ids otherwise.
  Flat(std::vector<std::string> names, bool by_tid) : names_(std::move(names)), by_tid_(by_tid) {}

  bool leq(const Label& a, const Label& b) const override {
    const auto& x = a.as_flat();
    const auto& y = b.as_flat();
    return x.kind == FlatLabel::Kind::Bottom || y.kind == FlatLabel::Kind::Top || x == y;
  }
  Label join(const Label& a, const Label& b) const override {
    if (leq(a, b)) return b;
    if (leq(b, a)) return a;
    return FlatLabel::top();
  }
  Label bottom() const override { return FlatLabel::bottom(); }
  bool member(const Label& a) const override {
    if (!a.is_flat()) return false;
    if (a.as_flat().kind != FlatLabel::Kind::Element) return true;
    auto e = a.as_flat().element;
    return by_tid_ ? e >= 0 : (e >= 0 && static_cast<std::size_t>(e) < names_.size());
  }
  json encode(const Label& a) const override {
    const auto& x = a.as_flat();
    switch (x.kind) {
      case FlatLabel::Kind::Bottom: return by_tid_ ? "unmarked" : "bottom";
      case FlatLabel::Kind::Top: return "top";
      default:
        if (by_tid_) return json{{"tid", x.element}};
        return names_.at(static_cast<std::size_t>(x.element));
    }
  }
  Label decode(const json& j) const override {
    if (j.is_string()) {
      const auto& s = j.get_ref<const std::string&>();
      if (s == (by_tid_ ? "unmarked" : "bottom")) return FlatLabel::bottom();
      if (s == "top") return FlatLabel::top();
      if (!by_tid_) {
        auto it = std::find(names_.begin(), names_.end(), s);
        if (it != names_.end()) return FlatLabel::of(it - names_.begin());
      }
    } else if (by_tid_ && j.is_object() && j.size() == 1 && j.contains("tid") &&
               j["tid"].is_number_integer() && j["tid"].get<std::int64_t>() >= 0) {
      return FlatLabel::of(j["tid"].get<std::int64_t>());
    }
    throw DecodeError("bad flat label " + j.dump());
  }
  json descriptor() const override {
    if (by_tid_) return "harris";
    return json{{"flat", names_}};
  }
  std::vector<Label> samples() const override {
    std::vector<Label> out{FlatLabel::bottom(), FlatLabel::top()};
    std::size_t n = by_tid_ ? 3 : std::min<std::size_t>(3, names_.size());
    for (std::size_t i = 0; i < n; ++i) out.push_back(FlatLabel::of(static_cast<std::int64_t>(i)));
    return out;
  }

 private:
  std::vector<std::string> names_;
  bool by_tid_;
};

json encode_ext(ExtInt x) {
  if (x.is_pos_inf()) return "inf";
  if (x.is_neg_inf()) return "-inf";
  return x.raw;
}

class Contents final : public LabelDomain {
 public:
  bool leq(const Label& a, const Label& b) const override {
    return a.as_keys().subset_of(b.as_keys());
  }
  Label join(const Label& a, const Label& b) const override {
    return a.as_keys().unite(b.as_keys());
  }
  Label bottom() const override { return KeySet(); }
  bool member(const Label& a) const override { return a.is_keys(); }
  json encode(const Label& a) const override {
    json out = json::array();
    for (const auto& [lo, hi] : a.as_keys().intervals()) {
      out.push_back(json::array({encode_ext(lo), encode_ext(hi)}));
    }
    return out;
  }
  Label decode(const json& j) const override {
    return keyset_domain()->decode(j).as_keys();
  }
  json descriptor() const override { return "keyset_powerset"; }
  std::vector<Label> samples() const override {
    return {KeySet(), KeySet::single(3), KeySet::of({3, 5}), KeySet::range(0, 10), KeySet::all()};
  }
};

class Locks final : public LabelDomain {
 public:
  bool leq(const Label& a, const Label& b) const override {
    return a.as_locks().subset_of(b.as_locks());
  }
  Label join(const Label& a, const Label& b) const override {
    return a.as_locks().unite(b.as_locks());
  }
  Label bottom() const override { return LockSet(); }
  bool member(const Label& a) const override {
    if (!a.is_locks()) return false;
    for (const auto& t : a.as_locks().tags) {
      if (t.tid < 0 || (t.tid == 0 && t.out_of_sync)) return false;
    }
    return true;
  }
  json encode(const Label& a) const override {
    json out = json::array();
    for (const auto& t : a.as_locks().tags) {
      if (t.out_of_sync) {
        out.push_back(json{{"bar", t.tid}});
      } else {
        out.push_back(t.tid);
      }
    }
    return out;
  }
  Label decode(const json& j) const override {
    if (!j.is_array()) throw DecodeError("lockset must be an array");
    std::vector<LockTag> tags;
    for (const auto& it : j) {
      if (it.is_number_integer()) {
        tags.push_back({it.get<std::int64_t>(), false});
      } else if (it.is_object() && it.size() == 1 && it.contains("bar") &&
                 it["bar"].is_number_integer()) {
        tags.push_back({it["bar"].get<std::int64_t>(), true});
      } else {
        throw DecodeError("bad lock tag " + it.dump());
      }
    }
    Label out = LockSet::of(std::move(tags));
    if (!member(out)) throw DecodeError("bad lockset " + j.dump());
    return out;
  }
  json descriptor() const override { return "lockset"; }
  std::vector<Label> samples() const override {
    return {LockSet(), LockSet::unlocked(), LockSet::held(1), LockSet::held_dirty(1),
            LockSet::of({{1, false}, {2, false}})};
  }
};

class LabelProduct final : public LabelDomain {
 public:
  LabelProduct(LabelDomainPtr a, LabelDomainPtr b) : a_(std::move(a)), b_(std::move(b)) {}

  bool leq(const Label& x, const Label& y) const override {
    return a_->leq(x.first(), y.first()) && b_->leq(x.second(), y.second());
  }
  Label join(const Label& x, const Label& y) const override {
    return {a_->join(x.first(), y.first()), b_->join(x.second(), y.second())};
  }
  Label bottom() const override { return {a_->bottom(), b_->bottom()}; }
  bool member(const Label& x) const override {
    return x.is_pair() && a_->member(x.first()) && b_->member(x.second());
  }
  json encode(const Label& x) const override {
    return json::array({a_->encode(x.first()), b_->encode(x.second())});
  }
  Label decode(const json& j) const override {
    if (!j.is_array() || j.size() != 2) throw DecodeError("pair label must be a 2-element array");
    return {a_->decode(j[0]), b_->decode(j[1])};
  }
  json descriptor() const override {
    return json{{"product", json::array({a_->descriptor(), b_->descriptor()})}};
  }
  std::vector<Label> samples() const override {
    std::vector<Label> out;
    for (const auto& x : a_->samples()) {
      for (const auto& y : b_->samples()) out.emplace_back(x, y);
    }
    return out;
  }

 private:
  LabelDomainPtr a_, b_;
};

}  // namespace

LabelDomainPtr flat_label_domain(std::vector<std::string> names) {
  return std::make_shared<Flat>(std::move(names), false);
}

LabelDomainPtr harris_label_domain() {
  static const LabelDomainPtr a = std::make_shared<Flat>(std::vector<std::string>{}, true);
  return a;
}

LabelDomainPtr keyset_label_domain() {
  static const LabelDomainPtr a = std::make_shared<Contents>();
  return a;
}

LabelDomainPtr lockset_label_domain() {
  static const LabelDomainPtr a = std::make_shared<Locks>();
  return a;
}

LabelDomainPtr product_label_domain(LabelDomainPtr first, LabelDomainPtr second) {
  return std::make_shared<LabelProduct>(std::move(first), std::move(second));
}

LabelDomainPtr label_domain_from_descriptor(const json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "harris") return harris_label_domain();
    if (s == "keyset_powerset") return keyset_label_domain();
    if (s == "lockset") return lockset_label_domain();
  } else if (j.is_object() && j.size() == 1) {
    if (j.contains("flat") && j["flat"].is_array()) {
      std::vector<std::string> names;
      for (const auto& n : j["flat"]) {
        if (!n.is_string() || n == "bottom" || n == "top") throw DecodeError("bad flat element " + n.dump());
        names.push_back(n.get<std::string>());
      }
      return flat_label_domain(std::move(names));
    }
    if (j.contains("product") && j["product"].is_array() && j["product"].size() == 2) {
      return product_label_domain(label_domain_from_descriptor(j["product"][0]),
                                  label_domain_from_descriptor(j["product"][1]));
    }
  }
  throw DecodeError("unknown label domain descriptor " + j.dump());
}

}  // namespace flows
