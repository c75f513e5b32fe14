#include "flows/value.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace flows {

std::string ExtInt::str() const {
  if (is_neg_inf()) return "-inf";
  if (is_pos_inf()) return "inf";
  return std::to_string(raw);
}

KeySet KeySet::all() { return range(ExtInt::neg_inf(), ExtInt::pos_inf()); }

KeySet KeySet::range(ExtInt lo, ExtInt hi) {
  KeySet s;
  if (lo < hi) s.ivs_.push_back({lo, hi});
  return s;
}

KeySet KeySet::single(std::int64_t key) {
  if (key == ExtInt::kPosInf) throw std::invalid_argument("inf is not a key");
  return range(ExtInt(key), ExtInt(key + 1));
}

KeySet KeySet::of(std::initializer_list<std::int64_t> keys) {
  KeySet s;
  for (auto k : keys) s = s.unite(single(k));
  return s;
}

KeySet KeySet::from_intervals(std::vector<Interval> ivs) {
  std::erase_if(ivs, [](const Interval& iv) { return !(iv.first < iv.second); });
  std::sort(ivs.begin(), ivs.end());
  KeySet s;
  for (const auto& iv : ivs) {
    if (!s.ivs_.empty() && iv.first <= s.ivs_.back().second) {
      s.ivs_.back().second = std::max(s.ivs_.back().second, iv.second);
    } else {
      s.ivs_.push_back(iv);
    }
  }
  return s;
}

bool KeySet::is_all() const {
  return ivs_.size() == 1 && ivs_[0].first.is_neg_inf() && ivs_[0].second.is_pos_inf();
}

bool KeySet::contains(ExtInt key) const {
  for (const auto& [lo, hi] : ivs_) {
    if (key < lo) return false;
    if (key < hi) return true;
  }
  return false;
}

bool KeySet::subset_of(const KeySet& other) const { return minus(other).empty(); }

KeySet KeySet::unite(const KeySet& other) const {
  std::vector<Interval> all = ivs_;
  all.insert(all.end(), other.ivs_.begin(), other.ivs_.end());
  return from_intervals(std::move(all));
}

KeySet KeySet::intersect(const KeySet& other) const {
  KeySet out;
  std::size_t i = 0, j = 0;
  while (i < ivs_.size() && j < other.ivs_.size()) {
    ExtInt lo = std::max(ivs_[i].first, other.ivs_[j].first);
    ExtInt hi = std::min(ivs_[i].second, other.ivs_[j].second);
    if (lo < hi) out.ivs_.push_back({lo, hi});
    if (ivs_[i].second < other.ivs_[j].second) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

KeySet KeySet::minus(const KeySet& other) const {
  KeySet out;
  std::size_t j = 0;
  for (auto [lo, hi] : ivs_) {
    while (j < other.ivs_.size() && other.ivs_[j].second <= lo) ++j;
    std::size_t k = j;
    while (lo < hi && k < other.ivs_.size() && other.ivs_[k].first < hi) {
      if (lo < other.ivs_[k].first) out.ivs_.push_back({lo, other.ivs_[k].first});
      lo = std::max(lo, other.ivs_[k].second);
      ++k;
    }
    if (lo < hi) out.ivs_.push_back({lo, hi});
  }
  return out;
}

std::vector<std::int64_t> KeySet::members(std::size_t limit) const {
  std::vector<std::int64_t> out;
  for (const auto& [lo, hi] : ivs_) {
    if (!lo.is_finite() || !hi.is_finite()) throw std::domain_error("unbounded key set");
    for (std::int64_t k = lo.raw; k < hi.raw; ++k) {
      if (out.size() >= limit) throw std::length_error("key set too large");
      out.push_back(k);
    }
  }
  return out;
}

std::string KeySet::str() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < ivs_.size(); ++i) {
    if (i) os << ", ";
    os << "[" << ivs_[i].first.str() << ", " << ivs_[i].second.str() << ")";
  }
  os << "}";
  return os.str();
}

TagSet TagSet::of(std::vector<std::string> tags, bool one) {
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  return TagSet{one, std::move(tags)};
}

bool operator==(const Value& a, const Value& b) {
  if (a.v.index() != b.v.index()) return false;
  switch (a.v.index()) {
    case 0: return a.as_int() == b.as_int();
    case 1: return a.as_keys() == b.as_keys();
    case 2: return a.as_tags() == b.as_tags();
    default: return a.first() == b.first() && a.second() == b.second();
  }
}

bool operator<(const Value& a, const Value& b) {
  if (a.v.index() != b.v.index()) return a.v.index() < b.v.index();
  switch (a.v.index()) {
    case 0: return a.as_int() < b.as_int();
    case 1: return a.as_keys() < b.as_keys();
    case 2: return a.as_tags() < b.as_tags();
    default:
      if (a.first() == b.first()) return a.second() < b.second();
      return a.first() < b.first();
  }
}

std::string Value::str() const {
  switch (v.index()) {
    case 0: return as_int().str();
    case 1: return as_keys().str();
    case 2: {
      std::string s = "{";
      bool sep = false;
      if (as_tags().one) {
        s += "one";
        sep = true;
      }
      for (const auto& t : as_tags().tags) {
        if (sep) s += ", ";
        s += t;
        sep = true;
      }
      return s + "}";
    }
    default: return "(" + first().str() + ", " + second().str() + ")";
  }
}

}  // namespace flows
