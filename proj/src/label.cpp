#include "flows/label.hpp"

#include <algorithm>

namespace flows {

LockSet LockSet::of(std::vector<LockTag> tags) {
  std::sort(tags.begin(), tags.end());
  tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
  return LockSet{std::move(tags)};
}

bool LockSet::subset_of(const LockSet& other) const {
  return std::includes(other.tags.begin(), other.tags.end(), tags.begin(), tags.end());
}

LockSet LockSet::unite(const LockSet& other) const {
  std::vector<LockTag> all = tags;
  all.insert(all.end(), other.tags.begin(), other.tags.end());
  return of(std::move(all));
}

bool operator==(const Label& a, const Label& b) {
  if (a.v.index() != b.v.index()) return false;
  switch (a.v.index()) {
    case 0: return a.as_flat() == b.as_flat();
    case 1: return a.as_keys() == b.as_keys();
    case 2: return a.as_locks() == b.as_locks();
    default: return a.first() == b.first() && a.second() == b.second();
  }
}

bool operator<(const Label& a, const Label& b) {
  if (a.v.index() != b.v.index()) return a.v.index() < b.v.index();
  switch (a.v.index()) {
    case 0: return a.as_flat() < b.as_flat();
    case 1: return a.as_keys() < b.as_keys();
    case 2: return a.as_locks() < b.as_locks();
    default:
      if (a.first() == b.first()) return a.second() < b.second();
      return a.first() < b.first();
  }
}

std::string Label::str() const {
  switch (v.index()) {
    case 0:
      switch (as_flat().kind) {
        case FlatLabel::Kind::Bottom: return "bottom";
        case FlatLabel::Kind::Top: return "top";
        default: return std::to_string(as_flat().element);
      }
    case 1: return as_keys().str();
    case 2: {
      std::string s = "{";
      for (std::size_t i = 0; i < as_locks().tags.size(); ++i) {
        const auto& t = as_locks().tags[i];
        if (i) s += ", ";
        s += std::to_string(t.tid) + (t.out_of_sync ? "~" : "");
      }
      return s + "}";
    }
    default: return "(" + first().str() + ", " + second().str() + ")";
  }
}

}  // namespace flows
