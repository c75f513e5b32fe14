#include <omp.h>

#include "flows/algebra.hpp"

namespace flows {

namespace {

constexpr std::size_t kMaxViolations = 256;

// All laws whose first witness is samples[i]; appends to `out`.
std::size_t check_at(const FlowDomain& d, const std::vector<Value>& s, std::size_t i,
                     std::vector<LawViolation>& out) {
  std::size_t evaluated = 0;
  auto law = [&](bool holds, const char* name, std::vector<Value> w) {
    ++evaluated;
    if (!holds && out.size() < kMaxViolations) out.push_back({name, std::move(w)});
  };

  const Value& a = s[i];
  const Value zero = d.zero();
  const Value one = d.one();

  law(d.plus(a, zero) == a, "plus-identity", {a});
  law(d.times(a, one) == a && d.times(one, a) == a, "times-identity", {a});
  law(d.times(a, zero) == zero && d.times(zero, a) == zero, "zero-annihilates", {a});
  law(d.leq(zero, a), "zero-least", {a});
  law(d.leq(a, a), "leq-reflexive", {a});
  const Value st = d.star(a);
  law(st == d.plus(one, d.times(a, st)), "star-unfold-left", {a});
  law(st == d.plus(one, d.times(st, a)), "star-unfold-right", {a});

  for (const auto& b : s) {
    law(d.plus(a, b) == d.plus(b, a), "plus-commutative", {a, b});
    law(!(d.leq(a, b) && d.leq(b, a)) || a == b, "leq-antisymmetric", {a, b});
    const Value j = d.join(a, b);
    law(d.leq(a, j) && d.leq(b, j), "join-upper-bound", {a, b});
    // a plays the target, b the known part.
    auto r = d.residual(a, b);
    if (r) law(d.plus(b, *r) == a, "residual-sound", {a, b, *r});

    for (const auto& c : s) {
      law(d.plus(a, d.plus(b, c)) == d.plus(d.plus(a, b), c), "plus-associative", {a, b, c});
      law(d.times(a, d.times(b, c)) == d.times(d.times(a, b), c), "times-associative", {a, b, c});
      law(d.times(a, d.plus(b, c)) == d.plus(d.times(a, b), d.times(a, c)), "distributes-left",
          {a, b, c});
      law(d.times(d.plus(a, b), c) == d.plus(d.times(a, c), d.times(b, c)), "distributes-right",
          {a, b, c});
      law(!(d.leq(a, b) && d.leq(b, c)) || d.leq(a, c), "leq-transitive", {a, b, c});
      law(!(d.leq(a, c) && d.leq(b, c)) || d.leq(j, c), "join-least", {a, b, c});
      if (d.leq(a, b)) {
        law(d.leq(d.plus(a, c), d.plus(b, c)), "plus-monotone", {a, b, c});
        law(d.leq(d.times(a, c), d.times(b, c)) && d.leq(d.times(c, a), d.times(c, b)),
            "times-monotone", {a, b, c});
      }
      // Completion c exists for target a and part b.
      if (d.plus(b, c) == a) law(r.has_value(), "residual-complete", {a, b, c});
    }
  }
  return evaluated;
}

}  // namespace

LawReport law_check_serial(const FlowDomain& d, const std::vector<Value>& samples) {
  LawReport rep;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    rep.evaluated += check_at(d, samples, i, rep.violations);
  }
  if (rep.violations.size() > kMaxViolations) rep.violations.resize(kMaxViolations);
  return rep;
}

LawReport law_check(const FlowDomain& d, const std::vector<Value>& samples) {
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
  std::vector<std::vector<LawViolation>> per_index(samples.size());
  std::size_t evaluated = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : evaluated)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    evaluated += check_at(d, samples, static_cast<std::size_t>(i), per_index[i]);
  }
  LawReport rep;
  rep.evaluated = evaluated;
  for (auto& v : per_index) {
    for (auto& x : v) {
      if (rep.violations.size() < kMaxViolations) rep.violations.push_back(std::move(x));
    }
  }
  return rep;
}

std::vector<LabelLawViolation> label_law_check(const LabelDomain& a,
                                               const std::vector<Label>& samples) {
  std::vector<LabelLawViolation> out;
  auto law = [&](bool holds, const char* name, std::vector<Label> w) {
    if (!holds) out.push_back({name, std::move(w)});
  };
  const Label bot = a.bottom();
  for (const auto& x : samples) {
    law(a.join(x, x) == x, "join-idempotent", {x});
    law(a.leq(bot, x) && a.join(bot, x) == x, "bottom-least", {x});
    for (const auto& y : samples) {
      law(a.join(x, y) == a.join(y, x), "join-commutative", {x, y});
      law(a.leq(x, y) == (a.join(x, y) == y), "leq-matches-join", {x, y});
      for (const auto& z : samples) {
        law(a.join(x, a.join(y, z)) == a.join(a.join(x, y), z), "join-associative", {x, y, z});
      }
    }
  }
  return out;
}

}  // namespace flows
