#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "flows/label.hpp"
#include "flows/value.hpp"

namespace flows {

using json = nlohmann::json;

// Thrown when an encoded value or descriptor does not belong to the expected
// carrier. Callers at the file boundary map it to a "malformed input" outcome.
struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered semiring with a closed-form star and a canonical residual.
class FlowDomain {
 public:
  virtual ~FlowDomain() = default;

  virtual bool leq(const Value& a, const Value& b) const = 0;
  virtual Value join(const Value& a, const Value& b) const = 0;
  virtual Value plus(const Value& a, const Value& b) const = 0;
  virtual Value times(const Value& a, const Value& b) const = 0;
  virtual Value zero() const = 0;
  virtual Value one() const = 0;
  // Least solution of x = 1 + a.x
  virtual Value star(const Value& a) const = 0;
  // Some d with plus(part, d) == target, or nullopt when the canonical rule
  // finds none.
  virtual std::optional<Value> residual(const Value& target, const Value& part) const = 0;

  virtual bool member(const Value& a) const = 0;
  virtual json encode(const Value& a) const = 0;
  virtual Value decode(const json& j) const = 0;
  virtual json descriptor() const = 0;
  // Small exhaustive sample set used by the law checker.
  virtual std::vector<Value> samples() const = 0;

  bool is_zero(const Value& a) const { return a == zero(); }
};

using DomainPtr = std::shared_ptr<const FlowDomain>;

DomainPtr path_count_domain();
DomainPtr keyset_domain();
DomainPtr lower_bound_domain();
DomainPtr upper_bound_domain();
DomainPtr last_edge_domain(std::vector<std::string> base_tags);
DomainPtr product_domain(DomainPtr first, DomainPtr second);
DomainPtr domain_from_descriptor(const json& j);

// Join-semilattice with a least element.
class LabelDomain {
 public:
  virtual ~LabelDomain() = default;

  virtual bool leq(const Label& a, const Label& b) const = 0;
  virtual Label join(const Label& a, const Label& b) const = 0;
  virtual Label bottom() const = 0;

  virtual bool member(const Label& a) const = 0;
  virtual json encode(const Label& a) const = 0;
  virtual Label decode(const json& j) const = 0;
  virtual json descriptor() const = 0;
  virtual std::vector<Label> samples() const = 0;
};

using LabelDomainPtr = std::shared_ptr<const LabelDomain>;

// Flat lattice over named elements; element i is FlatLabel::of(i).
LabelDomainPtr flat_label_domain(std::vector<std::string> names);
// Flat lattice over thread ids: "unmarked" bottom, {"tid": n}, "top".
LabelDomainPtr harris_label_domain();
LabelDomainPtr keyset_label_domain();
LabelDomainPtr lockset_label_domain();
LabelDomainPtr product_label_domain(LabelDomainPtr first, LabelDomainPtr second);
LabelDomainPtr label_domain_from_descriptor(const json& j);

struct LawViolation {
  std::string law;
  std::vector<Value> witnesses;
};

struct LawReport {
  std::size_t evaluated = 0;
  std::vector<LawViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Evaluates every semiring, order, star and residual law on all tuples drawn
// from `samples`. The parallel variant splits the outermost sample index
// across OpenMP threads and returns violations in the same order as the
// serial one.
LawReport law_check(const FlowDomain& d, const std::vector<Value>& samples);
LawReport law_check_serial(const FlowDomain& d, const std::vector<Value>& samples);

struct LabelLawViolation {
  std::string law;
  std::vector<Label> witnesses;
};

std::vector<LabelLawViolation> label_law_check(const LabelDomain& a,
                                               const std::vector<Label>& samples);

}  // namespace flows
