#include "flows/record.hpp"

namespace flows {

const FieldValue& field(const HeapRecord& rec, const std::string& name) {
  auto it = rec.find(name);
  if (it == rec.end()) throw FieldError("missing field '" + name + "'");
  return it->second;
}

Ptr ptr_field(const HeapRecord& rec, const std::string& name) {
  const FieldValue& v = field(rec, name);
  if (is_null(v)) return Ptr{};
  if (const Ptr* p = std::get_if<Ptr>(&v)) return *p;
  throw FieldError("field '" + name + "' is not an address");
}

ExtInt int_field(const HeapRecord& rec, const std::string& name) {
  const FieldValue& v = field(rec, name);
  if (const ExtInt* x = std::get_if<ExtInt>(&v)) return *x;
  throw FieldError("field '" + name + "' is not an integer");
}

std::optional<ExtInt> opt_int_field(const HeapRecord& rec, const std::string& name) {
  const FieldValue& v = field(rec, name);
  if (is_null(v)) return std::nullopt;
  return int_field(rec, name);
}

const Label& label_field(const HeapRecord& rec, const std::string& name) {
  const FieldValue& v = field(rec, name);
  if (const Label* a = std::get_if<Label>(&v)) return *a;
  throw FieldError("field '" + name + "' is not a label");
}

}  // namespace flows
