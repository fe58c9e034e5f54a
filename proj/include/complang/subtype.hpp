#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "complang/span.hpp"
#include "complang/type.hpp"

namespace complang {

struct ConstraintRecord {
  Type lhs;
  Type rhs;
  Span site;
};

// Subtype assertions involving identity-bearing types (tuples, finite
// hashes, const strings), indexed by node identity so weak updates can
// replay them after a mutation.
class ConstraintStore {
 public:
  void record(const Type& lhs, const Type& rhs, Span site);
  const std::vector<ConstraintRecord>* records_for(std::uint64_t id) const;
  std::size_t total_records() const { return total_; }

 private:
  std::map<std::uint64_t, std::vector<ConstraintRecord>> by_id_;
  std::size_t total_ = 0;
};

// Structural subtyping. Nil is bottom, Object is top; singleton types sit
// below their value's class; tuples promote to Array and finite hashes to
// Hash by joining their element types. Every successful check with an
// identity-bearing side is recorded in `store` (when non-null).
bool subtype(const ClassHierarchy& h, const Type& a, const Type& b,
             ConstraintStore* store, Span site = {});

// Least informative common upper bound this lattice can name: one side if
// comparable, %bool for True/False, nominal Table for unrelated Table
// generics, otherwise the union.
Type join(const ClassHierarchy& h, const Type& a, const Type& b,
          ConstraintStore* store, Span site = {});

Type join_all(const ClassHierarchy& h, const std::vector<Type>& ts,
              ConstraintStore* store, Span site = {});

// Element/value type used for block parameters and value-read fallbacks:
// join of tuple elements or hash values, the parameter of Array<T> /
// Hash<K, V>, Object for bare nominal containers.
Type element_type_of(const ClassHierarchy& h, const Type& t);

enum class TypeEditKind : std::uint8_t {
  kTupleIndexWrite,
  kHashKeyWrite,
  kConstStringWrite,
  kArrayPromoteAppend,
  kHashPromoteAll,
};

struct TypeEdit {
  TypeEditKind kind;
  std::size_t index = 0;  // kTupleIndexWrite
  std::string key;        // kHashKeyWrite
  Type written;
};

struct ReplayError {
  ConstraintRecord violated;
  Type mutated;
  std::string message;
};

// Mutates `target` in place (widening the edited element via join, or
// promoting / demoting the node), then replays every recorded constraint
// mentioning its identity. Returns the first violated constraint.
std::optional<ReplayError> weak_update(const ClassHierarchy& h,
                                       ConstraintStore& store, Type target,
                                       const TypeEdit& edit, Span site);

}  // namespace complang
