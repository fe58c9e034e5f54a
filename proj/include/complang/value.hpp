#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "complang/ast.hpp"
#include "complang/type.hpp"

namespace complang {

struct Value;

struct StringInstance {
  std::string content;
  // Literal strings report a const-string type until mutated.
  bool is_const = true;
};

struct ArrayInstance {
  std::vector<Value> elems;
};

struct HashInstance {
  // Insertion-ordered symbol keys.
  std::vector<std::pair<std::string, Value>> entries;

  Value* find(const std::string& key);
  const Value* find(const std::string& key) const;
};

using Env = std::map<std::string, Value>;

struct LambdaValue {
  std::string param;
  ExprPtr body;
  Env captured;
};

// Query handle produced by the schema stdlib: base table plus the joined
// tables, the condition hashes accumulated by `where`, and the schema type
// captured when the handle was built.
struct TableValue {
  std::string base;
  std::vector<std::string> joined;
  std::vector<std::shared_ptr<HashInstance>> conds;
  Type schema_snapshot;  // finite hash
};

enum class ValueKind : std::uint8_t {
  kNil,
  kTrue,
  kFalse,
  kInt,
  kSym,
  kString,
  kObject,
  kArray,
  kHash,
  kType,
  kTable,
  kLambda,
};

struct Value {
  ValueKind kind = ValueKind::kNil;
  long long i = 0;
  std::string sym;  // kSym; kObject: class name
  std::shared_ptr<StringInstance> str;
  std::shared_ptr<ArrayInstance> arr;
  std::shared_ptr<HashInstance> hash;
  Type type;  // kType
  std::shared_ptr<TableValue> table;
  std::shared_ptr<LambdaValue> lambda;
};

Value v_nil();
Value v_bool(bool b);
Value v_int(long long v);
Value v_sym(const std::string& s);
Value v_string(const std::string& content, bool is_const = true);
Value v_object(const std::string& cls);
Value v_array(std::vector<Value> elems);
Value v_hash(std::vector<std::pair<std::string, Value>> entries);
Value v_type(Type t);
Value v_table(std::shared_ptr<TableValue> t);
Value v_lambda(std::shared_ptr<LambdaValue> l);

inline bool is_nil(const Value& v) { return v.kind == ValueKind::kNil; }
// nil and false are the only falsy values.
inline bool truthy(const Value& v) {
  return v.kind != ValueKind::kNil && v.kind != ValueKind::kFalse;
}

// Equivalence used by `==`: structural on literals, symbols, strings and
// types; identity on arrays, hashes, tables and lambdas; objects compare
// by class (instances carry no state).
bool value_equal(const Value& a, const Value& b);

// Most specific type of a runtime value; array/hash results carry fresh
// identities.
Type type_of(const Value& v);

// Class used for method dispatch on a value.
std::string class_of_value(const Value& v);

std::string print_value(const Value& v);

}  // namespace complang
