#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace complang {

// Well-known class names seeded into every hierarchy.
namespace cls {
inline constexpr const char* kNil = "Nil";
inline constexpr const char* kObject = "Object";
inline constexpr const char* kBool = "Bool";
inline constexpr const char* kTrue = "True";
inline constexpr const char* kFalse = "False";
inline constexpr const char* kType = "Type";
inline constexpr const char* kInteger = "Integer";
inline constexpr const char* kString = "String";
inline constexpr const char* kSymbol = "Symbol";
inline constexpr const char* kArray = "Array";
inline constexpr const char* kHash = "Hash";
inline constexpr const char* kTable = "Table";
inline constexpr const char* kSchema = "Schema";
inline constexpr const char* kLambda = "Lambda";
}  // namespace cls

enum class TypeKind : std::uint8_t {
  kNominal,
  kSingletonInt,
  kSingletonSym,
  kSingletonClass,
  kConstString,
  kUnion,
  kGeneric,
  kFiniteHash,
  kTuple,
};

struct TypeNode;

// Shared handle to a type node. Copies alias the same node; weak updates
// mutate identity-bearing nodes (tuple / finite hash / const string) in
// place so every alias observes the change.
class Type {
 public:
  Type() = default;
  explicit Type(std::shared_ptr<TypeNode> node) : node_(std::move(node)) {}

  bool defined() const { return node_ != nullptr; }
  TypeKind kind() const;
  const TypeNode& node() const { return *node_; }
  TypeNode& mutable_node() { return *node_; }
  const std::shared_ptr<TypeNode>& ptr() const { return node_; }

  bool is_nominal(const std::string& name) const;
  bool is_kind(TypeKind k) const { return defined() && kind() == k; }

 private:
  std::shared_ptr<TypeNode> node_;
};

struct TypeNode {
  TypeKind kind;
  // kNominal: class name; kGeneric: base class name;
  // kSingletonSym: symbol text; kSingletonClass: class name.
  std::string name;
  long long int_value = 0;  // kSingletonInt
  std::string text;         // kConstString content
  // kGeneric: parameters; kTuple: elements; kUnion: members.
  std::vector<Type> elems;
  // kFiniteHash: key order is declaration order.
  std::vector<std::pair<std::string, Type>> fields;
  // Nonzero for tuple / finite hash / const string nodes.
  std::uint64_t identity = 0;
};

// Constructors. Tuple, finite hash and const string nodes get fresh
// identities; everything else is identity-free.
Type t_nominal(const std::string& name);
Type t_sing_int(long long v);
Type t_sing_sym(const std::string& sym);
Type t_sing_class(const std::string& name);
Type t_const_string(const std::string& content);
Type t_tuple(std::vector<Type> elems);
Type t_finite_hash(std::vector<std::pair<std::string, Type>> fields);
Type t_generic(const std::string& base, std::vector<Type> params);
// Flattens, deduplicates, collapses True|False to %bool, sorts members
// canonically; returns the single member when one remains.
Type t_union(std::vector<Type> members);

Type t_nil();
Type t_object();
Type t_bool();
Type t_true();
Type t_false();
Type t_type();
Type t_integer();
Type t_string();
Type t_symbol();
Type t_lambda();

std::uint64_t fresh_type_identity();

// Structural copy with fresh identities on every identity-bearing node.
Type deep_copy_type(const Type& t);

// Canonical printed form (`%bool`, `Sing(5)`, `CStr("s")`, `A<T, U>`,
// `{k: T}`, `[T1, T2]`, `T1 or T2`).
std::string print_type(const Type& t);

// Structural equality; ignores node identities; unions compare after
// canonical sorting.
bool type_equal(const Type& a, const Type& b);

std::string quote_string(const std::string& s);

// Nominal class hierarchy (single inheritance, Object at the root).
class ClassHierarchy {
 public:
  ClassHierarchy();

  // Returns false when the class already exists or the parent is unknown.
  bool add_class(const std::string& name, const std::string& parent);
  bool has_class(const std::string& name) const;
  // nullptr for Object and unknown classes.
  const std::string* parent_of(const std::string& name) const;
  bool nominal_le(const std::string& a, const std::string& b) const;
  // Least common ancestor; falls back to Object.
  std::string lub(const std::string& a, const std::string& b) const;
  std::vector<std::string> class_names() const;

 private:
  std::map<std::string, std::string> parent_;
};

// The nominal class a value of type `t` dispatches through.
std::string class_of_type(const ClassHierarchy& h, const Type& t);

}  // namespace complang
