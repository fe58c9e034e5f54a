#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "complang/schema.hpp"
#include "complang/type.hpp"

namespace complang::sql {

// SQL base types; singletons and const strings map onto their base before
// comparison. kAny (NULL literals, untypeable placeholders) compares with
// everything.
enum class SqlBase : std::uint8_t { kInt, kStr, kBool, kAny };

std::string base_name(SqlBase b);
SqlBase base_of_type(const Type& t);

struct SqlError {
  std::string code;  // SQL001..SQL004
  std::string message;
};

enum class OperandKind : std::uint8_t {
  kColumn,
  kInt,
  kStr,
  kPlaceholder,
  kNull,
};

struct Operand {
  OperandKind kind = OperandKind::kNull;
  std::string table;   // qualified column reference; empty when unqualified
  std::string column;
  long long int_value = 0;
  std::string text;          // string literal content
  std::size_t ph_index = 0;  // 1-based placeholder position
  Type ph_type;              // argument type bound to the placeholder
};

struct Cond;

struct Subquery {
  std::string column;
  std::string table;
  std::shared_ptr<Cond> where;  // optional
};

enum class CondKind : std::uint8_t { kCompare, kIn, kAnd, kOr };

struct Cond {
  CondKind kind = CondKind::kCompare;
  Operand lhs;
  std::string op;  // kCompare: =, <>, <, >
  Operand rhs;
  Subquery sub;  // kIn
  std::shared_ptr<Cond> a, b;  // kAnd/kOr
};

struct ParseOutcome {
  std::shared_ptr<Cond> ast;
  std::vector<SqlError> errors;  // SQL001 parse, SQL004 arity
  bool ok() const { return errors.empty(); }
};

// Placeholders are numbered in source order and annotated with the
// matching entry of arg_types; a count mismatch is an arity error.
ParseOutcome parse_fragment(const std::string& text,
                            const std::vector<Type>& arg_types);

// Renders the fragment as a complete query for diagnostics only. The
// base table is recovered from the receiver schema hash, joined tables
// come from its nested hash fields, and the join columns are fixed
// placeholder text since they play no role in checking. Placeholders
// render as [Type].
std::string wrap_artificial(const std::string& fragment,
                            const Type& receiver_schema,
                            const SchemaRegistry* registry,
                            const std::vector<Type>& arg_types);

// Unqualified columns resolve against the receiver's top-level scalar
// columns (falling back to a unique registry table when the receiver has
// none); qualified ones against the joined hash fields or the registry;
// subquery conditions against the subquery's table.
std::vector<SqlError> typecheck_fragment(const Cond& ast,
                                         const Type& receiver_schema,
                                         const SchemaRegistry& registry);

struct CheckOutcome {
  bool ok = false;
  std::vector<SqlError> errors;
  std::string artificial;
};

// Full pipeline: parse, wrap, typecheck.
CheckOutcome check_fragment(const std::string& text,
                            const std::vector<Type>& arg_types,
                            const Type& receiver_schema,
                            const SchemaRegistry& registry);

// First declared table whose full column set is contained in the
// receiver's top-level scalar columns.
std::optional<std::string> base_table_of(const Type& receiver_schema,
                                         const SchemaRegistry& registry);

}  // namespace complang::sql
