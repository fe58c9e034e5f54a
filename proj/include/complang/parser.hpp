#pragma once

#include <optional>
#include <string>

#include "complang/ast.hpp"
#include "complang/diagnostics.hpp"
#include "complang/schema.hpp"

namespace complang {

struct ParseResult {
  Program program;
  Diagnostics diags;
  bool ok = false;
};

// Parses a `.lc` source unit. Fail-fast: the first syntax error aborts and
// is reported in `diags`.
ParseResult parse_program(const std::string& source);

struct SchemaParseResult {
  SchemaRegistry registry;
  Diagnostics diags;
  bool ok = false;
};

// Parses a `.schema` file (table / assoc / row declarations).
SchemaParseResult parse_schema(const std::string& source);

// Parses a single type in the surface syntax ("Array<Integer or Nil>").
std::optional<Type> parse_type_text(const std::string& text);

// Parses a single expression (used by tests and the embedded prelude).
std::optional<ExprPtr> parse_expr_text(const std::string& text);

}  // namespace complang
