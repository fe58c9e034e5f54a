#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "complang/span.hpp"
#include "complang/type.hpp"

namespace complang {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;
struct Value;  // runtime value, defined in value.hpp

enum class ExprKind : std::uint8_t {
  kNil,
  kTrue,
  kFalse,
  kInt,
  kStr,
  kSym,
  kVar,
  kSelf,
  kTSelf,
  kNew,
  kSeq,
  kEq,
  kIf,
  kWhile,
  kCall,
  kCheckedCall,
  kArray,
  kHash,
  kTypeLit,
  // Machine-internal nodes: an already-computed value sitting inside an
  // evaluation context, and the hole of a saved context. Never produced
  // by the parser or the rewriter.
  kValue,
  kHole,
};

struct Block {
  std::string param;
  ExprPtr body;
};

// Snapshot of a comp-type evaluation, carried on the checked call it
// produced so the runtime guard can re-evaluate and compare.
struct ConsistencyRecord {
  std::string param;  // binder the type expressions use for the argument
  ExprPtr arg_texpr;
  ExprPtr ret_texpr;
  Type recv_type;
  Type arg_type;
  std::optional<Type> block_type;
  Type arg_eval;  // evaluated argument bound
  Type ret_eval;  // evaluated result type, equals the carried bound
};

struct Expr {
  ExprKind kind;
  Span span;
  long long int_value = 0;
  // kStr: content; kSym: symbol; kVar: name; kNew: class name;
  // kCall/kCheckedCall: method name.
  std::string str;
  // kSeq/kEq: [lhs, rhs]; kIf: [cond, then, else]; kWhile: [cond, body];
  // kCall/kCheckedCall: [recv, arg]; kArray: elements; kHash: values.
  std::vector<ExprPtr> kids;
  std::vector<std::string> keys;  // kHash: keys, parallel to kids
  Type type;                      // kTypeLit value; kCheckedCall bound
  std::optional<Block> block;     // kCall/kCheckedCall trailing block
  std::shared_ptr<const ConsistencyRecord> guard;  // comp-signature calls
  std::shared_ptr<const Value> runtime_value;      // kValue only
};

ExprPtr mk_nil(Span s);
ExprPtr mk_true(Span s);
ExprPtr mk_false(Span s);
ExprPtr mk_int(long long v, Span s);
ExprPtr mk_str(const std::string& content, Span s);
ExprPtr mk_sym(const std::string& sym, Span s);
ExprPtr mk_var(const std::string& name, Span s);
ExprPtr mk_self(Span s);
ExprPtr mk_tself(Span s);
ExprPtr mk_new(const std::string& cls, Span s);
ExprPtr mk_seq(ExprPtr a, ExprPtr b, Span s);
ExprPtr mk_eq(ExprPtr a, ExprPtr b, Span s);
ExprPtr mk_if(ExprPtr c, ExprPtr t, ExprPtr e, Span s);
ExprPtr mk_while(ExprPtr c, ExprPtr body, Span s);
ExprPtr mk_call(ExprPtr recv, const std::string& method, ExprPtr arg,
                std::optional<Block> block, Span s);
ExprPtr mk_checked(Type bound, ExprPtr recv, const std::string& method,
                   ExprPtr arg, std::optional<Block> block,
                   std::shared_ptr<const ConsistencyRecord> guard, Span s);
ExprPtr mk_array(std::vector<ExprPtr> elems, Span s);
ExprPtr mk_hash(std::vector<std::string> keys, std::vector<ExprPtr> vals,
                Span s);
ExprPtr mk_type_lit(Type t, Span s);
ExprPtr mk_value_expr(std::shared_ptr<const Value> v, Span s);
ExprPtr mk_hole(Span s);

// Structural equality ignoring spans; type literals compare by type_equal
// and value nodes by pointer.
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

enum class Terminates : std::uint8_t { kYes, kNo, kBlockDep };
enum class Pure : std::uint8_t { kYes, kNo };

struct ClassDecl {
  std::string name;
  std::string parent;  // empty: Object
  Span span;
};

struct DefDecl {
  std::string cls;
  std::string method;
  std::string param;
  Type arg_type;
  Type ret_type;
  ExprPtr body;
  Span span;
};

// `lib` declarations always carry expressions for both positions; a plain
// `(T)` position becomes the type literal `@(T)`.
struct LibDecl {
  std::string cls;
  std::string method;
  std::string param;
  ExprPtr arg_expr;
  Type arg_bound;
  ExprPtr ret_expr;
  Type ret_bound;
  bool arg_is_comp = false;
  bool ret_is_comp = false;
  Terminates terminates = Terminates::kNo;
  Pure pure = Pure::kNo;
  Span span;
};

using Decl = std::variant<ClassDecl, DefDecl, LibDecl>;

struct Program {
  std::vector<Decl> decls;
};

// Surface rendering; checked calls print as `check[T] recv.m(arg)`.
std::string print_expr(const ExprPtr& e);
std::string print_program(const Program& p);

}  // namespace complang
