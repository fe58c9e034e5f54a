#include "complang/interp.hpp"
#include "complang/natives.hpp"
#include "complang/parser.hpp"
#include "complang/typecheck.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace complang;

namespace {

// Loads `body` as Main.main's body, returns the body's checked type and
// the program outcome.
struct Evaluated {
  LoadResult lr;
  Type type;
  Outcome out;
};

Evaluated eval_body(const std::string& body, const char* schema = nullptr) {
  Evaluated ev;
  std::optional<std::string> s;
  if (schema) s = slurp(corpus_path(schema));
  ev.lr = load_program(
      "class Main\ndef Main.main(u) : (Nil) -> Object =\n  " + body + "\n", s);
  REQUIRE_MESSAGE(ev.lr.ok(),
                  body << ": "
                       << (ev.lr.diags.empty() ? "" : ev.lr.diags[0].message));
  Checker checker(ev.lr.ct, ev.lr.natives,
                  ev.lr.has_schema ? &ev.lr.schema : nullptr, &ev.lr.store);
  auto e = parse_expr_text(body);
  REQUIRE(e);
  TypeEnv env;
  env["self"] = t_nominal("Main");
  env["u"] = t_nil();
  ev.type = checker.check_and_rewrite(*e, env).type;
  ev.out = run_main(ev.lr);
  return ev;
}

std::string type_str(const std::string& body, const char* schema = nullptr) {
  return print_type(eval_body(body, schema).type);
}

Value value_of(const std::string& body, const char* schema = nullptr) {
  Evaluated ev = eval_body(body, schema);
  REQUIRE_MESSAGE(ev.out.kind == OutcomeKind::kValue,
                  body << ": " << (ev.out.blame
                                       ? blame_to_string(*ev.out.blame)
                                       : "fuel"));
  return ev.out.value;
}

std::string check_error_of(const std::string& body,
                           const char* schema = nullptr) {
  std::optional<std::string> s;
  if (schema) s = slurp(corpus_path(schema));
  LoadResult lr = load_program(
      "class Main\ndef Main.main(u) : (Nil) -> Object =\n  " + body + "\n", s);
  REQUIRE_FALSE(lr.ok());
  REQUIRE_FALSE(lr.diags.empty());
  return lr.diags[0].code;
}

}  // namespace

TEST_CASE("boolean connectives are exact on known operands") {
  CHECK(type_str("true.land(false)") == "False");
  CHECK(type_str("true.land(true)") == "True");
  CHECK(type_str("false.lor(true)") == "True");
  CHECK(type_str("false.lor(false)") == "False");
  CHECK(type_str("true.land(1 == 1)") == "%bool");
  CHECK(value_of("true.land(false)").kind == ValueKind::kFalse);
  CHECK(value_of("false.lor(true)").kind == ValueKind::kTrue);
}

TEST_CASE("arithmetic folds on singletons and widens otherwise") {
  CHECK(type_str("4.plus(4)") == "Sing(8)");
  CHECK(type_str("4.times(0)") == "Sing(0)");
  CHECK(type_str("[1, 2].size().plus(1)") == "Integer");
  CHECK(value_of("2.plus(3).times(7)").i == 35);
}

TEST_CASE("nil arguments to arithmetic blame instead of crashing") {
  Evaluated ev = eval_body("1.plus([9].fetchAt(5))");
  REQUIRE(ev.out.kind == OutcomeKind::kBlame);
  CHECK(ev.out.blame->message.find("expects an integer") !=
        std::string::npos);
}

TEST_CASE("string size is exact on literals") {
  CHECK(type_str("\"hello\".size()") == "Sing(5)");
  CHECK(type_str("\"\".size()") == "Sing(0)");
  CHECK(value_of("\"hello\".size()").i == 5);
}

TEST_CASE("concat widens the receiver to a plain string") {
  CHECK(type_str("\"ab\".concat(\"cd\")") == "String");
  Value v = value_of("\"ab\".concat(\"cd\")");
  REQUIRE(v.kind == ValueKind::kString);
  CHECK(v.str->content == "abcd");
  CHECK_FALSE(v.str->is_const);
}

TEST_CASE("tuple reads are index-exact, generic reads use the element type") {
  CHECK(type_str("[1, \"a\"].first()") == "Sing(1)");
  CHECK(type_str("[1, \"a\"].fetchAt(1)") == "CStr(\"a\")");
  CHECK(type_str("[1].fetchAt(5)") == "Nil");
  CHECK(value_of("[1].fetchAt(5)").kind == ValueKind::kNil);
  Value v = value_of("[1, \"a\"].fetchAt(1)");
  REQUIRE(v.kind == ValueKind::kString);
  CHECK(v.str->content == "a");
}

TEST_CASE("push appends and promotes the static type") {
  CHECK(type_str("[1, 2].push(\"x\")") == "Array<Sing(1) or Sing(2) or String>");
  Value v = value_of("[1, 2].push(\"x\")");
  REQUIRE(v.kind == ValueKind::kArray);
  REQUIRE(v.arr->elems.size() == 3);
  CHECK(v.arr->elems[2].str->content == "x");
}

TEST_CASE("setFirst writes through and joins the element type") {
  CHECK(value_of("[1, 2].setFirst(9).first()").i == 9);
}

TEST_CASE("map rebuilds from the block type, each returns the receiver") {
  CHECK(type_str("[1, 2].map() { |v| v.plus(1) }") == "Array<Integer>");
  CHECK(type_str("[1, 2].map() { |v| \"s\" }") == "Array<CStr(\"s\")>");
  Value mapped = value_of("[1, 2, 3].map() { |v| v.times(2) }");
  REQUIRE(mapped.arr->elems.size() == 3);
  CHECK(mapped.arr->elems[2].i == 6);
  Value eached = value_of("[1, 2].each() { |v| v }");
  REQUIRE(eached.kind == ValueKind::kArray);
  CHECK(eached.arr->elems.size() == 2);
  CHECK(type_str("[1, 2].each() { |v| v }") == "[Sing(1), Sing(2)]");
}

TEST_CASE("hash reads are key-exact and absent keys type at Nil") {
  CHECK(type_str("{a: 1, b: \"x\"}.fetch(:a)") == "Sing(1)");
  CHECK(type_str("{a: 1, b: \"x\"}.fetch(:b)") == "CStr(\"x\")");
  CHECK(type_str("{a: 1}.fetch(:zz)") == "Nil");
  CHECK(value_of("{a: 1}.fetch(:zz)").kind == ValueKind::kNil);
  CHECK(value_of("{a: 1, b: \"x\"}.fetch(:a)").i == 1);
}

TEST_CASE("store merges entries and the type follows") {
  CHECK(value_of("{a: 1}.store({b: 2}).fetch(:b)").i == 2);
  CHECK(value_of("{a: 1}.store({a: 9}).fetch(:a)").i == 9);
  CHECK(value_of("{a: 1}.store({b: 2}).key?(:b)").kind == ValueKind::kTrue);
  CHECK(value_of("{a: 1}.key?(:b)").kind == ValueKind::kFalse);
  std::string t = type_str("{a: 1}.store({b: 2})");
  CHECK(t.find("a:") != std::string::npos);
  CHECK(t.find("b:") != std::string::npos);
}

TEST_CASE("type reflection is callable from surface programs") {
  CHECK(value_of("@(Array<Integer>).kindIs(:generic)").kind ==
        ValueKind::kTrue);
  CHECK(value_of("@(Array<Integer>).kindIs(:tuple)").kind ==
        ValueKind::kFalse);
  Value elem = value_of("@(Array<Integer>).valueType()");
  REQUIRE(elem.kind == ValueKind::kType);
  CHECK(print_type(elem.type) == "Integer");
  Value merged = value_of("@({a: Integer}).mergeType(@({b: String}))");
  REQUIRE(merged.kind == ValueKind::kType);
  CHECK(print_type(merged.type) == "{a: Integer, b: String}");
}

TEST_CASE("table handles carry the declared row type") {
  CHECK(type_str("(new Schema).table(:users)", "discourse.schema") ==
        "Table<{id: Integer, username: String, staged: %bool}>");
  Value v = value_of("(new Schema).table(:users)", "discourse.schema");
  REQUIRE(v.kind == ValueKind::kTable);
  CHECK(v.table->base == "users");
  Value looked = value_of("(new Schema).lookupType(:users)",
                          "discourse.schema");
  REQUIRE(looked.kind == ValueKind::kType);
  CHECK(print_type(looked.type) ==
        "{id: Integer, username: String, staged: %bool}");
}

TEST_CASE("unknown tables fail during comp evaluation") {
  CHECK(check_error_of("(new Schema).table(:missing)", "discourse.schema") ==
        codes::kCompEvalBlame);
}

TEST_CASE("joins requires a declared association") {
  CHECK(type_str("(new Schema).table(:users).joins(:emails)",
                 "discourse.schema") ==
        "Table<{id: Integer, username: String, staged: %bool, emails: "
        "{id: Integer, email: String, user_id: Integer}}>");
  CHECK(type_str("(new Schema).table(:users).includes(:emails)",
                 "discourse.schema") ==
        type_str("(new Schema).table(:users).joins(:emails)",
                 "discourse.schema"));
  CHECK(check_error_of("(new Schema).table(:emails).joins(:users)",
                       "discourse.schema") == codes::kCompEvalBlame);
}

TEST_CASE("row fixtures drive exists? and count") {
  CHECK(value_of("(new Schema).table(:users).count()", "discourse.schema").i ==
        2);
  CHECK(value_of("(new Schema).table(:users).exists?({username: "
                 "\"DonaldEKnuth\"})",
                 "discourse.schema")
            .kind == ValueKind::kTrue);
  CHECK(value_of("(new Schema).table(:users).exists?({username: "
                 "\"nobody\"})",
                 "discourse.schema")
            .kind == ValueKind::kFalse);
  CHECK(value_of("(new Schema).table(:users).where({staged: false}).count()",
                 "discourse.schema")
            .i == 1);
  CHECK(value_of("(new Schema).table(:users).where([\"id = ?\", 1]).count()",
                 "discourse.schema")
            .i == 2);
}

TEST_CASE("joined conditions pair rows through the foreign key") {
  const char* q =
      "(new Schema).table(:users).joins(:emails)"
      ".exists?({staged: false, emails: {email: \"dek@example.com\"}})";
  CHECK(value_of(q, "discourse.schema").kind == ValueKind::kTrue);
  const char* wrong_user =
      "(new Schema).table(:users).joins(:emails)"
      ".exists?({staged: true, emails: {email: \"dek@example.com\"}})";
  CHECK(value_of(wrong_user, "discourse.schema").kind == ValueKind::kFalse);
}
