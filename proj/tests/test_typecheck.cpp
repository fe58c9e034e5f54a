#include "complang/natives.hpp"
#include "complang/parser.hpp"
#include "complang/typecheck.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace complang;

namespace {

struct Bench {
  ClassTable ct;
  NativeRegistry natives;
  ConstraintStore store;
  Checker checker;

  Bench() : checker(ct, natives, nullptr, &store) {
    register_prelude(ct, natives);
  }
};

Type type_of_expr(Bench& b, const std::string& text) {
  auto e = parse_expr_text(text);
  REQUIRE_MESSAGE(e, text);
  return b.checker.check_and_rewrite(*e, TypeEnv{}).type;
}

std::string diag_of_expr(Bench& b, const std::string& text) {
  auto e = parse_expr_text(text);
  REQUIRE_MESSAGE(e, text);
  try {
    b.checker.check_and_rewrite(*e, TypeEnv{});
  } catch (const CheckError& ce) {
    return ce.diag.code;
  }
  return "";
}

}  // namespace

TEST_CASE("literals check at their exact types") {
  Bench b;
  CHECK(print_type(type_of_expr(b, "nil")) == "Nil");
  CHECK(print_type(type_of_expr(b, "true")) == "True");
  CHECK(print_type(type_of_expr(b, "5")) == "Sing(5)");
  CHECK(print_type(type_of_expr(b, "\"hi\"")) == "CStr(\"hi\")");
  CHECK(print_type(type_of_expr(b, ":k")) == "Sing(:k)");
  CHECK(print_type(type_of_expr(b, "@(Integer)")) == "Type");
  CHECK(print_type(type_of_expr(b, "[1, \"a\"]")) == "[Sing(1), CStr(\"a\")]");
  CHECK(print_type(type_of_expr(b, "{id: 1}")) == "{id: Sing(1)}");
}

TEST_CASE("arithmetic on known integers folds to a singleton") {
  Bench b;
  CHECK(print_type(type_of_expr(b, "1.plus(1)")) == "Sing(2)");
  CHECK(print_type(type_of_expr(b, "6.times(7)")) == "Sing(42)");
  CHECK(print_type(type_of_expr(b, "2.plus(3).times(4)")) == "Sing(20)");
}

TEST_CASE("a rewritten call carries its computed bound") {
  Bench b;
  auto e = parse_expr_text("1.plus(1)");
  REQUIRE(e);
  Checker::Typed out = b.checker.check_and_rewrite(*e, TypeEnv{});
  REQUIRE(out.expr->kind == ExprKind::kCheckedCall);
  CHECK(print_type(out.expr->type) == "Sing(2)");
  CHECK(print_expr(out.expr) == "check[Sing(2)] 1.plus(1)");
}

TEST_CASE("plain library calls stay unchecked") {
  Bench b;
  auto e = parse_expr_text("[1, 2].size()");
  REQUIRE(e);
  Checker::Typed out = b.checker.check_and_rewrite(*e, TypeEnv{});
  CHECK(out.expr->kind == ExprKind::kCall);
  CHECK(print_type(out.type) == "Integer");
}

TEST_CASE("if joins the branch types") {
  Bench b;
  CHECK(print_type(type_of_expr(b, "if true then 1 else \"x\" end")) ==
        "CStr(\"x\") or Sing(1)");
  CHECK(print_type(type_of_expr(b, "if true then 1 else 1 end")) ==
        "Sing(1)");
}

TEST_CASE("argument bound violations name both types") {
  Bench b;
  auto e = parse_expr_text("1.plus(\"x\")");
  REQUIRE(e);
  try {
    b.checker.check_and_rewrite(*e, TypeEnv{});
    FAIL("expected a diagnostic");
  } catch (const CheckError& ce) {
    CHECK(ce.diag.code == codes::kArgMismatch);
    CHECK(ce.diag.message.find("CStr(\"x\")") != std::string::npos);
    CHECK(ce.diag.message.find("Integer") != std::string::npos);
  }
}

TEST_CASE("familiar failure shapes map to stable codes") {
  Bench b;
  CHECK(diag_of_expr(b, "1.frobnicate(2)") == codes::kUnknownMethod);
  CHECK(diag_of_expr(b, "@(Widget)") == codes::kUnknownClass);
  CHECK(diag_of_expr(b, "new Widget") == codes::kUnknownClass);
  CHECK(diag_of_expr(b, "lost") == codes::kUnboundVar);
  CHECK(diag_of_expr(b, "self") == codes::kUnboundVar);
  CHECK(diag_of_expr(b, "1.plus(2) { |v| v }") == codes::kBlockMisuse);
  CHECK(diag_of_expr(b, "[1, 2].map()") == codes::kBlockMisuse);
}

TEST_CASE("the plain judgment refuses bare comp-signature calls") {
  Bench b;
  auto e = parse_expr_text("1.plus(1)");
  REQUIRE(e);
  try {
    b.checker.typecheck(*e, TypeEnv{});
    FAIL("expected a diagnostic");
  } catch (const CheckError& ce) {
    CHECK(ce.diag.message.find("must carry a check") != std::string::npos);
  }
}

TEST_CASE("the plain judgment accepts plain library calls") {
  Bench b;
  auto e = parse_expr_text("[1, 2].size()");
  REQUIRE(e);
  CHECK(print_type(b.checker.typecheck(*e, TypeEnv{})) == "Integer");
}

TEST_CASE("comp type expressions must produce a type") {
  LoadResult lr = load_program(
      "class A\n"
      "lib A.f(x) : (Nil) -> <<1>> Integer [terminates=+, pure=+]\n",
      std::nullopt);
  CHECK_FALSE(lr.ok());
  REQUIRE_FALSE(lr.diags.empty());
  CHECK(lr.diags[0].code == codes::kCompNotAType);
  CHECK(lr.diags[0].message.find("A.f") != std::string::npos);
}

TEST_CASE("comp evaluation failures surface at the call") {
  LoadResult lr = load_program(
      "class A\n"
      "class Main\n"
      "lib A.f(x) : (Nil) -> <<@(Integer).eltOf(@(Sing(0)))>> Integer "
      "[terminates=+, pure=+]\n"
      "def Main.main(u) : (Nil) -> Object = (new A).f()\n",
      std::nullopt);
  CHECK_FALSE(lr.ok());
  CHECK(has_code(lr.diags, codes::kCompEvalBlame));
}

TEST_CASE("comp evaluation is bounded by fuel") {
  LoadResult lr = load_program(slurp(corpus_path("sing.lc")), std::nullopt, 3);
  CHECK_FALSE(lr.ok());
  CHECK(has_code(lr.diags, codes::kCompFuel));
  const Diagnostic* d = find_code(lr.diags, codes::kCompFuel);
  REQUIRE(d != nullptr);
  CHECK(d->message.find("limit 3") != std::string::npos);
}

TEST_CASE("body types must fit the declared return bound") {
  LoadResult lr = load_program(
      "class Main\n"
      "def Main.main(u) : (Nil) -> String = 1.plus(1)\n",
      std::nullopt);
  CHECK_FALSE(lr.ok());
  const Diagnostic* d = find_code(lr.diags, codes::kBodyMismatch);
  REQUIRE(d != nullptr);
  CHECK(d->message.find("Sing(2)") != std::string::npos);
  CHECK(d->message.find("String") != std::string::npos);
}

TEST_CASE("each failing method reports one diagnostic") {
  LoadResult lr = load_program(
      "class A\n"
      "class Main\n"
      "def A.one(x) : (Nil) -> String = 1\n"
      "def A.two(x) : (Nil) -> String = 2\n"
      "def Main.main(u) : (Nil) -> Object = nil\n",
      std::nullopt);
  CHECK_FALSE(lr.ok());
  CHECK(lr.diags.size() == 2);
}

TEST_CASE("weak updates that break an earlier check are refused") {
  LoadResult lr = load_corpus("weak_bad.lc");
  CHECK_FALSE(lr.ok());
  const Diagnostic* d = find_code(lr.diags, codes::kReplay);
  REQUIRE(d != nullptr);
  CHECK(d->message.find("invalidates an earlier check") != std::string::npos);
}

TEST_CASE("weak updates widen tuple element types in place") {
  LoadResult lr = load_corpus("weak.lc");
  REQUIRE_MESSAGE(lr.ok(), (lr.diags.empty() ? "" : lr.diags[0].message));
  std::string rewritten = render_rewritten(lr);
  CHECK(rewritten.find("check[[Integer or String, String]]") !=
        std::string::npos);
}

TEST_CASE("comp signatures are typechecked once and evaluated per call") {
  Bench b;
  auto e = parse_expr_text("1.plus(1) ; 2.plus(2)");
  REQUIRE(e);
  b.checker.check_and_rewrite(*e, TypeEnv{});
  // Two calls, argument and return expression each: four evaluations.
  CHECK(b.checker.stats().comp_evaluations == 4);
}

TEST_CASE("variables read their environment type") {
  Bench b;
  TypeEnv env;
  env["n"] = t_integer();
  auto e = parse_expr_text("n.plus(1)");
  REQUIRE(e);
  Checker::Typed out = b.checker.check_and_rewrite(*e, env);
  CHECK(print_type(out.type) == "Integer");
}

TEST_CASE("heterogeneous hash reads keep per-field precision") {
  LoadResult lr = load_corpus("fig4.lc");
  REQUIRE_MESSAGE(lr.ok(), (lr.diags.empty() ? "" : lr.diags[0].message));
  std::string rewritten = render_rewritten(lr);
  CHECK(rewritten.find("check[Array<String>] self.page().fetch(:info)") !=
        std::string::npos);
  CHECK(rewritten.find("check[String]") != std::string::npos);
}
