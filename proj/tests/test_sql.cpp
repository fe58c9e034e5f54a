#include "complang/parser.hpp"
#include "complang/sql.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace complang;
using namespace complang::sql;

namespace {

SchemaRegistry sql_schema() {
  SchemaParseResult r = parse_schema(slurp(corpus_path("discourse_sql.schema")));
  REQUIRE(r.ok);
  return r.registry;
}

Type posts_with_topics(const SchemaRegistry& reg) {
  Type posts = *reg.schema_fh("posts");
  std::vector<std::pair<std::string, Type>> fields = posts.node().fields;
  fields.emplace_back("topics", *reg.schema_fh("topics"));
  return t_finite_hash(std::move(fields));
}

std::vector<std::string> error_codes(const CheckOutcome& out) {
  std::vector<std::string> codes;
  for (const SqlError& e : out.errors) codes.push_back(e.code);
  return codes;
}

}  // namespace

TEST_CASE("well-formed fragments parse into condition trees") {
  auto out = parse_fragment(
      "id = ? AND (topic_id > 3 OR title = 'welcome')", {t_integer()});
  REQUIRE(out.ok());
  REQUIRE(out.ast != nullptr);
  CHECK(out.ast->kind == CondKind::kAnd);
  CHECK(out.ast->a->kind == CondKind::kCompare);
  CHECK(out.ast->b->kind == CondKind::kOr);
}

TEST_CASE("IN subqueries keep their inner condition") {
  auto out = parse_fragment(
      "topics.id IN (SELECT topic_id FROM topic_allowed_groups WHERE "
      "`group_id` = ?)",
      {t_integer()});
  REQUIRE(out.ok());
  CHECK(out.ast->kind == CondKind::kIn);
  CHECK(out.ast->sub.column == "topic_id");
  CHECK(out.ast->sub.table == "topic_allowed_groups");
  REQUIRE(out.ast->sub.where != nullptr);
  CHECK(out.ast->sub.where->lhs.column == "group_id");
}

TEST_CASE("malformed fragments report SQL001") {
  auto out = parse_fragment("WHERE WHERE = = ?", {t_integer()});
  CHECK_FALSE(out.ok());
  REQUIRE_FALSE(out.errors.empty());
  CHECK(out.errors[0].code == "SQL001");
}

TEST_CASE("placeholder arity must match the supplied types") {
  auto missing = parse_fragment("id = ? AND topic_id = ?", {t_integer()});
  CHECK_FALSE(missing.ok());
  CHECK(missing.errors[0].code == "SQL004");
  auto extra = parse_fragment("id = 1", {t_integer()});
  CHECK_FALSE(extra.ok());
  CHECK(extra.errors[0].code == "SQL004");
}

TEST_CASE("unknown columns report SQL002") {
  SchemaRegistry reg = sql_schema();
  Type recv = *reg.schema_fh("posts");
  auto out = check_fragment("flavor = ?", {t_integer()}, recv, reg);
  CHECK_FALSE(out.ok);
  CHECK(error_codes(out) == std::vector<std::string>{"SQL002"});

  auto qualified =
      check_fragment("nowhere.id = ?", {t_integer()}, recv, reg);
  CHECK_FALSE(qualified.ok);
  CHECK(error_codes(qualified) == std::vector<std::string>{"SQL002"});
}

TEST_CASE("column/placeholder type mismatches report SQL003") {
  SchemaRegistry reg = sql_schema();
  Type recv = posts_with_topics(reg);
  auto bad = check_fragment("topics.title = ?", {t_integer()}, recv, reg);
  CHECK_FALSE(bad.ok);
  CHECK(error_codes(bad) == std::vector<std::string>{"SQL003"});
  auto good = check_fragment("topics.title = ?", {t_string()}, recv, reg);
  CHECK(good.ok);
}

TEST_CASE("literal operands carry their own base type") {
  SchemaRegistry reg = sql_schema();
  Type recv = *reg.schema_fh("posts");
  CHECK(check_fragment("id = 3", {}, recv, reg).ok);
  CHECK_FALSE(check_fragment("id = 'three'", {}, recv, reg).ok);
  CHECK(check_fragment("id = NULL", {}, recv, reg).ok);
}

TEST_CASE("subquery membership compares outer column against selected column") {
  SchemaRegistry reg = sql_schema();
  Type recv = posts_with_topics(reg);
  auto bad = check_fragment(
      "topics.title IN (SELECT topic_id FROM topic_allowed_groups WHERE "
      "`group_id` = ?)",
      {t_integer()}, recv, reg);
  CHECK_FALSE(bad.ok);
  CHECK(error_codes(bad) == std::vector<std::string>{"SQL003"});
  auto good = check_fragment(
      "topics.id IN (SELECT topic_id FROM topic_allowed_groups WHERE "
      "`group_id` = ?)",
      {t_integer()}, recv, reg);
  CHECK_MESSAGE(good.ok, (good.errors.empty() ? "" : good.errors[0].message));
}

TEST_CASE("the artificial query names base, joins and placeholder types") {
  SchemaRegistry reg = sql_schema();
  Type recv = posts_with_topics(reg);
  auto out = check_fragment(
      "topics.title IN (SELECT topic_id FROM topic_allowed_groups WHERE "
      "`group_id` = ?)",
      {t_integer()}, recv, reg);
  CHECK(out.artificial ==
        "SELECT * FROM `posts` INNER JOIN `topics` ON a.id = b.a_id WHERE "
        "topics.title IN (SELECT topic_id FROM topic_allowed_groups WHERE "
        "`group_id` = [Integer])");
}

TEST_CASE("base table recovery prefers the table the columns came from") {
  SchemaRegistry reg = sql_schema();
  CHECK(base_table_of(*reg.schema_fh("posts"), reg) == "posts");
  CHECK(base_table_of(posts_with_topics(reg), reg) == "posts");
  CHECK(base_table_of(*reg.schema_fh("topics"), reg) == "topics");
  CHECK_FALSE(base_table_of(t_finite_hash({{"zzz", t_integer()}}), reg)
                  .has_value());
}

TEST_CASE("comparability is base equality with Any as the escape hatch") {
  SchemaRegistry reg = sql_schema();
  // One single-column table per base type.
  SchemaParseResult cols = parse_schema(
      "table ints { c: Integer }\n"
      "table strs { c: String }\n"
      "table bools { c: %bool }\n");
  REQUIRE(cols.ok);
  struct Probe {
    const char* table;
    SqlBase base;
  };
  const Probe probes[] = {{"ints", SqlBase::kInt},
                          {"strs", SqlBase::kStr},
                          {"bools", SqlBase::kBool}};
  const Type args[] = {t_integer(),     t_sing_int(4), t_string(),
                       t_const_string("x"), t_bool(),      t_true(),
                       t_false(),       t_nil(),
                       t_union({t_integer(), t_string()})};
  for (const Probe& p : probes) {
    Type recv = *cols.registry.schema_fh(p.table);
    for (const Type& arg : args) {
      SqlBase ab = base_of_type(arg);
      bool expect_ok = ab == SqlBase::kAny || ab == p.base;
      auto out = check_fragment("c = ?", {arg}, recv, cols.registry);
      CHECK_MESSAGE(out.ok == expect_ok,
                    p.table << " vs " << print_type(arg));
      if (!expect_ok) {
        CHECK(error_codes(out) == std::vector<std::string>{"SQL003"});
      }
    }
  }
  CHECK(base_of_type(t_union({t_integer(), t_string()})) == SqlBase::kAny);
  CHECK(base_of_type(t_nil()) == SqlBase::kAny);
  CHECK(base_of_type(t_sing_int(7)) == SqlBase::kInt);
  CHECK(base_of_type(t_const_string("q")) == SqlBase::kStr);
  CHECK(base_of_type(t_true()) == SqlBase::kBool);
}

TEST_CASE("every comparison operator typechecks both sides") {
  SchemaRegistry reg = sql_schema();
  Type recv = *reg.schema_fh("posts");
  for (const char* op : {"=", "<>", "<", ">"}) {
    std::string frag = std::string("id ") + op + " ?";
    CHECK(check_fragment(frag, {t_integer()}, recv, reg).ok);
    CHECK_FALSE(check_fragment(frag, {t_string()}, recv, reg).ok);
  }
}
