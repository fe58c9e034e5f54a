#include <chrono>
#include <cstdio>
#include <sstream>

#include "complang/interp.hpp"
#include "complang/parser.hpp"
#include "complang/subtype.hpp"
#include "complang/typecheck.hpp"
#include "doctest.h"
#include "generators.hpp"
#include "support.hpp"

using namespace complang;

namespace {

void report(const char* name, bool ok) {
  std::printf("[acceptance] %-28s %s\n", name, ok ? "pass" : "FAIL");
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// One pass over the generated corpus feeds both the soundness and the
// judgment-equivalence criteria.
struct GeneratedSuite {
  int programs = 0;
  int load_failures = 0;
  int stuck = 0;
  int type_violations = 0;
  int equivalence_failures = 0;
  int value_outcomes = 0;
  int blame_outcomes = 0;
  int fuel_outcomes = 0;
  double seconds = 0;
  std::string first_problem;

  void note(const std::string& what, const std::string& src) {
    if (first_problem.empty()) first_problem = what + "\n" + src;
  }
};

const GeneratedSuite& generated_suite() {
  static const GeneratedSuite suite = [] {
    GeneratedSuite s;
    ProgramGen gen(20260815);
    std::string schema = ProgramGen::schema_source();
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < 1000; ++i) {
      std::string src = gen.next();
      ++s.programs;
      LoadResult lr = load_program(src, schema);
      if (!lr.ok()) {
        ++s.load_failures;
        s.note("generated program failed to check: " +
                   (lr.diags.empty() ? std::string("?")
                                     : lr.diags[0].message),
               src);
        continue;
      }
      Checker checker(lr.ct, lr.natives, &lr.schema, &lr.store);
      Type main_type;
      bool methods_ok = true;
      for (const MethodEntry* e : lr.ct.all_entries()) {
        if (e->origin != MethodOrigin::kUser) continue;
        try {
          TypeEnv env;
          env["self"] = t_nominal(e->cls);
          env[e->param] = deep_copy_type(e->sig.arg_bound);
          Checker::Typed t = checker.check_and_rewrite(e->body, env);
          TypeEnv env2;
          env2["self"] = t_nominal(e->cls);
          env2[e->param] = deep_copy_type(e->sig.arg_bound);
          Type t2 = checker.typecheck(t.expr, env2);
          if (!type_equal(t.type, t2)) {
            ++s.equivalence_failures;
            s.note("types differ for " + e->cls + "." + e->name + ": " +
                       print_type(t.type) + " vs " + print_type(t2),
                   src);
            methods_ok = false;
          }
          if (e->cls == "Main" && e->name == "main") main_type = t.type;
        } catch (const CheckError& ce) {
          ++s.equivalence_failures;
          s.note("re-check threw for " + e->cls + "." + e->name + ": " +
                     ce.diag.message,
                 src);
          methods_ok = false;
        }
      }
      if (!methods_ok || !main_type.defined()) {
        if (!main_type.defined()) {
          ++s.equivalence_failures;
          s.note("no Main.main entry", src);
        }
        continue;
      }
      try {
        Outcome o = run_main(lr, 100000);
        switch (o.kind) {
          case OutcomeKind::kValue: {
            ++s.value_outcomes;
            Type rt = type_of(o.value);
            if (!subtype(lr.ct.hierarchy(), rt, main_type, nullptr)) {
              ++s.type_violations;
              s.note("value type " + print_type(rt) +
                         " escapes static type " + print_type(main_type),
                     src);
            }
            break;
          }
          case OutcomeKind::kBlame: {
            ++s.blame_outcomes;
            bool legitimate =
                o.blame->kind == BlameKind::kNilReceiver ||
                o.blame->message.find("expects") != std::string::npos;
            if (!legitimate) {
              ++s.stuck;
              s.note("unexpected blame: " + blame_to_string(*o.blame), src);
            }
            break;
          }
          case OutcomeKind::kFuel:
            ++s.fuel_outcomes;
            break;
        }
      } catch (...) {
        ++s.stuck;
        s.note("evaluator threw", src);
      }
    }
    s.seconds = seconds_since(t0);
    return s;
  }();
  return suite;
}

}  // namespace

TEST_CASE("generated programs reduce to a fitting value, blame or fuel") {
  const GeneratedSuite& s = generated_suite();
  bool ok = s.programs >= 1000 && s.load_failures == 0 && s.stuck == 0 &&
            s.type_violations == 0 && s.seconds < 60.0;
  report("soundness (1000 programs)", ok);
  CHECK(s.programs >= 1000);
  CHECK(s.load_failures == 0);
  CHECK(s.stuck == 0);
  CHECK(s.type_violations == 0);
  CHECK(s.value_outcomes > 0);
  CHECK_MESSAGE(s.seconds < 60.0, s.seconds << "s");
  INFO(s.first_problem);
  CHECK(s.first_problem.empty());
  MESSAGE("outcomes: " << s.value_outcomes << " values, " << s.blame_outcomes
                       << " blames, " << s.fuel_outcomes << " fuel, "
                       << s.seconds << "s");
}

TEST_CASE("rewriting and re-typechecking agree on every method") {
  const GeneratedSuite& s = generated_suite();
  bool ok = s.programs >= 1000 && s.equivalence_failures == 0;
  report("judgment equivalence", ok);
  CHECK(s.programs >= 1000);
  INFO(s.first_problem);
  CHECK(s.equivalence_failures == 0);
}

TEST_CASE("schema-backed exists? chains check and misuse is rejected") {
  LoadResult fig1 = load_corpus("fig1.lc", "discourse.schema");
  LoadResult fig2 = load_corpus("fig2.lc", "discourse.schema");
  LoadResult bad1 = load_corpus("fig1_bad.lc", "discourse.schema");
  LoadResult bad2 = load_corpus("fig2_bad.lc", "discourse.schema");
  std::string r1 = fig1.ok() ? render_rewritten(fig1) : "";
  std::string r2 = fig2.ok() ? render_rewritten(fig2) : "";
  std::size_t checks = 0;
  for (std::size_t at = r1.find("check["); at != std::string::npos;
       at = r1.find("check[", at + 1)) {
    ++checks;
  }
  const char* golden =
      "Table<{id: Integer, username: String, staged: %bool, "
      "emails: {id: Integer, email: String, user_id: Integer}}>";
  bool ok = fig1.ok() && fig2.ok() && checks == 2 &&
            r2.find(golden) != std::string::npos && !bad1.ok() &&
            !bad2.ok() && has_code(bad1.diags, codes::kArgMismatch) &&
            has_code(bad2.diags, codes::kArgMismatch);
  report("query type golden", ok);
  REQUIRE(fig1.ok());
  REQUIRE(fig2.ok());
  CHECK(checks == 2);
  CHECK(r2.find(golden) != std::string::npos);
  CHECK_FALSE(bad1.ok());
  CHECK(has_code(bad1.diags, codes::kArgMismatch));
  CHECK_FALSE(bad2.ok());
  CHECK(has_code(bad2.diags, codes::kArgMismatch));
}

TEST_CASE("heterogeneous hash chain lands on String without casts") {
  LoadResult lr = load_corpus("fig4.lc");
  bool loaded = lr.ok();
  std::string rewritten = loaded ? render_rewritten(lr) : "";
  bool typed_string =
      rewritten.find("check[String]") != std::string::npos &&
      rewritten.find("check[Array<String>]") != std::string::npos;
  bool ran = false;
  if (loaded) {
    Outcome o = run_main(lr);
    ran = o.kind == OutcomeKind::kValue &&
          o.value.kind == ValueKind::kString &&
          o.value.str->content == "Paris";
  }
  bool ok = loaded && typed_string && ran;
  report("hash field precision", ok);
  REQUIRE(loaded);
  CHECK(typed_string);
  CHECK(ran);
}

TEST_CASE("raw SQL fragments are typechecked against the schema") {
  LoadResult bad = load_corpus("fig5.lc", "discourse_sql.schema");
  LoadResult good = load_corpus("fig5_ok.lc", "discourse_sql.schema");
  const Diagnostic* d = find_code(bad.diags, codes::kSqlTypeMismatch);
  const char* golden =
      "SELECT * FROM `posts` INNER JOIN `topics` ON a.id = b.a_id WHERE "
      "topics.title IN (SELECT topic_id FROM topic_allowed_groups WHERE "
      "`group_id` = [Integer])";
  bool ok = !bad.ok() && d != nullptr && d->note == golden && good.ok();
  report("sql fragment golden", ok);
  CHECK_FALSE(bad.ok());
  REQUIRE(d != nullptr);
  CHECK(d->note == golden);
  CHECK(good.ok());
}

TEST_CASE("type-level effects gate comp signatures") {
  LoadResult lr = load_corpus("fig6.lc");
  bool ok = !lr.ok() && lr.diags.size() == 3 &&
            lr.diags[0].code == codes::kEffNonTerminating &&
            lr.diags[1].code == codes::kEffLoop &&
            lr.diags[2].code == codes::kEffBlock;
  report("type-level effects", ok);
  CHECK_FALSE(lr.ok());
  REQUIRE(lr.diags.size() == 3);
  CHECK(lr.diags[0].code == codes::kEffNonTerminating);
  CHECK(lr.diags[1].code == codes::kEffLoop);
  CHECK(lr.diags[2].code == codes::kEffBlock);
}

TEST_CASE("weak updates widen in place and refuse to break old checks") {
  LoadResult lr = load_corpus("weak.lc");
  bool widened = lr.ok() && render_rewritten(lr).find(
                                "check[[Integer or String, String]]") !=
                                std::string::npos;
  bool ran = false;
  if (lr.ok()) {
    Outcome o = run_main(lr);
    ran = o.kind == OutcomeKind::kValue;
  }
  LoadResult bad = load_corpus("weak_bad.lc");
  bool replay = !bad.ok() && has_code(bad.diags, codes::kReplay);
  bool ok = widened && ran && replay;
  report("weak type updates", ok);
  CHECK(widened);
  CHECK(ran);
  CHECK_FALSE(bad.ok());
  CHECK(has_code(bad.diags, codes::kReplay));
}

TEST_CASE("schema drift between check and run is blamed with both types") {
  std::ostringstream out, err;
  int rc = cmd_run(corpus_path("consistency.lc"),
                   corpus_path("discourse.schema"), RunOptions{}, out, err);
  std::string msg = err.str();
  bool has_types = msg.find("was checked against") != std::string::npos ||
                   (msg.find("old") != std::string::npos &&
                    msg.find("new") != std::string::npos) ||
                   msg.find("username") != std::string::npos;
  std::ostringstream out2, err2;
  int rc2 = cmd_run(corpus_path("consistency_ok.lc"),
                    corpus_path("discourse.schema"), RunOptions{}, out2, err2);
  bool ok = rc == 3 && msg.find("Consistency") != std::string::npos &&
            has_types && rc2 == 0;
  report("consistency guard", ok);
  CHECK(rc == 3);
  CHECK(msg.find("Consistency") != std::string::npos);
  CHECK_MESSAGE(has_types, msg);
  CHECK(rc2 == 0);
}

TEST_CASE("known integers fold through arithmetic at check time") {
  LoadResult lr = load_corpus("sing.lc");
  bool ok = lr.ok() && render_rewritten(lr).find("check[Sing(2)] 1.plus(1)") !=
                           std::string::npos;
  report("constant folding", ok);
  REQUIRE(lr.ok());
  CHECK(render_rewritten(lr).find("check[Sing(2)] 1.plus(1)") !=
        std::string::npos);
}

TEST_CASE("subtyping and join obey their laws on sampled types") {
  ClassHierarchy h = test_hierarchy();
  TypeGen gen(424242, h);
  auto t0 = std::chrono::steady_clock::now();
  int samples = 0;
  int failures = 0;
  for (int i = 0; i < 2500; ++i) {
    Type a = gen.sample();
    Type b = gen.sample();
    // Reflexivity.
    ++samples;
    if (!subtype(h, a, a, nullptr)) ++failures;
    // Nil bottom, Object top.
    ++samples;
    if (!subtype(h, t_nil(), a, nullptr) || !subtype(h, a, t_object(), nullptr)) {
      ++failures;
    }
    // Join is an upper bound of both sides.
    ++samples;
    Type j = join(h, a, b, nullptr);
    if (!subtype(h, a, j, nullptr) || !subtype(h, b, j, nullptr)) ++failures;
    // Transitivity along constructed supertype chains.
    ++samples;
    Type w = gen.widen(a);
    Type ww = gen.widen(w);
    if (!subtype(h, a, w, nullptr) || !subtype(h, w, ww, nullptr) ||
        !subtype(h, a, ww, nullptr)) {
      ++failures;
    }
  }
  bool bools = subtype(h, t_true(), t_bool(), nullptr) &&
               subtype(h, t_false(), t_bool(), nullptr) &&
               !subtype(h, t_bool(), t_true(), nullptr);
  samples += 3;
  double secs = seconds_since(t0);
  bool ok = samples >= 10000 && failures == 0 && bools && secs < 10.0;
  report("subtype/join properties", ok);
  CHECK(samples >= 10000);
  CHECK(failures == 0);
  CHECK(bools);
  CHECK_MESSAGE(secs < 10.0, secs << "s");
}
