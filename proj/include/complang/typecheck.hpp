#pragma once

#include <map>
#include <memory>
#include <string>

#include "complang/ast.hpp"
#include "complang/class_table.hpp"
#include "complang/diagnostics.hpp"
#include "complang/natives.hpp"
#include "complang/schema.hpp"
#include "complang/subtype.hpp"

namespace complang {

using TypeEnv = std::map<std::string, Type>;

// Thrown on the first error in a judgment; check_program collects one per
// method body.
struct CheckError {
  Diagnostic diag;
};

struct CheckerOptions {
  long long comp_fuel = 100000;  // per comp-type evaluation
};

struct CheckerStats {
  long long comp_evaluations = 0;
};

// The rewriting type checker. Comp signatures are first checked as plain
// programs over the unrefined table (every variable a Type), then
// evaluated at each call site under the receiver/argument/block types;
// the call is rewritten to carry the evaluated result type and a
// consistency record for the runtime guard. Receiver mutations declared
// by a method (weak updates) run between the argument and result
// evaluations and replay the constraints recorded so far.
class Checker {
 public:
  Checker(ClassTable& ct, const NativeRegistry& natives,
          SchemaRegistry* schema, ConstraintStore* store,
          CheckerOptions opts = {});

  struct Typed {
    ExprPtr expr;
    Type type;
  };

  // Rewriting judgment. Throws CheckError.
  Typed check_and_rewrite(const ExprPtr& e, const TypeEnv& env);

  // Plain judgment over rewritten expressions: no rewriting and no comp
  // evaluation; a checked call types at its carried bound. Throws
  // CheckError.
  Type typecheck(const ExprPtr& e, const TypeEnv& env);

  // Checks every user method body against its signature and installs the
  // rewritten bodies. Returns all diagnostics, one per failing method.
  Diagnostics check_program();

  const CheckerStats& stats() const { return stats_; }

 private:
  Typed check_call(const ExprPtr& e, const TypeEnv& env);
  // Types a comp signature's expressions over the unrefined table and
  // caches the rewritten forms.
  void ensure_comp_checked(const MethodEntry& entry);
  Type eval_comp_type(const ExprPtr& texpr, const Env& env, Span site);
  void validate_type_names(const Type& t, Span site);
  ConstraintStore& store() { return store_ ? *store_ : scratch_; }

  ClassTable& ct_;
  const NativeRegistry& natives_;
  SchemaRegistry* schema_;
  ConstraintStore* store_;
  CheckerOptions opts_;
  CheckerStats stats_;
  ConstraintStore scratch_;

  std::unique_ptr<ClassTable> unrefined_;
  std::unique_ptr<Checker> comp_checker_;
  std::map<const Expr*, ExprPtr> comp_cache_;
};

}  // namespace complang
