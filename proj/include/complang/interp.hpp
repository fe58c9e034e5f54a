#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "complang/ast.hpp"
#include "complang/class_table.hpp"
#include "complang/subtype.hpp"
#include "complang/schema.hpp"
#include "complang/value.hpp"

namespace complang {

class NativeRegistry;

enum class BlameKind : std::uint8_t {
  kNilReceiver,
  kCheckFailed,
  kConsistencyFailed,
  kTypeLevelError,
};

std::string blame_kind_name(BlameKind k);

struct BlameInfo {
  BlameKind kind = BlameKind::kTypeLevelError;
  std::string message;
  // Non-empty when a specific diagnostic code should surface instead of
  // the generic comp-evaluation one (the SQL checker uses this).
  std::string code;
  std::string note;
  Span span;
  std::optional<Type> expected, got;        // kCheckFailed
  std::optional<Type> old_type, new_type;   // kConsistencyFailed
};

enum class OutcomeKind : std::uint8_t { kValue, kBlame, kFuel };

struct Outcome {
  OutcomeKind kind = OutcomeKind::kValue;
  Value value;
  std::optional<BlameInfo> blame;
  long long steps = 0;
};

// Thrown by natives and nested evaluations; the driving machine converts
// it into a blame outcome.
struct BlameSignal {
  BlameInfo info;
};
struct FuelSignal {};

struct InterpOptions {
  bool trace = false;
  std::ostream* trace_out = nullptr;  // defaults to std::cerr when tracing
};

// Small-step machine over rewritten expressions. Each step applies one
// rule to the innermost redex; user-defined calls push the environment
// and the surrounding context, values return through the stack. Library
// calls dispatch to natives, run the consistency guard when the call
// carries one, and compare the result against the carried bound.
class Interp {
 public:
  Interp(const ClassTable& ct, const NativeRegistry& natives,
         SchemaRegistry* schema, ConstraintStore* store,
         InterpOptions opts = {});

  // Shared-fuel form used by nested evaluations (blocks, guards, comp
  // evaluation at check time).
  Outcome run(const ExprPtr& e, Env env, long long& fuel);
  // Owns its budget.
  Outcome run_with_budget(const ExprPtr& e, Env env, long long budget);

  // Invokes a lambda value on one argument; blame and fuel exhaustion
  // propagate as signals.
  Value call_lambda(const Value& lambda, const Value& arg, long long& fuel);

  const ClassTable& class_table() const { return ct_; }
  SchemaRegistry* schema() const { return schema_; }

 private:
  struct StepOut;
  StepOut reduce(const ExprPtr& e, const Env& env, long long& fuel);
  void run_guard(const Expr& call, long long& fuel);
  Value dispatch_library(const Expr& call, const MethodEntry& entry,
                         const Value& recv, const Value& arg, const Env& env,
                         long long& fuel);
  void trace_step(const char* rule, const ExprPtr& before,
                  std::size_t depth);

  const ClassTable& ct_;
  const NativeRegistry& natives_;
  SchemaRegistry* schema_;
  ConstraintStore* store_;
  InterpOptions opts_;
  long long step_no_ = 0;
};

std::string blame_to_string(const BlameInfo& b);

}  // namespace complang
