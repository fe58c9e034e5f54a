#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "complang/class_table.hpp"
#include "complang/diagnostics.hpp"
#include "complang/natives.hpp"
#include "complang/schema.hpp"
#include "complang/subtype.hpp"
#include "complang/typecheck.hpp"

namespace complang {

// A checked program: prelude plus user declarations, with every user body
// rewritten. `status` is kOk exactly when `diags` is empty.
struct LoadResult {
  ClassTable ct;
  NativeRegistry natives;
  SchemaRegistry schema;
  bool has_schema = false;
  Program program;
  ConstraintStore store;
  Diagnostics diags;
  ExitStatus status = ExitStatus::kOk;

  bool ok() const { return status == ExitStatus::kOk; }
};

// Parse, merge onto the prelude, run the termination/purity analysis over
// comp type code, type check and rewrite. `comp_fuel` bounds each comp
// type evaluation.
LoadResult load_program(const std::string& source,
                        const std::optional<std::string>& schema_source,
                        long long comp_fuel = 100000);

// `true` when the program constructs a Schema handle anywhere; used to
// require --schema up front.
bool program_uses_schema(const Program& p);

// The user program with rewritten bodies, in declaration order.
std::string render_rewritten(const LoadResult& lr);

struct CheckOptions {
  bool emit_rewritten = false;
  long long comp_fuel = 100000;
};

struct RunOptions {
  long long fuel = 1000000;
  bool trace = false;
};

// CLI entry points; diagnostics go to `err`, values and emitted programs
// to `out`. Return the process exit code.
int cmd_check(const std::string& file, const std::optional<std::string>& schema_file,
              const CheckOptions& opts, std::ostream& out, std::ostream& err);
int cmd_run(const std::string& file, const std::optional<std::string>& schema_file,
            const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sqlcheck(const std::string& schema_file, const std::string& fragment,
                 const std::vector<std::string>& arg_types, std::ostream& out,
                 std::ostream& err);

}  // namespace complang
