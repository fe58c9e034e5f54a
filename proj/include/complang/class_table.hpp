#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "complang/ast.hpp"
#include "complang/diagnostics.hpp"
#include "complang/type.hpp"

namespace complang {

enum class MethodOrigin : std::uint8_t { kUser, kLibrary };

// Plain signatures keep `is_comp == false`; the expressions then are the
// type literals of the bounds, so comp evaluation of a plain signature is
// a constant step.
struct MethodSig {
  bool is_comp = false;
  ExprPtr arg_expr;
  Type arg_bound;
  ExprPtr ret_expr;
  Type ret_bound;
};

struct MethodEntry {
  std::string cls;
  std::string name;
  std::string param;
  MethodOrigin origin = MethodOrigin::kUser;
  MethodSig sig;
  Terminates terminates = Terminates::kNo;  // library annotation
  Pure pure = Pure::kNo;                    // library annotation
  ExprPtr body;            // user methods: surface body
  ExprPtr rewritten_body;  // user methods: filled by check_program
  Span span;
};

class ClassTable {
 public:
  ClassHierarchy& hierarchy() { return hierarchy_; }
  const ClassHierarchy& hierarchy() const { return hierarchy_; }

  // False on duplicate (class, method).
  bool add_entry(MethodEntry entry);

  // Entry declared exactly on `cls`, no inheritance walk.
  const MethodEntry* lookup_exact(const std::string& cls,
                                  const std::string& method) const;
  // Dispatch lookup: walks `cls` up the hierarchy.
  const MethodEntry* lookup(const std::string& cls,
                            const std::string& method) const;
  // All entries with the given method name, any class.
  std::vector<const MethodEntry*> entries_named(const std::string& m) const;

  std::vector<const MethodEntry*> all_entries() const;
  std::vector<MethodEntry*> all_entries_mutable();

  void set_rewritten_body(const std::string& cls, const std::string& method,
                          ExprPtr body);

  // Copy of this table with every comp signature replaced by its plain
  // bounds. Idempotent.
  ClassTable unrefined() const;

 private:
  ClassHierarchy hierarchy_;
  std::map<std::pair<std::string, std::string>, MethodEntry> entries_;
};

// Builds hierarchy and method entries from a parsed program. Reports
// duplicate classes/methods, unknown classes in signatures, comp
// signatures on user methods and override variance violations. Returns
// nullopt when any diagnostic was emitted.
std::optional<ClassTable> build_class_table(const Program& program,
                                            Diagnostics& diags);

// Adds a program's declarations into an existing table (used to merge
// user programs on top of the prelude). Same validation as building.
bool merge_program_into(ClassTable& ct, const Program& program,
                        Diagnostics& diags);

// Override variance and structural checks that need the whole table.
bool validate_structure(ClassTable& ct, Diagnostics& diags);

}  // namespace complang
