#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "complang/class_table.hpp"
#include "complang/interp.hpp"
#include "complang/schema.hpp"
#include "complang/subtype.hpp"
#include "complang/value.hpp"

namespace complang {

// Services a native implementation may use. Blame is signalled by
// throwing BlameSignal; fuel is shared with the calling machine.
struct NativeCtx {
  const ClassTable* ct = nullptr;
  SchemaRegistry* schema = nullptr;
  ConstraintStore* store = nullptr;
  Interp* interp = nullptr;
  long long* fuel = nullptr;
  Span site;
  Value block;  // lambda value, or nil when the call has no block

  bool has_block() const { return block.kind == ValueKind::kLambda; }
  Value call_block(const Value& arg) {
    return interp->call_lambda(block, arg, *fuel);
  }
};

using NativeFn =
    std::function<Value(NativeCtx&, const Value& recv, const Value& arg)>;

// Weak-update edits the checker applies to the receiver's static type at
// call sites of this method, from the receiver and argument static types.
using WeakEditsFn = std::vector<TypeEdit> (*)(const ClassHierarchy& h,
                                              const Type& recv,
                                              const Type& arg);

struct NativeEntry {
  NativeFn fn;
  WeakEditsFn weak_edits = nullptr;
};

class NativeRegistry {
 public:
  void add(const std::string& cls, const std::string& method, NativeEntry e);
  const NativeEntry* find(const std::string& cls,
                          const std::string& method) const;

 private:
  std::map<std::pair<std::string, std::string>, NativeEntry> entries_;
};

/// Surface source of the built-in library: Bool, Integer, String, Array,
// Hash, Schema and Table methods plus the type-reflection methods that
// comp signatures are written with.
const char* prelude_source();

// Parses the prelude into `ct` and installs an implementation for every
// declaration. Aborts when the embedded prelude is malformed or an
// implementation is missing; both are shipping invariants.
void register_prelude(ClassTable& ct, NativeRegistry& reg);

}  // namespace complang
