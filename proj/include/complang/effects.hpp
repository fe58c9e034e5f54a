#pragma once

#include <string>
#include <vector>

#include "complang/ast.hpp"
#include "complang/class_table.hpp"

namespace complang {

struct EffectFailure {
  std::string code;  // EFF001..EFF004
  std::string message;
  Span span;
};

// Collects the comp expressions of every comp library signature in the
// table; these are the roots the termination analysis must cover.
std::vector<ExprPtr> comp_roots(const ClassTable& ct);

// A root is termination-clean when it contains no loop, calls only
// library methods declared terminating (block-dependent methods need a
// pure, termination-clean block) and only user methods that are
// recursion-free and themselves termination-clean. Candidates for a call
// are resolved by method name across all classes, so the analysis is
// conservative. Returns every violation found.
std::vector<EffectFailure> check_termination(const ClassTable& ct,
                                             const std::vector<ExprPtr>& roots);

// Purity: every reachable call must target a library method annotated
// pure or a user method with a pure body; supplied blocks must be pure
// too. Loops and literals are neutral. Optimistic on call-graph cycles.
// On failure `witness` (when non-null) names the offending method.
bool expr_is_pure(const ClassTable& ct, const ExprPtr& e,
                  std::string* witness);

}  // namespace complang
