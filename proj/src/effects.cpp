#include "complang/effects.hpp"

#include <set>

namespace complang {

namespace {

std::string method_key(const MethodEntry& e) { return e.cls + "." + e.name; }

bool pure_walk(const ClassTable& ct, const ExprPtr& e,
               std::set<std::string>& visiting, std::string* witness);

bool pure_call(const ClassTable& ct, const Expr& call,
               std::set<std::string>& visiting, std::string* witness) {
  for (const MethodEntry* cand : ct.entries_named(call.str)) {
    if (cand->origin == MethodOrigin::kLibrary) {
      if (cand->pure == Pure::kNo) {
        if (witness) *witness = method_key(*cand);
        return false;
      }
    } else {
      std::string key = method_key(*cand);
      if (visiting.count(key)) continue;  // assume pure on cycles
      visiting.insert(key);
      bool ok = pure_walk(ct, cand->body, visiting, witness);
      visiting.erase(key);
      if (!ok) return false;
    }
  }
  if (call.block && !pure_walk(ct, call.block->body, visiting, witness)) {
    return false;
  }
  return true;
}

bool pure_walk(const ClassTable& ct, const ExprPtr& e,
               std::set<std::string>& visiting, std::string* witness) {
  if (!e) return true;
  for (const ExprPtr& kid : e->kids) {
    if (!pure_walk(ct, kid, visiting, witness)) return false;
  }
  if (e->kind == ExprKind::kCall || e->kind == ExprKind::kCheckedCall) {
    return pure_call(ct, *e, visiting, witness);
  }
  return true;
}

struct TerminationWalk {
  const ClassTable& ct;
  std::vector<EffectFailure>& failures;

  void walk(const ExprPtr& e, std::set<std::string>& visiting) {
    if (!e) return;
    if (e->kind == ExprKind::kWhile) {
      failures.push_back({codes::kEffLoop,
                          "type-level code may not contain a loop", e->span});
    }
    for (const ExprPtr& kid : e->kids) walk(kid, visiting);
    if (e->kind == ExprKind::kCall || e->kind == ExprKind::kCheckedCall) {
      call(*e, visiting);
    }
  }

  void call(const Expr& c, std::set<std::string>& visiting) {
    for (const MethodEntry* cand : ct.entries_named(c.str)) {
      if (cand->origin == MethodOrigin::kLibrary) {
        library(c, *cand, visiting);
      } else {
        user(c, *cand, visiting);
      }
    }
  }

  void library(const Expr& c, const MethodEntry& m,
               std::set<std::string>& visiting) {
    switch (m.terminates) {
      case Terminates::kYes:
        break;
      case Terminates::kNo:
        failures.push_back(
            {codes::kEffNonTerminating,
             "call to " + method_key(m) +
                 ", which is not declared terminating, in type-level code",
             c.span});
        return;
      case Terminates::kBlockDep: {
        if (!c.block) break;
        std::string witness;
        if (!expr_is_pure(ct, c.block->body, &witness)) {
          failures.push_back(
              {codes::kEffBlock,
               "block passed to " + method_key(m) +
                   " in type-level code must be pure; it calls " + witness,
               c.block->body->span});
        }
        break;
      }
    }
    if (c.block) walk(c.block->body, visiting);
  }

  void user(const Expr& c, const MethodEntry& m,
            std::set<std::string>& visiting) {
    std::string key = method_key(m);
    if (visiting.count(key)) {
      failures.push_back(
          {codes::kEffRecursion,
           "possible recursion through " + key + " in type-level code",
           c.span});
      return;
    }
    visiting.insert(key);
    walk(m.body, visiting);
    visiting.erase(key);
    if (c.block) walk(c.block->body, visiting);
  }
};

}  // namespace

std::vector<ExprPtr> comp_roots(const ClassTable& ct) {
  std::vector<ExprPtr> roots;
  for (const MethodEntry* e : ct.all_entries()) {
    if (e->origin == MethodOrigin::kLibrary && e->sig.is_comp) {
      roots.push_back(e->sig.arg_expr);
      roots.push_back(e->sig.ret_expr);
    }
  }
  return roots;
}

std::vector<EffectFailure> check_termination(
    const ClassTable& ct, const std::vector<ExprPtr>& roots) {
  std::vector<EffectFailure> failures;
  TerminationWalk w{ct, failures};
  for (const ExprPtr& root : roots) {
    std::set<std::string> visiting;
    w.walk(root, visiting);
  }
  return failures;
}

bool expr_is_pure(const ClassTable& ct, const ExprPtr& e,
                  std::string* witness) {
  std::set<std::string> visiting;
  return pure_walk(ct, e, visiting, witness);
}

}  // namespace complang
