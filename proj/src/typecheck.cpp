#include "complang/typecheck.hpp"

#include <cassert>
#include <string>

#include "complang/interp.hpp"
#include "complang/value.hpp"

namespace complang {

namespace {

[[noreturn]] void err(Span span, const char* code, std::string message,
                      std::string note = "") {
  throw CheckError{{span, code, std::move(message), std::move(note)}};
}

}  // namespace

Checker::Checker(ClassTable& ct, const NativeRegistry& natives,
                 SchemaRegistry* schema, ConstraintStore* store,
                 CheckerOptions opts)
    : ct_(ct), natives_(natives), schema_(schema), store_(store),
      opts_(opts) {}

void Checker::validate_type_names(const Type& t, Span site) {
  if (!t.defined()) return;
  switch (t.kind()) {
    case TypeKind::kNominal:
    case TypeKind::kSingletonClass:
    case TypeKind::kGeneric:
      if (!ct_.hierarchy().has_class(t.node().name)) {
        err(site, codes::kUnknownClass,
            "unknown class " + t.node().name + " in type " + print_type(t));
      }
      break;
    default:
      break;
  }
  for (const Type& p : t.node().elems) validate_type_names(p, site);
  for (const auto& [k, v] : t.node().fields) validate_type_names(v, site);
}

void Checker::ensure_comp_checked(const MethodEntry& entry) {
  const ExprPtr exprs[2] = {entry.sig.arg_expr, entry.sig.ret_expr};
  if (comp_cache_.count(exprs[0].get()) &&
      comp_cache_.count(exprs[1].get())) {
    return;
  }
  if (!comp_checker_) {
    unrefined_ = std::make_unique<ClassTable>(ct_.unrefined());
    comp_checker_ = std::make_unique<Checker>(*unrefined_, natives_, schema_,
                                              nullptr, opts_);
  }
  TypeEnv tenv;
  tenv[entry.param] = t_type();
  tenv["tself"] = t_type();
  tenv["tblock"] = t_type();
  for (const ExprPtr& te : exprs) {
    if (comp_cache_.count(te.get())) continue;
    Typed out;
    try {
      out = comp_checker_->check_and_rewrite(te, tenv);
    } catch (CheckError& e) {
      e.diag.message = "in the comp type of " + entry.cls + "." + entry.name +
                       ": " + e.diag.message;
      throw;
    }
    if (!type_equal(out.type, t_type())) {
      err(te->span, codes::kCompNotAType,
          "comp type expression of " + entry.cls + "." + entry.name +
              " has type " + print_type(out.type) + ", not Type");
    }
    comp_cache_[te.get()] = out.expr;
  }
}

Type Checker::eval_comp_type(const ExprPtr& texpr, const Env& env,
                             Span site) {
  ++stats_.comp_evaluations;
  Interp machine(ct_, natives_, schema_, nullptr);
  Outcome out = machine.run_with_budget(texpr, env, opts_.comp_fuel);
  switch (out.kind) {
    case OutcomeKind::kFuel:
      err(site, codes::kCompFuel,
          "comp type evaluation ran out of fuel (limit " +
              std::to_string(opts_.comp_fuel) + " steps)");
    case OutcomeKind::kBlame: {
      const BlameInfo& b = *out.blame;
      if (!b.code.empty()) {
        err(site, b.code.c_str(), b.message, b.note);
      }
      err(site, codes::kCompEvalBlame,
          "comp type evaluation failed: " + b.message, b.note);
    }
    case OutcomeKind::kValue:
      break;
  }
  if (out.value.kind != ValueKind::kType) {
    err(site, codes::kCompNotAType,
        "comp type expression produced " + print_value(out.value) +
            ", which is not a type");
  }
  return out.value.type;
}

Checker::Typed Checker::check_call(const ExprPtr& e, const TypeEnv& env) {
  const ClassHierarchy& h = ct_.hierarchy();
  Typed recv = check_and_rewrite(e->kids[0], env);
  std::string dcls = class_of_type(h, recv.type);
  const MethodEntry* entry = ct_.lookup(dcls, e->str);
  if (!entry) {
    err(e->span, codes::kUnknownMethod,
        "unknown method " + dcls + "." + e->str);
  }
  Typed arg = check_and_rewrite(e->kids[1], env);

  bool is_lib = entry->origin == MethodOrigin::kLibrary;
  bool blockdep = is_lib && entry->terminates == Terminates::kBlockDep;
  std::optional<Block> rblock;
  std::optional<Type> block_type;
  if (e->block) {
    if (!blockdep) {
      err(e->span, codes::kBlockMisuse,
          dcls + "." + e->str + " does not take a block");
    }
    TypeEnv benv = env;
    benv[e->block->param] = element_type_of(h, recv.type);
    Typed body = check_and_rewrite(e->block->body, benv);
    rblock = Block{e->block->param, body.expr};
    block_type = body.type;
  } else if (blockdep) {
    err(e->span, codes::kBlockMisuse,
        dcls + "." + e->str + " requires a block");
  }

  if (!is_lib || !entry->sig.is_comp) {
    if (!subtype(h, arg.type, entry->sig.arg_bound, &store(), e->span)) {
      err(e->span, codes::kArgMismatch,
          "argument to " + dcls + "." + e->str + " has type " +
              print_type(arg.type) + ", which does not fit the declared " +
              print_type(entry->sig.arg_bound));
    }
    return {mk_call(recv.expr, e->str, arg.expr, rblock, e->span),
            deep_copy_type(entry->sig.ret_bound)};
  }

  ensure_comp_checked(*entry);
  Env denv;
  denv[entry->param] = v_type(arg.type);
  denv["tself"] = v_type(recv.type);
  denv["tblock"] = v_type(block_type ? *block_type : t_nil());
  const ExprPtr& arg_texpr = comp_cache_.at(entry->sig.arg_expr.get());
  const ExprPtr& ret_texpr = comp_cache_.at(entry->sig.ret_expr.get());

  Type a1 = eval_comp_type(arg_texpr, denv, e->span);
  if (!subtype(h, arg.type, a1, &store(), e->span)) {
    err(e->span, codes::kArgMismatch,
        "argument to " + dcls + "." + e->str + " has type " +
            print_type(arg.type) + ", which does not fit the computed " +
            print_type(a1));
  }
  bool edited = false;
  if (const NativeEntry* nat = natives_.find(entry->cls, entry->name);
      nat && nat->weak_edits) {
    for (const TypeEdit& edit : nat->weak_edits(h, recv.type, arg.type)) {
      edited = true;
      if (auto violation =
              weak_update(h, store(), recv.type, edit, e->span)) {
        err(e->span, codes::kReplay,
            "receiver update by " + dcls + "." + e->str +
                " invalidates an earlier check: " + violation->message);
      }
    }
  }
  Type a2 = eval_comp_type(ret_texpr, denv, e->span);

  // The record feeds the runtime guard, which re-evaluates both type
  // expressions and compares. Its inputs must be snapshots: weak updates
  // rewrite receiver type nodes in place (here or at a later call on the
  // same node), and the guard hunts schema drift, not those edits. When
  // this very call edited the receiver, the argument bound above predates
  // the edit, so re-derive it from the snapshot.
  Type recv_snap = deep_copy_type(recv.type);
  Type arg_snap = deep_copy_type(arg.type);
  std::optional<Type> block_snap;
  if (block_type) block_snap = deep_copy_type(*block_type);
  Type a1_stored = deep_copy_type(a1);
  if (edited) {
    Env denv2;
    denv2[entry->param] = v_type(arg_snap);
    denv2["tself"] = v_type(recv_snap);
    denv2["tblock"] = v_type(block_snap ? *block_snap : t_nil());
    a1_stored = eval_comp_type(arg_texpr, denv2, e->span);
  }
  auto record = std::make_shared<const ConsistencyRecord>(ConsistencyRecord{
      entry->param, arg_texpr, ret_texpr, recv_snap, arg_snap, block_snap,
      a1_stored, deep_copy_type(a2)});
  return {mk_checked(a2, recv.expr, e->str, arg.expr, rblock, record,
                     e->span),
          a2};
}

Checker::Typed Checker::check_and_rewrite(const ExprPtr& e,
                                          const TypeEnv& env) {
  const ClassHierarchy& h = ct_.hierarchy();
  switch (e->kind) {
    case ExprKind::kNil:
      return {e, t_nil()};
    case ExprKind::kTrue:
      return {e, t_true()};
    case ExprKind::kFalse:
      return {e, t_false()};
    case ExprKind::kInt:
      return {e, t_sing_int(e->int_value)};
    case ExprKind::kStr:
      return {e, t_const_string(e->str)};
    case ExprKind::kSym:
      return {e, t_sing_sym(e->str)};
    case ExprKind::kTypeLit:
      validate_type_names(e->type, e->span);
      return {e, t_type()};
    case ExprKind::kVar: {
      auto it = env.find(e->str);
      if (it == env.end()) {
        err(e->span, codes::kUnboundVar, "unbound variable " + e->str);
      }
      return {e, it->second};
    }
    case ExprKind::kSelf: {
      auto it = env.find("self");
      if (it == env.end()) {
        err(e->span, codes::kUnboundVar, "self is not bound here");
      }
      return {e, it->second};
    }
    case ExprKind::kTSelf: {
      auto it = env.find("tself");
      if (it == env.end()) {
        err(e->span, codes::kUnboundVar,
            "tself is only available in comp type expressions");
      }
      return {e, it->second};
    }
    case ExprKind::kNew:
      if (!h.has_class(e->str)) {
        err(e->span, codes::kUnknownClass, "unknown class " + e->str);
      }
      return {e, t_nominal(e->str)};
    case ExprKind::kSeq: {
      Typed a = check_and_rewrite(e->kids[0], env);
      Typed b = check_and_rewrite(e->kids[1], env);
      return {mk_seq(a.expr, b.expr, e->span), b.type};
    }
    case ExprKind::kEq: {
      Typed a = check_and_rewrite(e->kids[0], env);
      Typed b = check_and_rewrite(e->kids[1], env);
      return {mk_eq(a.expr, b.expr, e->span), t_bool()};
    }
    case ExprKind::kIf: {
      Typed c = check_and_rewrite(e->kids[0], env);
      Typed t = check_and_rewrite(e->kids[1], env);
      Typed f = check_and_rewrite(e->kids[2], env);
      return {mk_if(c.expr, t.expr, f.expr, e->span),
              join(h, t.type, f.type, &store(), e->span)};
    }
    case ExprKind::kWhile: {
      Typed c = check_and_rewrite(e->kids[0], env);
      Typed b = check_and_rewrite(e->kids[1], env);
      return {mk_while(c.expr, b.expr, e->span), t_nil()};
    }
    case ExprKind::kArray: {
      std::vector<ExprPtr> elems;
      std::vector<Type> types;
      for (const ExprPtr& kid : e->kids) {
        Typed t = check_and_rewrite(kid, env);
        elems.push_back(t.expr);
        types.push_back(t.type);
      }
      return {mk_array(std::move(elems), e->span),
              t_tuple(std::move(types))};
    }
    case ExprKind::kHash: {
      std::vector<ExprPtr> vals;
      std::vector<std::pair<std::string, Type>> fields;
      for (std::size_t i = 0; i < e->kids.size(); ++i) {
        Typed t = check_and_rewrite(e->kids[i], env);
        vals.push_back(t.expr);
        fields.emplace_back(e->keys[i], t.type);
      }
      return {mk_hash(e->keys, std::move(vals), e->span),
              t_finite_hash(std::move(fields))};
    }
    case ExprKind::kCall:
      return check_call(e, env);
    case ExprKind::kCheckedCall:
    case ExprKind::kValue:
    case ExprKind::kHole:
      break;
  }
  err(e->span, codes::kParse, "internal node in surface expression");
}

Type Checker::typecheck(const ExprPtr& e, const TypeEnv& env) {
  const ClassHierarchy& h = ct_.hierarchy();
  switch (e->kind) {
    case ExprKind::kNil:
      return t_nil();
    case ExprKind::kTrue:
      return t_true();
    case ExprKind::kFalse:
      return t_false();
    case ExprKind::kInt:
      return t_sing_int(e->int_value);
    case ExprKind::kStr:
      return t_const_string(e->str);
    case ExprKind::kSym:
      return t_sing_sym(e->str);
    case ExprKind::kTypeLit:
      validate_type_names(e->type, e->span);
      return t_type();
    case ExprKind::kVar: {
      auto it = env.find(e->str);
      if (it == env.end()) {
        err(e->span, codes::kUnboundVar, "unbound variable " + e->str);
      }
      return it->second;
    }
    case ExprKind::kSelf: {
      auto it = env.find("self");
      if (it == env.end()) {
        err(e->span, codes::kUnboundVar, "self is not bound here");
      }
      return it->second;
    }
    case ExprKind::kTSelf: {
      auto it = env.find("tself");
      if (it == env.end()) {
        err(e->span, codes::kUnboundVar,
            "tself is only available in comp type expressions");
      }
      return it->second;
    }
    case ExprKind::kNew:
      if (!h.has_class(e->str)) {
        err(e->span, codes::kUnknownClass, "unknown class " + e->str);
      }
      return t_nominal(e->str);
    case ExprKind::kSeq:
      typecheck(e->kids[0], env);
      return typecheck(e->kids[1], env);
    case ExprKind::kEq:
      typecheck(e->kids[0], env);
      typecheck(e->kids[1], env);
      return t_bool();
    case ExprKind::kIf: {
      typecheck(e->kids[0], env);
      Type t = typecheck(e->kids[1], env);
      Type f = typecheck(e->kids[2], env);
      return join(h, t, f, nullptr, e->span);
    }
    case ExprKind::kWhile:
      typecheck(e->kids[0], env);
      typecheck(e->kids[1], env);
      return t_nil();
    case ExprKind::kArray: {
      std::vector<Type> types;
      for (const ExprPtr& kid : e->kids) types.push_back(typecheck(kid, env));
      return t_tuple(std::move(types));
    }
    case ExprKind::kHash: {
      std::vector<std::pair<std::string, Type>> fields;
      for (std::size_t i = 0; i < e->kids.size(); ++i) {
        fields.emplace_back(e->keys[i], typecheck(e->kids[i], env));
      }
      return t_finite_hash(std::move(fields));
    }
    case ExprKind::kCall: {
      Type recv = typecheck(e->kids[0], env);
      std::string dcls = class_of_type(h, recv);
      const MethodEntry* entry = ct_.lookup(dcls, e->str);
      if (!entry) {
        err(e->span, codes::kUnknownMethod,
            "unknown method " + dcls + "." + e->str);
      }
      Type arg = typecheck(e->kids[1], env);
      bool is_lib = entry->origin == MethodOrigin::kLibrary;
      bool blockdep = is_lib && entry->terminates == Terminates::kBlockDep;
      if (e->block) {
        if (!blockdep) {
          err(e->span, codes::kBlockMisuse,
              dcls + "." + e->str + " does not take a block");
        }
        TypeEnv benv = env;
        benv[e->block->param] = element_type_of(h, recv);
        typecheck(e->block->body, benv);
      } else if (blockdep) {
        err(e->span, codes::kBlockMisuse,
            dcls + "." + e->str + " requires a block");
      }
      if (is_lib && entry->sig.is_comp) {
        err(e->span, codes::kUnknownMethod,
            "call to " + dcls + "." + e->str +
                " has a comp signature and must carry a check");
      }
      if (!subtype(h, arg, entry->sig.arg_bound, nullptr, e->span)) {
        err(e->span, codes::kArgMismatch,
            "argument to " + dcls + "." + e->str + " has type " +
                print_type(arg) + ", which does not fit the declared " +
                print_type(entry->sig.arg_bound));
      }
      return deep_copy_type(entry->sig.ret_bound);
    }
    case ExprKind::kCheckedCall: {
      Type recv = typecheck(e->kids[0], env);
      std::string dcls = class_of_type(h, recv);
      const MethodEntry* entry = ct_.lookup(dcls, e->str);
      if (!entry || entry->origin != MethodOrigin::kLibrary) {
        err(e->span, codes::kUnknownMethod,
            "checked call to unknown library method " + dcls + "." + e->str);
      }
      typecheck(e->kids[1], env);
      if (e->block) {
        TypeEnv benv = env;
        benv[e->block->param] = element_type_of(h, recv);
        typecheck(e->block->body, benv);
      }
      return e->type;
    }
    case ExprKind::kValue:
    case ExprKind::kHole:
      break;
  }
  err(e->span, codes::kParse, "internal node in surface expression");
}

Diagnostics Checker::check_program() {
  Diagnostics out;
  for (const MethodEntry* e : ct_.all_entries()) {
    if (e->origin != MethodOrigin::kLibrary || !e->sig.is_comp) continue;
    try {
      ensure_comp_checked(*e);
    } catch (const CheckError& ce) {
      out.push_back(ce.diag);
    }
  }
  if (!out.empty()) return out;
  for (MethodEntry* e : ct_.all_entries_mutable()) {
    if (e->origin != MethodOrigin::kUser) continue;
    try {
      TypeEnv env;
      env["self"] = t_nominal(e->cls);
      env[e->param] = deep_copy_type(e->sig.arg_bound);
      Typed body = check_and_rewrite(e->body, env);
      if (!subtype(ct_.hierarchy(), body.type, e->sig.ret_bound, &store(),
                   e->span)) {
        err(e->span, codes::kBodyMismatch,
            "body of " + e->cls + "." + e->name + " has type " +
                print_type(body.type) + ", which does not fit the declared " +
                print_type(e->sig.ret_bound));
      }
      e->rewritten_body = body.expr;
    } catch (const CheckError& ce) {
      out.push_back(ce.diag);
    }
  }
  return out;
}

}  // namespace complang
