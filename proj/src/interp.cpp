#include "complang/interp.hpp"

#include <iostream>

#include "complang/natives.hpp"

namespace complang {

namespace {

bool is_value_expr(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::kNil:
    case ExprKind::kTrue:
    case ExprKind::kFalse:
    case ExprKind::kInt:
    case ExprKind::kSym:
    case ExprKind::kTypeLit:
    case ExprKind::kValue:
      return true;
    default:
      return false;
  }
}

Value value_of(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::kNil:
      return v_nil();
    case ExprKind::kTrue:
      return v_bool(true);
    case ExprKind::kFalse:
      return v_bool(false);
    case ExprKind::kInt:
      return v_int(e->int_value);
    case ExprKind::kSym:
      return v_sym(e->str);
    case ExprKind::kTypeLit:
      return v_type(e->type);
    case ExprKind::kValue:
      return *e->runtime_value;
    default:
      throw BlameSignal{{BlameKind::kTypeLevelError,
                         "internal: expression is not a value", "", "",
                         e->span}};
  }
}

ExprPtr wrap_value(Value v, Span s) {
  return mk_value_expr(std::make_shared<const Value>(std::move(v)), s);
}

bool has_hole(const ExprPtr& e) {
  if (e->kind == ExprKind::kHole) return true;
  for (const auto& k : e->kids) {
    if (has_hole(k)) return true;
  }
  return false;
}

// Fills the unique hole of a saved context.
ExprPtr plug(const ExprPtr& ctx, const ExprPtr& filler) {
  if (ctx->kind == ExprKind::kHole) return filler;
  auto c = std::make_shared<Expr>(*ctx);
  for (auto& kid : c->kids) {
    if (has_hole(kid)) {
      kid = plug(kid, filler);
      break;
    }
  }
  return c;
}

ExprPtr with_kid(const ExprPtr& e, std::size_t i, ExprPtr kid) {
  auto c = std::make_shared<Expr>(*e);
  c->kids[i] = std::move(kid);
  return c;
}

}  // namespace

std::string blame_kind_name(BlameKind k) {
  switch (k) {
    case BlameKind::kNilReceiver: return "NilReceiver";
    case BlameKind::kCheckFailed: return "CheckFailed";
    case BlameKind::kConsistencyFailed: return "ConsistencyFailed";
    case BlameKind::kTypeLevelError: return "TypeLevelError";
  }
  return "TypeLevelError";
}

std::string blame_to_string(const BlameInfo& b) {
  return "blame[" + blame_kind_name(b.kind) + "]: " + b.message;
}

struct Interp::StepOut {
  enum Kind { kNewControl, kPush } kind = kNewControl;
  const char* rule = "";
  ExprPtr control;  // kNewControl
  // kPush
  Env callee_env;
  ExprPtr callee_body;
  ExprPtr context;  // subtree with the redex replaced by a hole
};

Interp::Interp(const ClassTable& ct, const NativeRegistry& natives,
               SchemaRegistry* schema, ConstraintStore* store,
               InterpOptions opts)
    : ct_(ct), natives_(natives), schema_(schema), store_(store),
      opts_(opts) {}

void Interp::trace_step(const char* rule, const ExprPtr& before,
                        std::size_t depth) {
  ++step_no_;
  if (!opts_.trace) return;
  std::ostream* os = opts_.trace_out ? opts_.trace_out : &std::cerr;
  std::string head = print_expr(before);
  if (head.size() > 60) head = head.substr(0, 57) + "...";
  (*os) << "STEP " << step_no_ << ": " << rule << " | " << head
        << " | stack depth " << depth << "\n";
}

void Interp::run_guard(const Expr& call, long long& fuel) {
  const ConsistencyRecord& g = *call.guard;
  Env tenv;
  tenv[g.param] = v_type(g.arg_type);
  tenv["tself"] = v_type(g.recv_type);
  tenv["tblock"] = v_type(g.block_type ? *g.block_type : t_nil());
  auto eval = [&](const ExprPtr& texpr, const Type& stored,
                  const char* which) {
    Interp sub(ct_, natives_, schema_, store_, InterpOptions{});
    Outcome o = sub.run(texpr, tenv, fuel);
    if (o.kind == OutcomeKind::kFuel) throw FuelSignal{};
    if (o.kind == OutcomeKind::kBlame) throw BlameSignal{*o.blame};
    if (o.value.kind != ValueKind::kType) {
      throw BlameSignal{{BlameKind::kTypeLevelError,
                         "consistency guard for " + call.str +
                             " did not produce a type",
                         "", "", call.span}};
    }
    if (!type_equal(o.value.type, stored)) {
      BlameInfo b;
      b.kind = BlameKind::kConsistencyFailed;
      b.message = "comp type of " + call.str +
                  " changed since checking: " + which + " was " +
                  print_type(stored) + ", now " + print_type(o.value.type);
      b.old_type = stored;
      b.new_type = o.value.type;
      b.span = call.span;
      throw BlameSignal{b};
    }
  };
  eval(g.arg_texpr, g.arg_eval, "argument bound");
  eval(g.ret_texpr, g.ret_eval, "result type");
}

Value Interp::dispatch_library(const Expr& call, const MethodEntry& entry,
                               const Value& recv, const Value& arg,
                               const Env& env, long long& fuel) {
  if (call.guard) run_guard(call, fuel);
  const NativeEntry* nat = natives_.find(entry.cls, entry.name);
  if (!nat) {
    throw BlameSignal{{BlameKind::kTypeLevelError,
                       "no implementation for library method " + entry.cls +
                           "." + entry.name,
                       "", "", call.span}};
  }
  NativeCtx ctx;
  ctx.ct = &ct_;
  ctx.schema = schema_;
  ctx.store = store_;
  ctx.interp = this;
  ctx.fuel = &fuel;
  ctx.site = call.span;
  ctx.block = call.block
                  ? v_lambda(std::make_shared<LambdaValue>(LambdaValue{
                        call.block->param, call.block->body, env}))
                  : v_nil();
  return nat->fn(ctx, recv, arg);
}

Interp::StepOut Interp::reduce(const ExprPtr& e, const Env& env,
                               long long& fuel) {
  auto descend = [&](std::size_t idx) {
    StepOut r = reduce(e->kids[idx], env, fuel);
    if (r.kind == StepOut::kNewControl) {
      r.control = with_kid(e, idx, std::move(r.control));
    } else {
      r.context = with_kid(e, idx, std::move(r.context));
    }
    return r;
  };

  switch (e->kind) {
    case ExprKind::kStr:
      return {StepOut::kNewControl, "E-Str",
              wrap_value(v_string(e->str), e->span), {}, nullptr, nullptr};
    case ExprKind::kVar: {
      auto it = env.find(e->str);
      if (it == env.end()) {
        throw BlameSignal{{BlameKind::kTypeLevelError,
                           "unbound variable " + e->str, "", "", e->span}};
      }
      return {StepOut::kNewControl, "E-Var", wrap_value(it->second, e->span),
              {}, nullptr, nullptr};
    }
    case ExprKind::kSelf: {
      auto it = env.find("self");
      if (it == env.end()) {
        throw BlameSignal{{BlameKind::kTypeLevelError, "self is not bound",
                           "", "", e->span}};
      }
      return {StepOut::kNewControl, "E-Self", wrap_value(it->second, e->span),
              {}, nullptr, nullptr};
    }
    case ExprKind::kTSelf: {
      auto it = env.find("tself");
      if (it == env.end()) {
        throw BlameSignal{{BlameKind::kTypeLevelError, "tself is not bound",
                           "", "", e->span}};
      }
      return {StepOut::kNewControl, "E-TSelf",
              wrap_value(it->second, e->span), {}, nullptr, nullptr};
    }
    case ExprKind::kNew:
      return {StepOut::kNewControl, "E-New",
              wrap_value(v_object(e->str), e->span), {}, nullptr, nullptr};
    case ExprKind::kSeq: {
      if (!is_value_expr(e->kids[0])) return descend(0);
      return {StepOut::kNewControl, "E-Seq", e->kids[1], {}, nullptr,
              nullptr};
    }
    case ExprKind::kEq: {
      if (!is_value_expr(e->kids[0])) return descend(0);
      if (!is_value_expr(e->kids[1])) return descend(1);
      bool eq = value_equal(value_of(e->kids[0]), value_of(e->kids[1]));
      return {StepOut::kNewControl, eq ? "E-Eq-True" : "E-Eq-False",
              wrap_value(v_bool(eq), e->span), {}, nullptr, nullptr};
    }
    case ExprKind::kIf: {
      if (!is_value_expr(e->kids[0])) return descend(0);
      bool cond = truthy(value_of(e->kids[0]));
      return {StepOut::kNewControl, cond ? "E-If-True" : "E-If-False",
              e->kids[cond ? 1 : 2], {}, nullptr, nullptr};
    }
    case ExprKind::kWhile: {
      // while c do b end  ->  if c then (b ; while c do b end) else nil end
      ExprPtr body_then = mk_seq(e->kids[1], e, e->span);
      ExprPtr unrolled =
          mk_if(e->kids[0], body_then, mk_nil(e->span), e->span);
      return {StepOut::kNewControl, "E-While", unrolled, {}, nullptr,
              nullptr};
    }
    case ExprKind::kArray: {
      for (std::size_t i = 0; i < e->kids.size(); ++i) {
        if (!is_value_expr(e->kids[i])) return descend(i);
      }
      std::vector<Value> elems;
      elems.reserve(e->kids.size());
      for (const auto& k : e->kids) elems.push_back(value_of(k));
      return {StepOut::kNewControl, "E-Array",
              wrap_value(v_array(std::move(elems)), e->span), {}, nullptr,
              nullptr};
    }
    case ExprKind::kHash: {
      for (std::size_t i = 0; i < e->kids.size(); ++i) {
        if (!is_value_expr(e->kids[i])) return descend(i);
      }
      std::vector<std::pair<std::string, Value>> entries;
      entries.reserve(e->kids.size());
      for (std::size_t i = 0; i < e->kids.size(); ++i) {
        entries.emplace_back(e->keys[i], value_of(e->kids[i]));
      }
      return {StepOut::kNewControl, "E-Hash",
              wrap_value(v_hash(std::move(entries)), e->span), {}, nullptr,
              nullptr};
    }
    case ExprKind::kCall:
    case ExprKind::kCheckedCall: {
      if (!is_value_expr(e->kids[0])) return descend(0);
      if (!is_value_expr(e->kids[1])) return descend(1);
      Value recv = value_of(e->kids[0]);
      Value arg = value_of(e->kids[1]);
      if (is_nil(recv)) {
        throw BlameSignal{{BlameKind::kNilReceiver,
                           "method " + e->str + " called on nil", "", "",
                           e->span}};
      }
      const MethodEntry* entry = ct_.lookup(class_of_value(recv), e->str);
      if (!entry) {
        throw BlameSignal{{BlameKind::kTypeLevelError,
                           "unknown method " + class_of_value(recv) + "." +
                               e->str,
                           "", "", e->span}};
      }
      if (entry->origin == MethodOrigin::kUser) {
        Env callee;
        callee["self"] = recv;
        callee[entry->param] = arg;
        ExprPtr body = entry->rewritten_body ? entry->rewritten_body
                                             : entry->body;
        return {StepOut::kPush, "E-App-UD", nullptr, std::move(callee), body,
                mk_hole(e->span)};
      }
      Value out = dispatch_library(*e, *entry, recv, arg, env, fuel);
      if (e->kind == ExprKind::kCheckedCall) {
        Type got = type_of(out);
        if (!subtype(ct_.hierarchy(), got, e->type, nullptr)) {
          BlameInfo b;
          b.kind = BlameKind::kCheckFailed;
          b.message = "dynamic check failed for " + e->str + ": expected " +
                      print_type(e->type) + ", got " + print_type(got);
          b.expected = e->type;
          b.got = got;
          b.span = e->span;
          throw BlameSignal{b};
        }
      }
      return {StepOut::kNewControl, "E-App-BI",
              wrap_value(std::move(out), e->span), {}, nullptr, nullptr};
    }
    default:
      throw BlameSignal{{BlameKind::kTypeLevelError,
                         "internal: cannot reduce this expression", "", "",
                         e->span}};
  }
}

Outcome Interp::run(const ExprPtr& e, Env env, long long& fuel) {
  ExprPtr control = e;
  std::vector<std::pair<Env, ExprPtr>> stack;
  long long local_steps = 0;
  auto finish = [&](Outcome o) {
    o.steps = local_steps;
    return o;
  };
  try {
    for (;;) {
      if (is_value_expr(control)) {
        if (stack.empty()) {
          Outcome o;
          o.kind = OutcomeKind::kValue;
          o.value = value_of(control);
          return finish(o);
        }
        if (fuel <= 0) throw FuelSignal{};
        --fuel;
        ++local_steps;
        trace_step("E-Ret", control, stack.size());
        auto saved = std::move(stack.back());
        stack.pop_back();
        env = std::move(saved.first);
        control = plug(saved.second,
                       wrap_value(value_of(control), control->span));
        continue;
      }
      if (fuel <= 0) throw FuelSignal{};
      --fuel;
      ++local_steps;
      ExprPtr before = control;
      StepOut r = reduce(control, env, fuel);
      trace_step(r.rule, before, stack.size());
      if (r.kind == StepOut::kNewControl) {
        control = std::move(r.control);
      } else {
        stack.emplace_back(std::move(env), std::move(r.context));
        env = std::move(r.callee_env);
        control = std::move(r.callee_body);
      }
    }
  } catch (const BlameSignal& b) {
    Outcome o;
    o.kind = OutcomeKind::kBlame;
    o.blame = b.info;
    return finish(o);
  } catch (const FuelSignal&) {
    Outcome o;
    o.kind = OutcomeKind::kFuel;
    return finish(o);
  }
}

Outcome Interp::run_with_budget(const ExprPtr& e, Env env, long long budget) {
  long long fuel = budget;
  return run(e, std::move(env), fuel);
}

Value Interp::call_lambda(const Value& lambda, const Value& arg,
                          long long& fuel) {
  if (lambda.kind != ValueKind::kLambda) {
    throw BlameSignal{{BlameKind::kTypeLevelError,
                       "block expected but none was supplied", "", "",
                       Span{}}};
  }
  Env env = lambda.lambda->captured;
  env[lambda.lambda->param] = arg;
  Outcome o = run(lambda.lambda->body, std::move(env), fuel);
  if (o.kind == OutcomeKind::kFuel) throw FuelSignal{};
  if (o.kind == OutcomeKind::kBlame) throw BlameSignal{*o.blame};
  return o.value;
}

}  // namespace complang
