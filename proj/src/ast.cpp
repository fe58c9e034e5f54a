#include "complang/ast.hpp"

namespace complang {

namespace {

std::shared_ptr<Expr> base(ExprKind k, Span s) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->span = s;
  return e;
}

}  // namespace

ExprPtr mk_nil(Span s) { return base(ExprKind::kNil, s); }
ExprPtr mk_true(Span s) { return base(ExprKind::kTrue, s); }
ExprPtr mk_false(Span s) { return base(ExprKind::kFalse, s); }

ExprPtr mk_int(long long v, Span s) {
  auto e = base(ExprKind::kInt, s);
  e->int_value = v;
  return e;
}

ExprPtr mk_str(const std::string& content, Span s) {
  auto e = base(ExprKind::kStr, s);
  e->str = content;
  return e;
}

ExprPtr mk_sym(const std::string& sym, Span s) {
  auto e = base(ExprKind::kSym, s);
  e->str = sym;
  return e;
}

ExprPtr mk_var(const std::string& name, Span s) {
  auto e = base(ExprKind::kVar, s);
  e->str = name;
  return e;
}

ExprPtr mk_self(Span s) { return base(ExprKind::kSelf, s); }
ExprPtr mk_tself(Span s) { return base(ExprKind::kTSelf, s); }

ExprPtr mk_new(const std::string& cls, Span s) {
  auto e = base(ExprKind::kNew, s);
  e->str = cls;
  return e;
}

ExprPtr mk_seq(ExprPtr a, ExprPtr b, Span s) {
  auto e = base(ExprKind::kSeq, s);
  e->kids = {std::move(a), std::move(b)};
  return e;
}

ExprPtr mk_eq(ExprPtr a, ExprPtr b, Span s) {
  auto e = base(ExprKind::kEq, s);
  e->kids = {std::move(a), std::move(b)};
  return e;
}

ExprPtr mk_if(ExprPtr c, ExprPtr t, ExprPtr el, Span s) {
  auto e = base(ExprKind::kIf, s);
  e->kids = {std::move(c), std::move(t), std::move(el)};
  return e;
}

ExprPtr mk_while(ExprPtr c, ExprPtr body, Span s) {
  auto e = base(ExprKind::kWhile, s);
  e->kids = {std::move(c), std::move(body)};
  return e;
}

ExprPtr mk_call(ExprPtr recv, const std::string& method, ExprPtr arg,
                std::optional<Block> block, Span s) {
  auto e = base(ExprKind::kCall, s);
  e->str = method;
  e->kids = {std::move(recv), std::move(arg)};
  e->block = std::move(block);
  return e;
}

ExprPtr mk_checked(Type bound, ExprPtr recv, const std::string& method,
                   ExprPtr arg, std::optional<Block> block,
                   std::shared_ptr<const ConsistencyRecord> guard, Span s) {
  auto e = base(ExprKind::kCheckedCall, s);
  e->type = std::move(bound);
  e->str = method;
  e->kids = {std::move(recv), std::move(arg)};
  e->block = std::move(block);
  e->guard = std::move(guard);
  return e;
}

ExprPtr mk_array(std::vector<ExprPtr> elems, Span s) {
  auto e = base(ExprKind::kArray, s);
  e->kids = std::move(elems);
  return e;
}

ExprPtr mk_hash(std::vector<std::string> keys, std::vector<ExprPtr> vals,
                Span s) {
  auto e = base(ExprKind::kHash, s);
  e->keys = std::move(keys);
  e->kids = std::move(vals);
  return e;
}

ExprPtr mk_type_lit(Type t, Span s) {
  auto e = base(ExprKind::kTypeLit, s);
  e->type = std::move(t);
  return e;
}

ExprPtr mk_value_expr(std::shared_ptr<const Value> v, Span s) {
  auto e = base(ExprKind::kValue, s);
  e->runtime_value = std::move(v);
  return e;
}

ExprPtr mk_hole(Span s) { return base(ExprKind::kHole, s); }

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->int_value != b->int_value) return false;
  if (a->str != b->str) return false;
  if (a->keys != b->keys) return false;
  if (a->kids.size() != b->kids.size()) return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i) {
    if (!expr_equal(a->kids[i], b->kids[i])) return false;
  }
  if (a->type.defined() != b->type.defined()) return false;
  if (a->type.defined() && !type_equal(a->type, b->type)) return false;
  if (a->block.has_value() != b->block.has_value()) return false;
  if (a->block) {
    if (a->block->param != b->block->param) return false;
    if (!expr_equal(a->block->body, b->block->body)) return false;
  }
  if (a->runtime_value != b->runtime_value) return false;
  return true;
}

}  // namespace complang
