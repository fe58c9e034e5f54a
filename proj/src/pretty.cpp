#include "complang/ast.hpp"
#include "complang/value.hpp"

namespace complang {

namespace {

// Precedence tiers: sequence < equality < postfix call < primary.
enum Prec { kSeqPrec = 0, kEqPrec = 1, kPostPrec = 2, kPrimPrec = 3 };

void print_into(const ExprPtr& e, int min_prec, std::string& out);

void print_paren(const ExprPtr& e, int prec, int min_prec, std::string& out) {
  if (prec < min_prec) {
    out += "(";
    print_into(e, kSeqPrec, out);
    out += ")";
  } else {
    print_into(e, min_prec, out);
  }
}

void print_block(const Block& b, std::string& out) {
  out += " { |" + b.param + "| ";
  print_into(b.body, kSeqPrec, out);
  out += " }";
}

void print_into(const ExprPtr& e, int min_prec, std::string& out) {
  switch (e->kind) {
    case ExprKind::kNil: out += "nil"; return;
    case ExprKind::kTrue: out += "true"; return;
    case ExprKind::kFalse: out += "false"; return;
    case ExprKind::kInt: out += std::to_string(e->int_value); return;
    case ExprKind::kStr: out += quote_string(e->str); return;
    case ExprKind::kSym: out += ":" + e->str; return;
    case ExprKind::kVar: out += e->str; return;
    case ExprKind::kSelf: out += "self"; return;
    case ExprKind::kTSelf: out += "tself"; return;
    case ExprKind::kNew: out += "new " + e->str; return;
    case ExprKind::kSeq: {
      if (min_prec > kSeqPrec) {
        out += "(";
        print_into(e, kSeqPrec, out);
        out += ")";
        return;
      }
      print_into(e->kids[0], kSeqPrec, out);
      out += " ; ";
      print_into(e->kids[1], kEqPrec, out);
      return;
    }
    case ExprKind::kEq: {
      if (min_prec > kEqPrec) {
        out += "(";
        print_into(e, kSeqPrec, out);
        out += ")";
        return;
      }
      print_into(e->kids[0], kEqPrec, out);
      out += " == ";
      print_into(e->kids[1], kPostPrec, out);
      return;
    }
    case ExprKind::kIf: {
      out += "if ";
      print_into(e->kids[0], kSeqPrec, out);
      out += " then ";
      print_into(e->kids[1], kSeqPrec, out);
      out += " else ";
      print_into(e->kids[2], kSeqPrec, out);
      out += " end";
      return;
    }
    case ExprKind::kWhile: {
      out += "while ";
      print_into(e->kids[0], kSeqPrec, out);
      out += " do ";
      print_into(e->kids[1], kSeqPrec, out);
      out += " end";
      return;
    }
    case ExprKind::kCall: {
      print_paren(e->kids[0], kPostPrec, kPostPrec, out);
      out += "." + e->str + "(";
      if (e->kids[1]->kind != ExprKind::kNil) {
        print_into(e->kids[1], kSeqPrec, out);
      }
      out += ")";
      if (e->block) print_block(*e->block, out);
      return;
    }
    case ExprKind::kCheckedCall: {
      if (min_prec > kEqPrec) {
        out += "(";
        print_into(e, kSeqPrec, out);
        out += ")";
        return;
      }
      out += "check[" + print_type(e->type) + "] ";
      print_paren(e->kids[0], kPostPrec, kPostPrec, out);
      out += "." + e->str + "(";
      if (e->kids[1]->kind != ExprKind::kNil) {
        print_into(e->kids[1], kSeqPrec, out);
      }
      out += ")";
      if (e->block) print_block(*e->block, out);
      return;
    }
    case ExprKind::kArray: {
      out += "[";
      for (std::size_t i = 0; i < e->kids.size(); ++i) {
        if (i) out += ", ";
        print_into(e->kids[i], kSeqPrec, out);
      }
      out += "]";
      return;
    }
    case ExprKind::kHash: {
      out += "{";
      for (std::size_t i = 0; i < e->kids.size(); ++i) {
        if (i) out += ", ";
        out += e->keys[i] + ": ";
        print_into(e->kids[i], kSeqPrec, out);
      }
      out += "}";
      return;
    }
    case ExprKind::kTypeLit: {
      out += "@(" + print_type(e->type) + ")";
      return;
    }
    case ExprKind::kValue: {
      out += print_value(*e->runtime_value);
      return;
    }
    case ExprKind::kHole: {
      out += "<>";
      return;
    }
  }
}

std::string terminates_text(Terminates t) {
  switch (t) {
    case Terminates::kYes: return "+";
    case Terminates::kNo: return "-";
    case Terminates::kBlockDep: return "blockdep";
  }
  return "-";
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
  std::string out;
  print_into(e, kSeqPrec, out);
  return out;
}

std::string print_program(const Program& p) {
  std::string out;
  for (const auto& decl : p.decls) {
    if (const auto* c = std::get_if<ClassDecl>(&decl)) {
      out += "class " + c->name;
      if (!c->parent.empty()) out += " < " + c->parent;
      out += "\n";
    } else if (const auto* d = std::get_if<DefDecl>(&decl)) {
      out += "def " + d->cls + "." + d->method + "(" + d->param + ") : (" +
             print_type(d->arg_type) + ") -> " + print_type(d->ret_type) +
             " =\n  " + print_expr(d->body) + "\n";
    } else if (const auto* l = std::get_if<LibDecl>(&decl)) {
      out += "lib " + l->cls + "." + l->method + "(" + l->param + ") : ";
      if (l->arg_is_comp) {
        out += "<<" + print_expr(l->arg_expr) + ">> " +
               print_type(l->arg_bound);
      } else {
        out += "(" + print_type(l->arg_bound) + ")";
      }
      out += " -> ";
      if (l->ret_is_comp) {
        out += "<<" + print_expr(l->ret_expr) + ">> " +
               print_type(l->ret_bound);
      } else {
        out += print_type(l->ret_bound);
      }
      out += " [terminates=" + terminates_text(l->terminates) +
             ", pure=" + (l->pure == Pure::kYes ? "+" : "-") + "]\n";
    }
  }
  return out;
}

}  // namespace complang
