#include "complang/class_table.hpp"

#include <algorithm>

#include "complang/subtype.hpp"

namespace complang {

bool ClassTable::add_entry(MethodEntry entry) {
  auto key = std::make_pair(entry.cls, entry.name);
  if (entries_.count(key)) return false;
  entries_[key] = std::move(entry);
  return true;
}

const MethodEntry* ClassTable::lookup_exact(const std::string& cls,
                                            const std::string& method) const {
  auto it = entries_.find({cls, method});
  return it == entries_.end() ? nullptr : &it->second;
}

const MethodEntry* ClassTable::lookup(const std::string& cls,
                                      const std::string& method) const {
  std::string cur = cls;
  while (true) {
    if (const MethodEntry* e = lookup_exact(cur, method)) return e;
    const std::string* parent = hierarchy_.parent_of(cur);
    if (!parent) return nullptr;
    cur = *parent;
  }
}

std::vector<const MethodEntry*> ClassTable::entries_named(
    const std::string& m) const {
  std::vector<const MethodEntry*> out;
  for (auto& [key, entry] : entries_) {
    if (key.second == m) out.push_back(&entry);
  }
  return out;
}

std::vector<const MethodEntry*> ClassTable::all_entries() const {
  std::vector<const MethodEntry*> out;
  out.reserve(entries_.size());
  for (auto& [key, entry] : entries_) out.push_back(&entry);
  return out;
}

std::vector<MethodEntry*> ClassTable::all_entries_mutable() {
  std::vector<MethodEntry*> out;
  out.reserve(entries_.size());
  for (auto& [key, entry] : entries_) out.push_back(&entry);
  return out;
}

void ClassTable::set_rewritten_body(const std::string& cls,
                                    const std::string& method, ExprPtr body) {
  auto it = entries_.find({cls, method});
  if (it != entries_.end()) it->second.rewritten_body = std::move(body);
}

ClassTable ClassTable::unrefined() const {
  ClassTable out = *this;
  for (auto& [key, entry] : out.entries_) {
    if (entry.sig.is_comp) {
      MethodSig plain;
      plain.is_comp = false;
      plain.arg_bound = entry.sig.arg_bound;
      plain.ret_bound = entry.sig.ret_bound;
      plain.arg_expr = mk_type_lit(plain.arg_bound, entry.span);
      plain.ret_expr = mk_type_lit(plain.ret_bound, entry.span);
      entry.sig = plain;
    }
  }
  return out;
}

namespace {

// Every nominal / singleton-class name mentioned in a signature type must
// be a declared class.
bool validate_type_names(const ClassHierarchy& h, const Type& t, Span span,
                         Diagnostics& diags) {
  if (!t.defined()) return true;
  const TypeNode& n = t.node();
  bool ok = true;
  switch (n.kind) {
    case TypeKind::kNominal:
    case TypeKind::kSingletonClass:
      if (!h.has_class(n.name)) {
        diags.push_back({span, codes::kUnknownClass,
                         "unknown class " + n.name + " in signature", ""});
        ok = false;
      }
      break;
    default:
      break;
  }
  for (auto& e : n.elems) ok &= validate_type_names(h, e, span, diags);
  for (auto& [k, v] : n.fields) ok &= validate_type_names(h, v, span, diags);
  return ok;
}

}  // namespace

bool merge_program_into(ClassTable& ct, const Program& program,
                        Diagnostics& diags) {
  bool ok = true;
  for (const auto& decl : program.decls) {
    if (const auto* c = std::get_if<ClassDecl>(&decl)) {
      if (ct.hierarchy().has_class(c->name)) {
        diags.push_back({c->span, codes::kDuplicateMethod,
                         "class " + c->name + " is already defined", ""});
        ok = false;
        continue;
      }
      if (!c->parent.empty() && !ct.hierarchy().has_class(c->parent)) {
        diags.push_back({c->span, codes::kUnknownClass,
                         "unknown superclass " + c->parent, ""});
        ok = false;
        continue;
      }
      ct.hierarchy().add_class(c->name, c->parent);
    }
  }
  for (const auto& decl : program.decls) {
    if (const auto* d = std::get_if<DefDecl>(&decl)) {
      if (!ct.hierarchy().has_class(d->cls)) {
        diags.push_back({d->span, codes::kUnknownClass,
                         "method defined on unknown class " + d->cls, ""});
        ok = false;
        continue;
      }
      ok &= validate_type_names(ct.hierarchy(), d->arg_type, d->span, diags);
      ok &= validate_type_names(ct.hierarchy(), d->ret_type, d->span, diags);
      MethodEntry e;
      e.cls = d->cls;
      e.name = d->method;
      e.param = d->param;
      e.origin = MethodOrigin::kUser;
      e.sig.is_comp = false;
      e.sig.arg_bound = d->arg_type;
      e.sig.ret_bound = d->ret_type;
      e.sig.arg_expr = mk_type_lit(d->arg_type, d->span);
      e.sig.ret_expr = mk_type_lit(d->ret_type, d->span);
      e.body = d->body;
      e.span = d->span;
      if (!ct.add_entry(std::move(e))) {
        diags.push_back({d->span, codes::kDuplicateMethod,
                         "duplicate definition of " + d->cls + "." + d->method,
                         ""});
        ok = false;
      }
    } else if (const auto* l = std::get_if<LibDecl>(&decl)) {
      if (!ct.hierarchy().has_class(l->cls)) {
        diags.push_back({l->span, codes::kUnknownClass,
                         "method declared on unknown class " + l->cls, ""});
        ok = false;
        continue;
      }
      ok &= validate_type_names(ct.hierarchy(), l->arg_bound, l->span, diags);
      ok &= validate_type_names(ct.hierarchy(), l->ret_bound, l->span, diags);
      MethodEntry e;
      e.cls = l->cls;
      e.name = l->method;
      e.param = l->param;
      e.origin = MethodOrigin::kLibrary;
      e.sig.is_comp = l->arg_is_comp || l->ret_is_comp;
      e.sig.arg_expr = l->arg_expr;
      e.sig.arg_bound = l->arg_bound;
      e.sig.ret_expr = l->ret_expr;
      e.sig.ret_bound = l->ret_bound;
      e.terminates = l->terminates;
      e.pure = l->pure;
      e.span = l->span;
      if (!ct.add_entry(std::move(e))) {
        diags.push_back({l->span, codes::kDuplicateMethod,
                         "duplicate declaration of " + l->cls + "." +
                             l->method,
                         ""});
        ok = false;
      }
    }
  }
  return ok;
}

std::optional<ClassTable> build_class_table(const Program& program,
                                            Diagnostics& diags) {
  ClassTable ct;
  if (!merge_program_into(ct, program, diags)) return std::nullopt;
  return ct;
}

bool validate_structure(ClassTable& ct, Diagnostics& diags) {
  bool ok = true;
  for (const MethodEntry* e : ct.all_entries()) {
    const std::string* parent = ct.hierarchy().parent_of(e->cls);
    const MethodEntry* super = nullptr;
    std::string cur = parent ? *parent : "";
    while (!cur.empty()) {
      if ((super = ct.lookup_exact(cur, e->name))) break;
      const std::string* up = ct.hierarchy().parent_of(cur);
      cur = up ? *up : "";
    }
    if (!super) continue;
    if (e->sig.is_comp || super->sig.is_comp) {
      diags.push_back(
          {e->span, codes::kBadOverride,
           e->cls + "." + e->name + " overrides " + super->cls + "." +
               super->name + " with a comp signature involved; comp-typed "
               "methods cannot take part in overriding",
           ""});
      ok = false;
      continue;
    }
    bool arg_ok = subtype(ct.hierarchy(), super->sig.arg_bound,
                          e->sig.arg_bound, nullptr);
    bool ret_ok = subtype(ct.hierarchy(), e->sig.ret_bound,
                          super->sig.ret_bound, nullptr);
    if (!arg_ok || !ret_ok) {
      diags.push_back(
          {e->span, codes::kBadOverride,
           e->cls + "." + e->name + " does not refine " + super->cls + "." +
               e->name + " (argument must be contravariant, return covariant)",
           "have (" + print_type(e->sig.arg_bound) + ") -> " +
               print_type(e->sig.ret_bound) + ", overriding (" +
               print_type(super->sig.arg_bound) + ") -> " +
               print_type(super->sig.ret_bound)});
      ok = false;
    }
  }
  return ok;
}

}  // namespace complang
