#include "complang/subtype.hpp"

#include <algorithm>

namespace complang {

void ConstraintStore::record(const Type& lhs, const Type& rhs, Span site) {
  ConstraintRecord rec{lhs, rhs, site};
  std::uint64_t lid = lhs.defined() ? lhs.node().identity : 0;
  std::uint64_t rid = rhs.defined() ? rhs.node().identity : 0;
  if (lid) {
    by_id_[lid].push_back(rec);
    ++total_;
  }
  if (rid && rid != lid) {
    by_id_[rid].push_back(rec);
    ++total_;
  }
}

const std::vector<ConstraintRecord>* ConstraintStore::records_for(
    std::uint64_t id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &it->second;
}

namespace {

bool has_identity(const Type& t) {
  return t.defined() && t.node().identity != 0;
}

bool subtype_rec(const ClassHierarchy& h, const Type& a, const Type& b,
                 ConstraintStore* store, Span site);

bool nominal_target(const ClassHierarchy& h, const std::string& erased,
                    const Type& b) {
  return b.is_kind(TypeKind::kNominal) && h.nominal_le(erased, b.node().name);
}

bool subtype_core(const ClassHierarchy& h, const Type& a, const Type& b,
                  ConstraintStore* store, Span site) {
  if (type_equal(a, b)) return true;
  if (a.is_nominal(cls::kNil)) return true;
  if (b.is_nominal(cls::kObject)) return true;
  if (a.is_kind(TypeKind::kUnion)) {
    for (auto& m : a.node().elems) {
      if (!subtype_rec(h, m, b, store, site)) return false;
    }
    return true;
  }
  if (b.is_kind(TypeKind::kUnion)) {
    for (auto& m : b.node().elems) {
      if (subtype_rec(h, a, m, store, site)) return true;
    }
    return false;
  }
  const TypeNode& an = a.node();
  switch (an.kind) {
    case TypeKind::kNominal:
      return b.is_kind(TypeKind::kNominal) &&
             h.nominal_le(an.name, b.node().name);
    case TypeKind::kSingletonInt:
      return nominal_target(h, cls::kInteger, b);
    case TypeKind::kSingletonSym:
      return nominal_target(h, cls::kSymbol, b);
    case TypeKind::kSingletonClass:
      return nominal_target(h, cls::kType, b);
    case TypeKind::kConstString:
      return nominal_target(h, cls::kString, b);
    case TypeKind::kTuple: {
      if (b.is_kind(TypeKind::kTuple)) {
        const TypeNode& bn = b.node();
        if (an.elems.size() != bn.elems.size()) return false;
        for (std::size_t i = 0; i < an.elems.size(); ++i) {
          if (!subtype_rec(h, an.elems[i], bn.elems[i], store, site)) {
            return false;
          }
        }
        return true;
      }
      if (b.is_kind(TypeKind::kGeneric) && b.node().name == cls::kArray &&
          b.node().elems.size() == 1) {
        return subtype_rec(h, join_all(h, an.elems, store, site),
                           b.node().elems[0], store, site);
      }
      return nominal_target(h, cls::kArray, b);
    }
    case TypeKind::kFiniteHash: {
      if (b.is_kind(TypeKind::kFiniteHash)) {
        const TypeNode& bn = b.node();
        // Width: the lhs may mention a subset of the rhs keys; depth on
        // the keys it does mention.
        for (auto& [k, t] : an.fields) {
          const Type* bt = nullptr;
          for (auto& [bk, bv] : bn.fields) {
            if (bk == k) {
              bt = &bv;
              break;
            }
          }
          if (!bt || !subtype_rec(h, t, *bt, store, site)) return false;
        }
        return true;
      }
      if (b.is_kind(TypeKind::kGeneric) && b.node().name == cls::kHash &&
          b.node().elems.size() == 2) {
        std::vector<Type> vals;
        vals.reserve(an.fields.size());
        for (auto& [k, t] : an.fields) vals.push_back(t);
        return subtype_rec(h, t_symbol(), b.node().elems[0], store, site) &&
               subtype_rec(h, join_all(h, vals, store, site),
                           b.node().elems[1], store, site);
      }
      return nominal_target(h, cls::kHash, b);
    }
    case TypeKind::kGeneric: {
      if (b.is_kind(TypeKind::kGeneric)) {
        const TypeNode& bn = b.node();
        if (an.name != bn.name || an.elems.size() != bn.elems.size()) {
          return false;
        }
        if (an.name == cls::kTable) {
          for (std::size_t i = 0; i < an.elems.size(); ++i) {
            if (!subtype_rec(h, an.elems[i], bn.elems[i], store, site)) {
              return false;
            }
          }
          return true;
        }
        for (std::size_t i = 0; i < an.elems.size(); ++i) {
          if (!type_equal(an.elems[i], bn.elems[i])) return false;
        }
        return true;
      }
      return nominal_target(h, an.name, b);
    }
    case TypeKind::kUnion:
      return false;  // handled above
  }
  return false;
}

bool subtype_rec(const ClassHierarchy& h, const Type& a, const Type& b,
                 ConstraintStore* store, Span site) {
  bool ok = subtype_core(h, a, b, store, site);
  if (ok && store && (has_identity(a) || has_identity(b))) {
    store->record(a, b, site);
  }
  return ok;
}

}  // namespace

bool subtype(const ClassHierarchy& h, const Type& a, const Type& b,
             ConstraintStore* store, Span site) {
  return subtype_rec(h, a, b, store, site);
}

Type join(const ClassHierarchy& h, const Type& a, const Type& b,
          ConstraintStore* store, Span site) {
  if (!a.defined()) return b;
  if (!b.defined()) return a;
  if (subtype(h, a, b, store, site)) return b;
  if (subtype(h, b, a, store, site)) return a;
  // Unrelated Table schemas collapse to the bare nominal rather than a
  // union, mirroring the query layer's fallback arm.
  if (a.is_kind(TypeKind::kGeneric) && b.is_kind(TypeKind::kGeneric) &&
      a.node().name == cls::kTable && b.node().name == cls::kTable) {
    return t_nominal(cls::kTable);
  }
  return t_union({a, b});
}

Type join_all(const ClassHierarchy& h, const std::vector<Type>& ts,
              ConstraintStore* store, Span site) {
  Type acc = t_nil();
  for (auto& t : ts) acc = join(h, acc, t, store, site);
  return acc;
}

Type element_type_of(const ClassHierarchy& h, const Type& t) {
  if (!t.defined()) return t_object();
  const TypeNode& n = t.node();
  switch (n.kind) {
    case TypeKind::kTuple:
      return join_all(h, n.elems, nullptr);
    case TypeKind::kFiniteHash: {
      std::vector<Type> vals;
      vals.reserve(n.fields.size());
      for (auto& [k, v] : n.fields) vals.push_back(v);
      return join_all(h, vals, nullptr);
    }
    case TypeKind::kGeneric:
      if (n.name == cls::kArray && n.elems.size() == 1) return n.elems[0];
      if (n.name == cls::kHash && n.elems.size() == 2) return n.elems[1];
      if (n.name == cls::kTable && n.elems.size() == 1) return n.elems[0];
      return t_object();
    case TypeKind::kUnion: {
      Type acc = t_nil();
      for (auto& m : n.elems) {
        acc = join(h, acc, element_type_of(h, m), nullptr);
      }
      return acc;
    }
    case TypeKind::kNominal:
      if (n.name == cls::kNil) return t_nil();
      return t_object();
    default:
      return t_object();
  }
}

std::optional<ReplayError> weak_update(const ClassHierarchy& h,
                                       ConstraintStore& store, Type target,
                                       const TypeEdit& edit, Span site) {
  if (!target.defined()) return std::nullopt;
  TypeNode& n = target.mutable_node();
  switch (edit.kind) {
    case TypeEditKind::kTupleIndexWrite: {
      if (n.kind != TypeKind::kTuple) return std::nullopt;
      if (edit.index < n.elems.size()) {
        n.elems[edit.index] =
            join(h, n.elems[edit.index], edit.written, nullptr);
      } else {
        Type joined = join_all(h, n.elems, nullptr);
        joined = join(h, joined, edit.written, nullptr);
        n.kind = TypeKind::kGeneric;
        n.name = cls::kArray;
        n.elems = {joined};
        n.fields.clear();
      }
      break;
    }
    case TypeEditKind::kHashKeyWrite: {
      if (n.kind != TypeKind::kFiniteHash) return std::nullopt;
      bool found = false;
      for (auto& [k, v] : n.fields) {
        if (k == edit.key) {
          v = join(h, v, edit.written, nullptr);
          found = true;
          break;
        }
      }
      if (!found) n.fields.emplace_back(edit.key, edit.written);
      break;
    }
    case TypeEditKind::kConstStringWrite: {
      if (n.kind != TypeKind::kConstString) return std::nullopt;
      n.kind = TypeKind::kNominal;
      n.name = cls::kString;
      n.text.clear();
      break;
    }
    case TypeEditKind::kArrayPromoteAppend: {
      if (n.kind != TypeKind::kTuple) return std::nullopt;
      Type joined = join_all(h, n.elems, nullptr);
      joined = join(h, joined, edit.written, nullptr);
      n.kind = TypeKind::kGeneric;
      n.name = cls::kArray;
      n.elems = {joined};
      n.fields.clear();
      break;
    }
    case TypeEditKind::kHashPromoteAll: {
      if (n.kind != TypeKind::kFiniteHash) return std::nullopt;
      std::vector<Type> vals;
      for (auto& [k, v] : n.fields) vals.push_back(v);
      Type joined = join_all(h, vals, nullptr);
      joined = join(h, joined, edit.written, nullptr);
      n.kind = TypeKind::kGeneric;
      n.name = cls::kHash;
      n.elems = {t_symbol(), joined};
      n.fields.clear();
      break;
    }
  }
  if (n.identity == 0) return std::nullopt;
  const auto* recs = store.records_for(n.identity);
  if (!recs) return std::nullopt;
  for (const auto& rec : *recs) {
    if (!subtype(h, rec.lhs, rec.rhs, nullptr)) {
      ReplayError err;
      err.violated = rec;
      err.mutated = target;
      err.message = "weak update invalidates recorded constraint " +
                    print_type(rec.lhs) + " <= " + print_type(rec.rhs);
      return err;
    }
  }
  return std::nullopt;
}

}  // namespace complang
