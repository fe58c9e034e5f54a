#include "complang/type.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

namespace complang {

namespace {

std::atomic<std::uint64_t> g_identity_counter{1};

std::shared_ptr<TypeNode> make_node(TypeKind k) {
  auto n = std::make_shared<TypeNode>();
  n->kind = k;
  return n;
}

}  // namespace

TypeKind Type::kind() const { return node_->kind; }

bool Type::is_nominal(const std::string& name) const {
  return defined() && node_->kind == TypeKind::kNominal && node_->name == name;
}

std::uint64_t fresh_type_identity() {
  return g_identity_counter.fetch_add(1, std::memory_order_relaxed);
}

Type t_nominal(const std::string& name) {
  auto n = make_node(TypeKind::kNominal);
  n->name = name;
  return Type(n);
}

Type t_sing_int(long long v) {
  auto n = make_node(TypeKind::kSingletonInt);
  n->int_value = v;
  return Type(n);
}

Type t_sing_sym(const std::string& sym) {
  auto n = make_node(TypeKind::kSingletonSym);
  n->name = sym;
  return Type(n);
}

Type t_sing_class(const std::string& name) {
  auto n = make_node(TypeKind::kSingletonClass);
  n->name = name;
  return Type(n);
}

Type t_const_string(const std::string& content) {
  auto n = make_node(TypeKind::kConstString);
  n->text = content;
  n->identity = fresh_type_identity();
  return Type(n);
}

Type t_tuple(std::vector<Type> elems) {
  auto n = make_node(TypeKind::kTuple);
  n->elems = std::move(elems);
  n->identity = fresh_type_identity();
  return Type(n);
}

Type t_finite_hash(std::vector<std::pair<std::string, Type>> fields) {
  auto n = make_node(TypeKind::kFiniteHash);
  n->fields = std::move(fields);
  n->identity = fresh_type_identity();
  return Type(n);
}

Type t_generic(const std::string& base, std::vector<Type> params) {
  auto n = make_node(TypeKind::kGeneric);
  n->name = base;
  n->elems = std::move(params);
  return Type(n);
}

Type t_union(std::vector<Type> members) {
  std::vector<Type> flat;
  for (auto& m : members) {
    if (m.is_kind(TypeKind::kUnion)) {
      for (auto& inner : m.node().elems) flat.push_back(inner);
    } else {
      flat.push_back(m);
    }
  }
  // True and False together collapse to %bool.
  bool has_true = false, has_false = false;
  for (auto& m : flat) {
    if (m.is_nominal(cls::kTrue)) has_true = true;
    if (m.is_nominal(cls::kFalse)) has_false = true;
  }
  if (has_true && has_false) {
    std::vector<Type> replaced;
    replaced.push_back(t_bool());
    for (auto& m : flat) {
      if (!m.is_nominal(cls::kTrue) && !m.is_nominal(cls::kFalse)) {
        replaced.push_back(m);
      }
    }
    flat = std::move(replaced);
  }
  std::vector<Type> dedup;
  for (auto& m : flat) {
    bool seen = false;
    for (auto& d : dedup) {
      if (type_equal(m, d)) {
        seen = true;
        break;
      }
    }
    if (!seen) dedup.push_back(m);
  }
  if (dedup.empty()) return t_nil();
  if (dedup.size() == 1) return dedup.front();
  std::sort(dedup.begin(), dedup.end(), [](const Type& a, const Type& b) {
    return print_type(a) < print_type(b);
  });
  auto n = make_node(TypeKind::kUnion);
  n->elems = std::move(dedup);
  return Type(n);
}

Type t_nil() { return t_nominal(cls::kNil); }
Type t_object() { return t_nominal(cls::kObject); }
Type t_bool() { return t_nominal(cls::kBool); }
Type t_true() { return t_nominal(cls::kTrue); }
Type t_false() { return t_nominal(cls::kFalse); }
Type t_type() { return t_nominal(cls::kType); }
Type t_integer() { return t_nominal(cls::kInteger); }
Type t_string() { return t_nominal(cls::kString); }
Type t_symbol() { return t_nominal(cls::kSymbol); }
Type t_lambda() { return t_nominal(cls::kLambda); }

Type deep_copy_type(const Type& t) {
  if (!t.defined()) return t;
  const TypeNode& n = t.node();
  auto c = std::make_shared<TypeNode>();
  c->kind = n.kind;
  c->name = n.name;
  c->int_value = n.int_value;
  c->text = n.text;
  for (auto& e : n.elems) c->elems.push_back(deep_copy_type(e));
  for (auto& [k, v] : n.fields) c->fields.emplace_back(k, deep_copy_type(v));
  if (n.identity != 0) c->identity = fresh_type_identity();
  return Type(c);
}

std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += ch;
    }
  }
  out += '"';
  return out;
}

std::string print_type(const Type& t) {
  if (!t.defined()) return "<undefined>";
  const TypeNode& n = t.node();
  switch (n.kind) {
    case TypeKind::kNominal:
      if (n.name == cls::kBool) return "%bool";
      return n.name;
    case TypeKind::kSingletonInt:
      return "Sing(" + std::to_string(n.int_value) + ")";
    case TypeKind::kSingletonSym:
      return "Sing(:" + n.name + ")";
    case TypeKind::kSingletonClass:
      return "Sing(" + n.name + ")";
    case TypeKind::kConstString:
      return "CStr(" + quote_string(n.text) + ")";
    case TypeKind::kUnion: {
      std::vector<std::string> parts;
      parts.reserve(n.elems.size());
      for (auto& m : n.elems) parts.push_back(print_type(m));
      std::sort(parts.begin(), parts.end());
      std::string out;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += " or ";
        out += parts[i];
      }
      return out;
    }
    case TypeKind::kGeneric: {
      std::string out = n.name + "<";
      for (std::size_t i = 0; i < n.elems.size(); ++i) {
        if (i) out += ", ";
        out += print_type(n.elems[i]);
      }
      out += ">";
      return out;
    }
    case TypeKind::kFiniteHash: {
      std::string out = "{";
      for (std::size_t i = 0; i < n.fields.size(); ++i) {
        if (i) out += ", ";
        out += n.fields[i].first + ": " + print_type(n.fields[i].second);
      }
      out += "}";
      return out;
    }
    case TypeKind::kTuple: {
      std::string out = "[";
      for (std::size_t i = 0; i < n.elems.size(); ++i) {
        if (i) out += ", ";
        out += print_type(n.elems[i]);
      }
      out += "]";
      return out;
    }
  }
  return "<unknown>";
}

bool type_equal(const Type& a, const Type& b) {
  if (a.ptr() == b.ptr()) return true;
  if (!a.defined() || !b.defined()) return a.defined() == b.defined();
  const TypeNode& x = a.node();
  const TypeNode& y = b.node();
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case TypeKind::kNominal:
    case TypeKind::kSingletonSym:
    case TypeKind::kSingletonClass:
      return x.name == y.name;
    case TypeKind::kSingletonInt:
      return x.int_value == y.int_value;
    case TypeKind::kConstString:
      return x.text == y.text;
    case TypeKind::kGeneric: {
      if (x.name != y.name || x.elems.size() != y.elems.size()) return false;
      for (std::size_t i = 0; i < x.elems.size(); ++i) {
        if (!type_equal(x.elems[i], y.elems[i])) return false;
      }
      return true;
    }
    case TypeKind::kTuple: {
      if (x.elems.size() != y.elems.size()) return false;
      for (std::size_t i = 0; i < x.elems.size(); ++i) {
        if (!type_equal(x.elems[i], y.elems[i])) return false;
      }
      return true;
    }
    case TypeKind::kFiniteHash: {
      if (x.fields.size() != y.fields.size()) return false;
      for (std::size_t i = 0; i < x.fields.size(); ++i) {
        if (x.fields[i].first != y.fields[i].first) return false;
        if (!type_equal(x.fields[i].second, y.fields[i].second)) return false;
      }
      return true;
    }
    case TypeKind::kUnion: {
      if (x.elems.size() != y.elems.size()) return false;
      // Members may have been mutated since construction; compare in
      // freshly sorted canonical order.
      auto sorted = [](const std::vector<Type>& ms) {
        std::vector<std::pair<std::string, const Type*>> v;
        v.reserve(ms.size());
        for (auto& m : ms) v.emplace_back(print_type(m), &m);
        std::sort(v.begin(), v.end(),
                  [](auto& l, auto& r) { return l.first < r.first; });
        return v;
      };
      auto xs = sorted(x.elems);
      auto ys = sorted(y.elems);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!type_equal(*xs[i].second, *ys[i].second)) return false;
      }
      return true;
    }
  }
  return false;
}

ClassHierarchy::ClassHierarchy() {
  parent_[cls::kObject] = "";
  parent_[cls::kBool] = cls::kObject;
  parent_[cls::kTrue] = cls::kBool;
  parent_[cls::kFalse] = cls::kBool;
  parent_[cls::kNil] = cls::kObject;
  parent_[cls::kType] = cls::kObject;
  parent_[cls::kInteger] = cls::kObject;
  parent_[cls::kString] = cls::kObject;
  parent_[cls::kSymbol] = cls::kObject;
  parent_[cls::kArray] = cls::kObject;
  parent_[cls::kHash] = cls::kObject;
  parent_[cls::kTable] = cls::kObject;
  parent_[cls::kSchema] = cls::kObject;
  parent_[cls::kLambda] = cls::kObject;
}

bool ClassHierarchy::add_class(const std::string& name,
                               const std::string& parent) {
  if (parent_.count(name)) return false;
  if (!parent.empty() && !parent_.count(parent)) return false;
  parent_[name] = parent.empty() ? cls::kObject : parent;
  return true;
}

bool ClassHierarchy::has_class(const std::string& name) const {
  return parent_.count(name) != 0;
}

const std::string* ClassHierarchy::parent_of(const std::string& name) const {
  auto it = parent_.find(name);
  if (it == parent_.end() || it->second.empty()) return nullptr;
  return &it->second;
}

bool ClassHierarchy::nominal_le(const std::string& a,
                                const std::string& b) const {
  std::string cur = a;
  while (true) {
    if (cur == b) return true;
    auto it = parent_.find(cur);
    if (it == parent_.end() || it->second.empty()) return false;
    cur = it->second;
  }
}

std::string ClassHierarchy::lub(const std::string& a,
                                const std::string& b) const {
  std::string cur = a;
  while (true) {
    if (nominal_le(b, cur)) return cur;
    auto it = parent_.find(cur);
    if (it == parent_.end() || it->second.empty()) return cls::kObject;
    cur = it->second;
  }
}

std::vector<std::string> ClassHierarchy::class_names() const {
  std::vector<std::string> out;
  out.reserve(parent_.size());
  for (auto& [k, v] : parent_) out.push_back(k);
  return out;
}

std::string class_of_type(const ClassHierarchy& h, const Type& t) {
  if (!t.defined()) return cls::kObject;
  const TypeNode& n = t.node();
  switch (n.kind) {
    case TypeKind::kNominal:
      return n.name;
    case TypeKind::kSingletonInt:
      return cls::kInteger;
    case TypeKind::kSingletonSym:
      return cls::kSymbol;
    case TypeKind::kSingletonClass:
      return cls::kType;
    case TypeKind::kConstString:
      return cls::kString;
    case TypeKind::kGeneric:
      return n.name;
    case TypeKind::kFiniteHash:
      return cls::kHash;
    case TypeKind::kTuple:
      return cls::kArray;
    case TypeKind::kUnion: {
      // Nil is the bottom type; a nil member never widens the dispatch
      // class (nil receivers blame at runtime instead).
      std::string acc;
      for (auto& m : n.elems) {
        std::string c = class_of_type(h, m);
        if (c == cls::kNil) continue;
        acc = acc.empty() ? c : h.lub(acc, c);
      }
      return acc.empty() ? cls::kNil : acc;
    }
  }
  return cls::kObject;
}

}  // namespace complang
