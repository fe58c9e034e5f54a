#include "complang/value.hpp"

namespace complang {

Value* HashInstance::find(const std::string& key) {
  for (auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

const Value* HashInstance::find(const std::string& key) const {
  for (auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

Value v_nil() { return Value{}; }

Value v_bool(bool b) {
  Value v;
  v.kind = b ? ValueKind::kTrue : ValueKind::kFalse;
  return v;
}

Value v_int(long long x) {
  Value v;
  v.kind = ValueKind::kInt;
  v.i = x;
  return v;
}

Value v_sym(const std::string& s) {
  Value v;
  v.kind = ValueKind::kSym;
  v.sym = s;
  return v;
}

Value v_string(const std::string& content, bool is_const) {
  Value v;
  v.kind = ValueKind::kString;
  v.str = std::make_shared<StringInstance>(StringInstance{content, is_const});
  return v;
}

Value v_object(const std::string& cls) {
  Value v;
  v.kind = ValueKind::kObject;
  v.sym = cls;
  return v;
}

Value v_array(std::vector<Value> elems) {
  Value v;
  v.kind = ValueKind::kArray;
  v.arr = std::make_shared<ArrayInstance>(ArrayInstance{std::move(elems)});
  return v;
}

Value v_hash(std::vector<std::pair<std::string, Value>> entries) {
  Value v;
  v.kind = ValueKind::kHash;
  v.hash = std::make_shared<HashInstance>(HashInstance{std::move(entries)});
  return v;
}

Value v_type(Type t) {
  Value v;
  v.kind = ValueKind::kType;
  v.type = std::move(t);
  return v;
}

Value v_table(std::shared_ptr<TableValue> t) {
  Value v;
  v.kind = ValueKind::kTable;
  v.table = std::move(t);
  return v;
}

Value v_lambda(std::shared_ptr<LambdaValue> l) {
  Value v;
  v.kind = ValueKind::kLambda;
  v.lambda = std::move(l);
  return v;
}

bool value_equal(const Value& a, const Value& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ValueKind::kNil:
    case ValueKind::kTrue:
    case ValueKind::kFalse:
      return true;
    case ValueKind::kInt:
      return a.i == b.i;
    case ValueKind::kSym:
      return a.sym == b.sym;
    case ValueKind::kString:
      return a.str->content == b.str->content;
    case ValueKind::kObject:
      return a.sym == b.sym;
    case ValueKind::kArray:
      return a.arr == b.arr;
    case ValueKind::kHash:
      return a.hash == b.hash;
    case ValueKind::kType:
      return type_equal(a.type, b.type);
    case ValueKind::kTable:
      return a.table == b.table;
    case ValueKind::kLambda:
      return a.lambda == b.lambda;
  }
  return false;
}

Type type_of(const Value& v) {
  switch (v.kind) {
    case ValueKind::kNil:
      return t_nil();
    case ValueKind::kTrue:
      return t_true();
    case ValueKind::kFalse:
      return t_false();
    case ValueKind::kInt:
      return t_sing_int(v.i);
    case ValueKind::kSym:
      return t_sing_sym(v.sym);
    case ValueKind::kString:
      return v.str->is_const ? t_const_string(v.str->content) : t_string();
    case ValueKind::kObject:
      return t_nominal(v.sym);
    case ValueKind::kArray: {
      std::vector<Type> elems;
      elems.reserve(v.arr->elems.size());
      for (auto& e : v.arr->elems) elems.push_back(type_of(e));
      return t_tuple(std::move(elems));
    }
    case ValueKind::kHash: {
      std::vector<std::pair<std::string, Type>> fields;
      fields.reserve(v.hash->entries.size());
      for (auto& [k, val] : v.hash->entries) {
        fields.emplace_back(k, type_of(val));
      }
      return t_finite_hash(std::move(fields));
    }
    case ValueKind::kType:
      return t_type();
    case ValueKind::kTable:
      return t_generic(cls::kTable, {v.table->schema_snapshot});
    case ValueKind::kLambda:
      return t_lambda();
  }
  return t_object();
}

std::string class_of_value(const Value& v) {
  switch (v.kind) {
    case ValueKind::kNil:
      return cls::kNil;
    case ValueKind::kTrue:
      return cls::kTrue;
    case ValueKind::kFalse:
      return cls::kFalse;
    case ValueKind::kInt:
      return cls::kInteger;
    case ValueKind::kSym:
      return cls::kSymbol;
    case ValueKind::kString:
      return cls::kString;
    case ValueKind::kObject:
      return v.sym;
    case ValueKind::kArray:
      return cls::kArray;
    case ValueKind::kHash:
      return cls::kHash;
    case ValueKind::kType:
      return cls::kType;
    case ValueKind::kTable:
      return cls::kTable;
    case ValueKind::kLambda:
      return cls::kLambda;
  }
  return cls::kObject;
}

std::string print_value(const Value& v) {
  switch (v.kind) {
    case ValueKind::kNil:
      return "nil";
    case ValueKind::kTrue:
      return "true";
    case ValueKind::kFalse:
      return "false";
    case ValueKind::kInt:
      return std::to_string(v.i);
    case ValueKind::kSym:
      return ":" + v.sym;
    case ValueKind::kString:
      return quote_string(v.str->content);
    case ValueKind::kObject:
      return "#<" + v.sym + ">";
    case ValueKind::kArray: {
      std::string out = "[";
      for (std::size_t i = 0; i < v.arr->elems.size(); ++i) {
        if (i) out += ", ";
        out += print_value(v.arr->elems[i]);
      }
      return out + "]";
    }
    case ValueKind::kHash: {
      std::string out = "{";
      for (std::size_t i = 0; i < v.hash->entries.size(); ++i) {
        if (i) out += ", ";
        out += v.hash->entries[i].first + ": " +
               print_value(v.hash->entries[i].second);
      }
      return out + "}";
    }
    case ValueKind::kType:
      return print_type(v.type);
    case ValueKind::kTable: {
      std::string out = "#<Table " + v.table->base;
      for (auto& j : v.table->joined) out += "+" + j;
      return out + ">";
    }
    case ValueKind::kLambda:
      return "#<lambda>";
  }
  return "<?>";
}

}  // namespace complang
