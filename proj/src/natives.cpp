#include "complang/natives.hpp"

#include <cstdio>
#include <cstdlib>

#include "complang/parser.hpp"
#include "complang/sql.hpp"

namespace complang {

namespace {

// The built-in library. Comp positions are written in the surface
// language itself and evaluated by the checker; plain positions behave
// like constant comp expressions.
const char* kPreludeSource = R"PRELUDE(
# Logic. The singleton arms make land/lor exact on known booleans.
lib Bool.land(t) : (%bool) ->
  <<if (tself == @(True)).land(t == @(True)) then @(True)
    else if (tself == @(False)).lor(t == @(False)) then @(False)
    else @(%bool) end end>> %bool
  [terminates=+, pure=+]

lib Bool.lor(t) : (%bool) ->
  <<if (tself == @(True)).lor(t == @(True)) then @(True)
    else if (tself == @(False)).land(t == @(False)) then @(False)
    else @(%bool) end end>> %bool
  [terminates=+, pure=+]

# Arithmetic stays singleton-precise when both sides are known.
lib Integer.plus(t) : (Integer) ->
  <<if tself.kindIs(:singleton).land(t.kindIs(:singleton))
    then tself.plusType(t) else @(Integer) end>> Integer
  [terminates=+, pure=+]

lib Integer.times(t) : (Integer) ->
  <<if tself.kindIs(:singleton).land(t.kindIs(:singleton))
    then tself.timesType(t) else @(Integer) end>> Integer
  [terminates=+, pure=+]

lib String.size(x) : (Nil) ->
  <<if tself.kindIs(:const_string) then tself.sizeType()
    else @(Integer) end>> Integer
  [terminates=+, pure=+]

lib String.concat(t) : (String) -> <<tself>> String [terminates=+, pure=-]

lib Array.first(x) : (Nil) ->
  <<if tself.kindIs(:tuple) then tself.eltOf(@(Sing(0)))
    else tself.valueType() end>> Object
  [terminates=+, pure=+]

lib Array.fetchAt(t) : (Integer) ->
  <<if tself.kindIs(:tuple).land(t.kindIs(:singleton))
    then tself.eltOf(t) else tself.valueType() end>> Object
  [terminates=+, pure=+]

lib Array.size(x) : (Nil) -> Integer [terminates=+, pure=+]

lib Array.push(t) :
  <<if tself.kindIs(:generic) then tself.valueType() else @(Object) end>>
  Object -> <<tself>> Array
  [terminates=+, pure=-]

lib Array.setFirst(t) :
  <<if tself.kindIs(:generic) then tself.valueType() else @(Object) end>>
  Object -> <<tself>> Array
  [terminates=+, pure=-]

lib Array.map(x) : (Nil) -> <<@(Array).genericNew(tblock)>> Array
  [terminates=blockdep, pure=+]

lib Array.each(x) : (Nil) -> <<tself>> Array [terminates=blockdep, pure=+]

lib Hash.fetch(t) : (Object) ->
  <<if tself.kindIs(:finite_hash).land(t.kindIs(:singleton))
    then tself.eltOf(t) else tself.valueType() end>> Object
  [terminates=+, pure=+]

lib Hash.key?(t) : (Symbol) -> %bool [terminates=+, pure=+]

lib Hash.store(t) : (Hash) -> <<tself>> Hash [terminates=+, pure=-]

# Type reflection; the vocabulary comp signatures are written in.
lib Type.kindIs(t) : (Symbol) -> %bool [terminates=+, pure=+]
lib Type.eltOf(t) : (Type) -> Type [terminates=+, pure=+]
lib Type.valueType(x) : (Nil) -> Type [terminates=+, pure=+]
lib Type.plusType(t) : (Type) -> Type [terminates=+, pure=+]
lib Type.timesType(t) : (Type) -> Type [terminates=+, pure=+]
lib Type.sizeType(x) : (Nil) -> Type [terminates=+, pure=+]
lib Type.mergeType(t) : (Type) -> Type [terminates=+, pure=+]
lib Type.keyed(t) : (Type) -> Type [terminates=+, pure=+]
lib Type.genericNew(t) : (Type) -> Type [terminates=+, pure=+]
lib Type.schemaType(x) : (Nil) -> Type [terminates=+, pure=+]
lib Type.assocCheck(t) : (Type) -> Nil [terminates=+, pure=+]
lib Type.sqlTypecheck(t) : (Type) -> Type [terminates=+, pure=+]

# Schema-aware queries.
lib Schema.table(t) : (Symbol) ->
  <<if t.kindIs(:singleton) then @(Table).genericNew(t.schemaType())
    else @(Table) end>> Table
  [terminates=+, pure=+]

lib Schema.lookupType(t) : (Symbol) -> Type [terminates=+, pure=+]

lib Schema.alter(t) : (Array) -> Nil [terminates=+, pure=-]

lib Table.joins(t) : (Symbol) ->
  <<if t.kindIs(:singleton)
    then tself.assocCheck(t) ;
         @(Table).genericNew(
           tself.schemaType().mergeType(t.keyed(t.schemaType())))
    else @(Table) end>> Table
  [terminates=+, pure=+]

lib Table.includes(t) : (Symbol) ->
  <<if t.kindIs(:singleton)
    then tself.assocCheck(t) ;
         @(Table).genericNew(
           tself.schemaType().mergeType(t.keyed(t.schemaType())))
    else @(Table) end>> Table
  [terminates=+, pure=+]

lib Table.exists?(t) : <<tself.schemaType()>> Hash -> %bool
  [terminates=+, pure=+]

lib Table.count(x) : (Nil) -> Integer [terminates=+, pure=+]

lib Table.where(t) :
  <<if t.kindIs(:const_string) then tself.sqlTypecheck(t)
    else if t.kindIs(:tuple) then tself.sqlTypecheck(t)
    else tself.schemaType() end end>>
  Object -> <<tself>> Table
  [terminates=+, pure=+]
)PRELUDE";

[[noreturn]] void fail(NativeCtx& ctx, const std::string& msg,
                       const std::string& code = "") {
  throw BlameSignal{{BlameKind::kTypeLevelError, msg, code, "", ctx.site}};
}

std::string kind_symbol(TypeKind k) {
  switch (k) {
    case TypeKind::kNominal: return "nominal";
    case TypeKind::kSingletonInt:
    case TypeKind::kSingletonSym:
    case TypeKind::kSingletonClass:
      return "singleton";
    case TypeKind::kConstString: return "const_string";
    case TypeKind::kUnion: return "union";
    case TypeKind::kGeneric: return "generic";
    case TypeKind::kFiniteHash: return "finite_hash";
    case TypeKind::kTuple: return "tuple";
  }
  return "nominal";
}

// Writes demote const strings to String: a mutable slot cannot keep a
// content-precise type.
Type widen_for_write(const Type& t) {
  if (t.is_kind(TypeKind::kConstString)) return t_string();
  return deep_copy_type(t);
}

SchemaRegistry& need_schema(NativeCtx& ctx, const char* who) {
  if (!ctx.schema) fail(ctx, std::string(who) + ": no schema loaded");
  return *ctx.schema;
}

Type table_param_or_empty(const Type& t) {
  if (t.is_kind(TypeKind::kGeneric) && t.node().name == cls::kTable &&
      !t.node().elems.empty()) {
    return t.node().elems[0];
  }
  return t_finite_hash({});
}

// Either-direction foreign-key pairing; cross product when neither side
// declares the key column.
bool rows_paired(const SchemaRegistry& reg, const std::string& base,
                 const Row& base_row, const std::string& other,
                 const Row& other_row) {
  auto column_exists = [&](const std::string& table, const std::string& col) {
    const TableDef* def = reg.table(table);
    if (!def) return false;
    for (const auto& c : def->columns) {
      if (c.name == col) return true;
    }
    return false;
  };
  auto cell = [](const Row& row, const std::string& col) {
    auto it = row.find(col);
    return it == row.end() ? v_nil() : it->second;
  };
  std::string fk_base = fk_column_for(base);
  if (column_exists(other, fk_base)) {
    return value_equal(cell(other_row, fk_base), cell(base_row, "id"));
  }
  std::string fk_other = fk_column_for(other);
  if (column_exists(base, fk_other)) {
    return value_equal(cell(base_row, fk_other), cell(other_row, "id"));
  }
  return true;
}

bool row_matches_conds(NativeCtx& ctx, const TableValue& tv,
                       const Row& base_row,
                       const std::vector<std::shared_ptr<HashInstance>>& conds) {
  const SchemaRegistry& reg = *ctx.schema;
  auto cell = [](const Row& row, const std::string& col) {
    auto it = row.find(col);
    return it == row.end() ? v_nil() : it->second;
  };
  for (const auto& cond : conds) {
    for (const auto& [key, want] : cond->entries) {
      if (want.kind == ValueKind::kHash) {
        const std::vector<Row>* rows2 = reg.rows(key);
        if (!rows2) return false;
        bool found = false;
        for (const Row& r2 : *rows2) {
          if (!rows_paired(reg, tv.base, base_row, key, r2)) continue;
          bool all = true;
          for (const auto& [k2, w2] : want.hash->entries) {
            if (!value_equal(cell(r2, k2), w2)) {
              all = false;
              break;
            }
          }
          if (all) {
            found = true;
            break;
          }
        }
        if (!found) return false;
      } else if (!value_equal(cell(base_row, key), want)) {
        return false;
      }
    }
  }
  return true;
}

std::vector<std::shared_ptr<HashInstance>> conds_with(
    const TableValue& tv, const Value& arg) {
  auto conds = tv.conds;
  if (arg.kind == ValueKind::kHash) conds.push_back(arg.hash);
  return conds;
}

Value make_joined_table(NativeCtx& ctx, const Value& recv, const Value& arg,
                        const char* who) {
  if (arg.kind != ValueKind::kSym) {
    fail(ctx, std::string(who) + " expects a symbol");
  }
  SchemaRegistry& reg = need_schema(ctx, who);
  auto joined_fh = reg.schema_fh(arg.sym);
  if (!joined_fh) fail(ctx, std::string(who) + ": unknown table :" + arg.sym);
  std::vector<std::pair<std::string, Type>> fields;
  if (recv.table->schema_snapshot.is_kind(TypeKind::kFiniteHash)) {
    fields = recv.table->schema_snapshot.node().fields;
  }
  bool replaced = false;
  for (auto& [k, v] : fields) {
    if (k == arg.sym) {
      v = *joined_fh;
      replaced = true;
    }
  }
  if (!replaced) fields.emplace_back(arg.sym, *joined_fh);
  auto tv = std::make_shared<TableValue>(*recv.table);
  tv->joined.push_back(arg.sym);
  tv->schema_snapshot = t_finite_hash(std::move(fields));
  return v_table(std::move(tv));
}

// --- weak-update descriptors -------------------------------------------

std::vector<TypeEdit> edits_push(const ClassHierarchy&, const Type& recv,
                                 const Type& arg) {
  if (recv.is_kind(TypeKind::kTuple)) {
    return {TypeEdit{TypeEditKind::kArrayPromoteAppend, 0, "",
                     widen_for_write(arg)}};
  }
  return {};
}

std::vector<TypeEdit> edits_set_first(const ClassHierarchy&, const Type& recv,
                                      const Type& arg) {
  if (recv.is_kind(TypeKind::kTuple)) {
    return {TypeEdit{TypeEditKind::kTupleIndexWrite, 0, "",
                     widen_for_write(arg)}};
  }
  return {};
}

std::vector<TypeEdit> edits_store(const ClassHierarchy& h, const Type& recv,
                                  const Type& arg) {
  if (!recv.is_kind(TypeKind::kFiniteHash)) return {};
  std::vector<TypeEdit> edits;
  if (arg.is_kind(TypeKind::kFiniteHash)) {
    for (const auto& [k, v] : arg.node().fields) {
      edits.push_back(
          TypeEdit{TypeEditKind::kHashKeyWrite, 0, k, widen_for_write(v)});
    }
  } else {
    edits.push_back(TypeEdit{TypeEditKind::kHashPromoteAll, 0, "",
                             widen_for_write(element_type_of(h, arg))});
  }
  return edits;
}

std::vector<TypeEdit> edits_concat(const ClassHierarchy&, const Type& recv,
                                   const Type&) {
  if (recv.is_kind(TypeKind::kConstString)) {
    return {TypeEdit{TypeEditKind::kConstStringWrite, 0, "", Type{}}};
  }
  return {};
}

// --- native bodies ------------------------------------------------------

void add_logic(NativeRegistry& reg) {
  reg.add(cls::kBool, "land",
          {[](NativeCtx&, const Value& recv, const Value& arg) {
            return v_bool(truthy(recv) && truthy(arg));
          }});
  reg.add(cls::kBool, "lor",
          {[](NativeCtx&, const Value& recv, const Value& arg) {
            return v_bool(truthy(recv) || truthy(arg));
          }});
  reg.add(cls::kInteger, "plus",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            if (arg.kind != ValueKind::kInt) {
              fail(ctx, "plus expects an integer argument");
            }
            return v_int(recv.i + arg.i);
          }});
  reg.add(cls::kInteger, "times",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            if (arg.kind != ValueKind::kInt) {
              fail(ctx, "times expects an integer argument");
            }
            return v_int(recv.i * arg.i);
          }});
}

void add_strings(NativeRegistry& reg) {
  reg.add(cls::kString, "size",
          {[](NativeCtx&, const Value& recv, const Value&) {
            return v_int(static_cast<long long>(recv.str->content.size()));
          }});
  reg.add(cls::kString, "concat",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
             if (arg.kind != ValueKind::kString) {
               fail(ctx, "concat expects a string argument");
             }
             recv.str->content += arg.str->content;
             recv.str->is_const = false;
             return recv;
           },
           edits_concat});
}

void add_arrays(NativeRegistry& reg) {
  reg.add(cls::kArray, "first",
          {[](NativeCtx&, const Value& recv, const Value&) {
            return recv.arr->elems.empty() ? v_nil() : recv.arr->elems[0];
          }});
  reg.add(cls::kArray, "fetchAt",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            if (arg.kind != ValueKind::kInt) {
              fail(ctx, "fetchAt expects an integer index");
            }
            if (arg.i < 0 ||
                arg.i >= static_cast<long long>(recv.arr->elems.size())) {
              return v_nil();
            }
            return recv.arr->elems[static_cast<std::size_t>(arg.i)];
          }});
  reg.add(cls::kArray, "size",
          {[](NativeCtx&, const Value& recv, const Value&) {
            return v_int(static_cast<long long>(recv.arr->elems.size()));
          }});
  reg.add(cls::kArray, "push",
          {[](NativeCtx&, const Value& recv, const Value& arg) {
             recv.arr->elems.push_back(arg);
             return recv;
           },
           edits_push});
  reg.add(cls::kArray, "setFirst",
          {[](NativeCtx&, const Value& recv, const Value& arg) {
             if (recv.arr->elems.empty()) {
               recv.arr->elems.push_back(arg);
             } else {
               recv.arr->elems[0] = arg;
             }
             return recv;
           },
           edits_set_first});
  reg.add(cls::kArray, "map",
          {[](NativeCtx& ctx, const Value& recv, const Value&) {
            if (!ctx.has_block()) fail(ctx, "map requires a block");
            std::vector<Value> out;
            out.reserve(recv.arr->elems.size());
            for (const Value& e : recv.arr->elems) {
              out.push_back(ctx.call_block(e));
            }
            return v_array(std::move(out));
          }});
  reg.add(cls::kArray, "each",
          {[](NativeCtx& ctx, const Value& recv, const Value&) {
            if (!ctx.has_block()) fail(ctx, "each requires a block");
            for (const Value& e : recv.arr->elems) ctx.call_block(e);
            return recv;
          }});
}

void add_hashes(NativeRegistry& reg) {
  reg.add(cls::kHash, "fetch",
          {[](NativeCtx&, const Value& recv, const Value& arg) {
            if (arg.kind != ValueKind::kSym) return v_nil();
            const Value* v = recv.hash->find(arg.sym);
            return v ? *v : v_nil();
          }});
  reg.add(cls::kHash, "key?",
          {[](NativeCtx&, const Value& recv, const Value& arg) {
            if (arg.kind != ValueKind::kSym) return v_bool(false);
            return v_bool(recv.hash->find(arg.sym) != nullptr);
          }});
  reg.add(cls::kHash, "store",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
             if (arg.kind != ValueKind::kHash) {
               fail(ctx, "store expects a hash argument");
             }
             for (const auto& [k, v] : arg.hash->entries) {
               if (Value* slot = recv.hash->find(k)) {
                 *slot = v;
               } else {
                 recv.hash->entries.emplace_back(k, v);
               }
             }
             return recv;
           },
           edits_store});
}

void add_reflection(NativeRegistry& reg) {
  reg.add(cls::kType, "kindIs",
          {[](NativeCtx&, const Value& recv, const Value& arg) {
            if (arg.kind != ValueKind::kSym) return v_bool(false);
            return v_bool(kind_symbol(recv.type.kind()) == arg.sym);
          }});
  reg.add(cls::kType, "eltOf",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            if (arg.kind != ValueKind::kType) {
              fail(ctx, "eltOf expects a type argument");
            }
            const Type& t = recv.type;
            const Type& key = arg.type;
            if (t.is_kind(TypeKind::kFiniteHash) &&
                key.is_kind(TypeKind::kSingletonSym)) {
              for (const auto& [k, v] : t.node().fields) {
                if (k == key.node().name) return v_type(v);
              }
              return v_type(t_nil());
            }
            if (t.is_kind(TypeKind::kTuple) &&
                key.is_kind(TypeKind::kSingletonInt)) {
              long long i = key.node().int_value;
              if (i < 0 ||
                  i >= static_cast<long long>(t.node().elems.size())) {
                return v_type(t_nil());
              }
              return v_type(t.node().elems[static_cast<std::size_t>(i)]);
            }
            fail(ctx,
                 "eltOf needs a finite hash or tuple receiver and a "
                 "singleton key, got " +
                     print_type(t) + " and " + print_type(key));
          }});
  reg.add(cls::kType, "valueType",
          {[](NativeCtx& ctx, const Value& recv, const Value&) {
            return v_type(element_type_of(ctx.ct->hierarchy(), recv.type));
          }});
  reg.add(cls::kType, "plusType",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            if (!recv.type.is_kind(TypeKind::kSingletonInt) ||
                arg.kind != ValueKind::kType ||
                !arg.type.is_kind(TypeKind::kSingletonInt)) {
              fail(ctx, "plusType expects two integer singletons");
            }
            return v_type(t_sing_int(recv.type.node().int_value +
                                     arg.type.node().int_value));
          }});
  reg.add(cls::kType, "timesType",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            if (!recv.type.is_kind(TypeKind::kSingletonInt) ||
                arg.kind != ValueKind::kType ||
                !arg.type.is_kind(TypeKind::kSingletonInt)) {
              fail(ctx, "timesType expects two integer singletons");
            }
            return v_type(t_sing_int(recv.type.node().int_value *
                                     arg.type.node().int_value));
          }});
  reg.add(cls::kType, "sizeType",
          {[](NativeCtx& ctx, const Value& recv, const Value&) {
            if (!recv.type.is_kind(TypeKind::kConstString)) {
              fail(ctx, "sizeType expects a const string type");
            }
            return v_type(t_sing_int(
                static_cast<long long>(recv.type.node().text.size())));
          }});
  reg.add(cls::kType, "mergeType",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            if (!recv.type.is_kind(TypeKind::kFiniteHash) ||
                arg.kind != ValueKind::kType ||
                !arg.type.is_kind(TypeKind::kFiniteHash)) {
              fail(ctx, "mergeType expects two finite hash types");
            }
            auto fields = recv.type.node().fields;
            for (const auto& [k, v] : arg.type.node().fields) {
              bool replaced = false;
              for (auto& [fk, fv] : fields) {
                if (fk == k) {
                  fv = v;
                  replaced = true;
                }
              }
              if (!replaced) fields.emplace_back(k, v);
            }
            return v_type(t_finite_hash(std::move(fields)));
          }});
  reg.add(cls::kType, "keyed",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            if (!recv.type.is_kind(TypeKind::kSingletonSym) ||
                arg.kind != ValueKind::kType) {
              fail(ctx, "keyed expects a symbol singleton receiver and a "
                        "type argument");
            }
            return v_type(
                t_finite_hash({{recv.type.node().name, arg.type}}));
          }});
  reg.add(cls::kType, "genericNew",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            if (!recv.type.is_kind(TypeKind::kNominal) ||
                arg.kind != ValueKind::kType) {
              fail(ctx, "genericNew expects a class receiver and a type "
                        "argument");
            }
            const std::string& base = recv.type.node().name;
            if (base != cls::kArray && base != cls::kTable) {
              fail(ctx, "genericNew supports Array and Table, got " + base);
            }
            return v_type(t_generic(base, {arg.type}));
          }});
  reg.add(cls::kType, "schemaType",
          {[](NativeCtx& ctx, const Value& recv, const Value&) {
            const Type& t = recv.type;
            if (t.is_kind(TypeKind::kGeneric) &&
                t.node().name == cls::kTable && !t.node().elems.empty()) {
              return v_type(t.node().elems[0]);
            }
            if (t.is_kind(TypeKind::kSingletonSym)) {
              SchemaRegistry& reg2 = need_schema(ctx, "schemaType");
              auto fh = reg2.schema_fh(t.node().name);
              if (!fh) {
                fail(ctx, "schemaType: unknown table :" + t.node().name);
              }
              return v_type(*fh);
            }
            return v_type(
                t_generic(cls::kHash, {t_symbol(), t_object()}));
          }});
  reg.add(cls::kType, "assocCheck",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            if (arg.kind != ValueKind::kType ||
                !arg.type.is_kind(TypeKind::kSingletonSym)) {
              fail(ctx, "assocCheck expects a symbol singleton");
            }
            SchemaRegistry& reg2 = need_schema(ctx, "assocCheck");
            if (!reg2.assocs_declared_at_all()) return v_nil();
            auto base = sql::base_table_of(table_param_or_empty(recv.type),
                                           reg2);
            if (!base) {
              fail(ctx, "assocCheck: cannot determine the base table of " +
                            print_type(recv.type));
            }
            const std::string& to = arg.type.node().name;
            if (!reg2.assoc_declared(*base, to)) {
              fail(ctx, "no association from " + *base + " to " + to +
                            " is declared in the schema");
            }
            return v_nil();
          }});
  reg.add(cls::kType, "sqlTypecheck",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            if (arg.kind != ValueKind::kType) {
              fail(ctx, "sqlTypecheck expects a type argument");
            }
            SchemaRegistry& reg2 = need_schema(ctx, "sqlTypecheck");
            const Type& t = arg.type;
            std::string fragment;
            std::vector<Type> arg_types;
            if (t.is_kind(TypeKind::kConstString)) {
              fragment = t.node().text;
            } else if (t.is_kind(TypeKind::kTuple)) {
              const auto& elems = t.node().elems;
              if (elems.empty() ||
                  !elems[0].is_kind(TypeKind::kConstString)) {
                fail(ctx,
                     "a raw SQL condition must start with a constant "
                     "string, got " +
                         print_type(t));
              }
              fragment = elems[0].node().text;
              arg_types.assign(elems.begin() + 1, elems.end());
            } else {
              fail(ctx, "sqlTypecheck expects a constant string or a "
                        "tuple, got " +
                            print_type(t));
            }
            Type recv_fh = table_param_or_empty(recv.type);
            sql::CheckOutcome out =
                sql::check_fragment(fragment, arg_types, recv_fh, reg2);
            if (!out.ok) {
              const sql::SqlError& first = out.errors.front();
              throw BlameSignal{{BlameKind::kTypeLevelError, first.message,
                                 first.code, out.artificial, ctx.site}};
            }
            return v_type(t);
          }});
}

void add_schema_and_tables(NativeRegistry& reg) {
  reg.add(cls::kSchema, "table",
          {[](NativeCtx& ctx, const Value&, const Value& arg) {
            if (arg.kind != ValueKind::kSym) {
              fail(ctx, "table expects a symbol");
            }
            SchemaRegistry& reg2 = need_schema(ctx, "table");
            auto fh = reg2.schema_fh(arg.sym);
            if (!fh) fail(ctx, "table: unknown table :" + arg.sym);
            auto tv = std::make_shared<TableValue>();
            tv->base = arg.sym;
            tv->schema_snapshot = *fh;
            return v_table(std::move(tv));
          }});
  reg.add(cls::kSchema, "lookupType",
          {[](NativeCtx& ctx, const Value&, const Value& arg) {
            if (arg.kind != ValueKind::kSym) {
              fail(ctx, "lookupType expects a symbol");
            }
            SchemaRegistry& reg2 = need_schema(ctx, "lookupType");
            auto fh = reg2.schema_fh(arg.sym);
            if (!fh) fail(ctx, "lookupType: unknown table :" + arg.sym);
            return v_type(*fh);
          }});
  reg.add(cls::kSchema, "alter",
          {[](NativeCtx& ctx, const Value&, const Value& arg) {
            if (arg.kind != ValueKind::kArray ||
                arg.arr->elems.size() != 2 ||
                arg.arr->elems[0].kind != ValueKind::kSym ||
                arg.arr->elems[1].kind != ValueKind::kSym) {
              fail(ctx, "alter expects [:table, :column]");
            }
            SchemaRegistry& reg2 = need_schema(ctx, "alter");
            if (!reg2.drop_column(arg.arr->elems[0].sym,
                                  arg.arr->elems[1].sym)) {
              fail(ctx, "alter: unknown table or column");
            }
            return v_nil();
          }});
  reg.add(cls::kTable, "joins",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            return make_joined_table(ctx, recv, arg, "joins");
          }});
  reg.add(cls::kTable, "includes",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            return make_joined_table(ctx, recv, arg, "includes");
          }});
  reg.add(cls::kTable, "exists?",
          {[](NativeCtx& ctx, const Value& recv, const Value& arg) {
            SchemaRegistry& reg2 = need_schema(ctx, "exists?");
            const std::vector<Row>* rows = reg2.rows(recv.table->base);
            if (!rows)fail(ctx, "exists?: unknown table " + recv.table->base);
            auto conds = conds_with(*recv.table, arg);
            for (const Row& row : *rows) {
              if (row_matches_conds(ctx, *recv.table, row, conds)) {
                return v_bool(true);
              }
            }
            return v_bool(false);
          }});
  reg.add(cls::kTable, "count",
          {[](NativeCtx& ctx, const Value& recv, const Value&) {
            SchemaRegistry& reg2 = need_schema(ctx, "count");
            const std::vector<Row>* rows = reg2.rows(recv.table->base);
            if (!rows) fail(ctx, "count: unknown table " + recv.table->base);
            long long n = 0;
            for (const Row& row : *rows) {
              if (row_matches_conds(ctx, *recv.table, row,
                                    recv.table->conds)) {
                ++n;
              }
            }
            return v_int(n);
          }});
  reg.add(cls::kTable, "where",
          {[](NativeCtx&, const Value& recv, const Value& arg) {
            auto tv = std::make_shared<TableValue>(*recv.table);
            // Hash conditions filter the scan; raw SQL fragments are
            // checked statically and are a no-op here.
            if (arg.kind == ValueKind::kHash) tv->conds.push_back(arg.hash);
            return v_table(std::move(tv));
          }});
}

}  // namespace

void NativeRegistry::add(const std::string& cls, const std::string& method,
                         NativeEntry e) {
  entries_[{cls, method}] = std::move(e);
}

const NativeEntry* NativeRegistry::find(const std::string& cls,
                                        const std::string& method) const {
  auto it = entries_.find({cls, method});
  return it == entries_.end() ? nullptr : &it->second;
}

const char* prelude_source() { return kPreludeSource; }

void register_prelude(ClassTable& ct, NativeRegistry& reg) {
  ParseResult parsed = parse_program(kPreludeSource);
  if (!parsed.ok) {
    std::fprintf(stderr, "fatal: prelude does not parse: %s\n",
                 parsed.diags.empty() ? "?"
                                      : parsed.diags[0].message.c_str());
    std::abort();
  }
  Diagnostics diags;
  if (!merge_program_into(ct, parsed.program, diags)) {
    std::fprintf(stderr, "fatal: prelude does not merge: %s\n",
                 diags.empty() ? "?" : diags[0].message.c_str());
    std::abort();
  }
  add_logic(reg);
  add_strings(reg);
  add_arrays(reg);
  add_hashes(reg);
  add_reflection(reg);
  add_schema_and_tables(reg);
  for (const MethodEntry* e : ct.all_entries()) {
    if (e->origin == MethodOrigin::kLibrary && !reg.find(e->cls, e->name)) {
      std::fprintf(stderr, "fatal: prelude method %s.%s has no native\n",
                   e->cls.c_str(), e->name.c_str());
      std::abort();
    }
  }
}

}  // namespace complang
