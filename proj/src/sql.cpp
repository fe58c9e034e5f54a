#include "complang/sql.hpp"

#include <cctype>

namespace complang::sql {

namespace {

enum class Tok : std::uint8_t {
  kIdent,
  kInt,
  kStr,
  kQuestion,
  kLParen,
  kRParen,
  kDot,
  kEq,
  kNeq,
  kLt,
  kGt,
  kEnd,
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  long long int_value = 0;
};

struct SqlParseFail {
  std::string message;
};

std::string upper(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = static_cast<char>(std::toupper(c));
  return out;
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> toks;
  std::size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '`') {
      std::size_t j = src.find('`', i + 1);
      if (j == std::string::npos) throw SqlParseFail{"unterminated ` quote"};
      toks.push_back({Tok::kIdent, src.substr(i + 1, j - i - 1), 0});
      i = j + 1;
      continue;
    }
    if (c == '\'') {
      std::size_t j = src.find('\'', i + 1);
      if (j == std::string::npos) {
        throw SqlParseFail{"unterminated string literal"};
      }
      toks.push_back({Tok::kStr, src.substr(i + 1, j - i - 1), 0});
      i = j + 1;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i + 1 < src.size() &&
         std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i + 1;
      while (j < src.size() &&
             std::isdigit(static_cast<unsigned char>(src[j]))) {
        ++j;
      }
      toks.push_back({Tok::kInt, src.substr(i, j - i),
                      std::stoll(src.substr(i, j - i))});
      i = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i + 1;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) ||
              src[j] == '_')) {
        ++j;
      }
      toks.push_back({Tok::kIdent, src.substr(i, j - i), 0});
      i = j;
      continue;
    }
    switch (c) {
      case '?': toks.push_back({Tok::kQuestion, "?", 0}); break;
      case '(': toks.push_back({Tok::kLParen, "(", 0}); break;
      case ')': toks.push_back({Tok::kRParen, ")", 0}); break;
      case '.': toks.push_back({Tok::kDot, ".", 0}); break;
      case '=': toks.push_back({Tok::kEq, "=", 0}); break;
      case '<':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          toks.push_back({Tok::kNeq, "<>", 0});
          ++i;
        } else {
          toks.push_back({Tok::kLt, "<", 0});
        }
        break;
      case '>': toks.push_back({Tok::kGt, ">", 0}); break;
      default:
        throw SqlParseFail{std::string("unexpected character '") + c + "'"};
    }
    ++i;
  }
  toks.push_back({Tok::kEnd, "", 0});
  return toks;
}

class FragmentParser {
 public:
  FragmentParser(std::vector<Token> toks, const std::vector<Type>& arg_types)
      : toks_(std::move(toks)), arg_types_(arg_types) {}

  std::shared_ptr<Cond> parse() {
    auto c = or_cond();
    if (!at(Tok::kEnd)) {
      throw SqlParseFail{"unexpected trailing input at '" + cur().text + "'"};
    }
    return c;
  }

  std::size_t placeholders_used() const { return ph_count_; }

 private:
  const Token& cur() const { return toks_[idx_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_kw(const char* kw) const {
    return at(Tok::kIdent) && upper(cur().text) == kw;
  }
  Token advance() { return toks_[idx_++]; }
  void expect(Tok k, const std::string& what) {
    if (!at(k)) throw SqlParseFail{"expected " + what};
    advance();
  }

  std::shared_ptr<Cond> or_cond() {
    auto lhs = and_cond();
    while (at_kw("OR")) {
      advance();
      auto rhs = and_cond();
      auto c = std::make_shared<Cond>();
      c->kind = CondKind::kOr;
      c->a = lhs;
      c->b = rhs;
      lhs = c;
    }
    return lhs;
  }

  std::shared_ptr<Cond> and_cond() {
    auto lhs = primary();
    while (at_kw("AND")) {
      advance();
      auto rhs = primary();
      auto c = std::make_shared<Cond>();
      c->kind = CondKind::kAnd;
      c->a = lhs;
      c->b = rhs;
      lhs = c;
    }
    return lhs;
  }

  std::shared_ptr<Cond> primary() {
    if (at(Tok::kLParen)) {
      advance();
      auto c = or_cond();
      expect(Tok::kRParen, ")");
      return c;
    }
    Operand lhs = operand();
    auto c = std::make_shared<Cond>();
    c->lhs = lhs;
    if (at_kw("IN")) {
      advance();
      expect(Tok::kLParen, "( after IN");
      c->kind = CondKind::kIn;
      c->sub = subquery();
      expect(Tok::kRParen, ") after subquery");
      return c;
    }
    c->kind = CondKind::kCompare;
    if (at(Tok::kEq) || at(Tok::kNeq) || at(Tok::kLt) || at(Tok::kGt)) {
      c->op = advance().text;
    } else {
      throw SqlParseFail{"expected a comparison operator or IN"};
    }
    c->rhs = operand();
    return c;
  }

  Subquery subquery() {
    Subquery s;
    if (!at_kw("SELECT")) throw SqlParseFail{"expected SELECT"};
    advance();
    s.column = ident("selected column");
    if (!at_kw("FROM")) throw SqlParseFail{"expected FROM"};
    advance();
    s.table = ident("table name");
    if (at_kw("WHERE")) {
      advance();
      s.where = or_cond();
    }
    return s;
  }

  std::string ident(const std::string& what) {
    if (!at(Tok::kIdent)) throw SqlParseFail{"expected " + what};
    return advance().text;
  }

  Operand operand() {
    Operand o;
    if (at(Tok::kInt)) {
      o.kind = OperandKind::kInt;
      o.int_value = advance().int_value;
      return o;
    }
    if (at(Tok::kStr)) {
      o.kind = OperandKind::kStr;
      o.text = advance().text;
      return o;
    }
    if (at(Tok::kQuestion)) {
      advance();
      o.kind = OperandKind::kPlaceholder;
      o.ph_index = ++ph_count_;
      if (o.ph_index <= arg_types_.size()) {
        o.ph_type = arg_types_[o.ph_index - 1];
      }
      return o;
    }
    if (at_kw("NULL")) {
      advance();
      o.kind = OperandKind::kNull;
      return o;
    }
    if (at(Tok::kIdent)) {
      std::string first = advance().text;
      o.kind = OperandKind::kColumn;
      if (at(Tok::kDot)) {
        advance();
        o.table = first;
        o.column = ident("column name");
      } else {
        o.column = first;
      }
      return o;
    }
    throw SqlParseFail{"expected an operand, got '" + cur().text + "'"};
  }

  std::vector<Token> toks_;
  const std::vector<Type>& arg_types_;
  std::size_t idx_ = 0;
  std::size_t ph_count_ = 0;
};

std::string describe(const Operand& o) {
  switch (o.kind) {
    case OperandKind::kColumn:
      return o.table.empty() ? o.column : o.table + "." + o.column;
    case OperandKind::kInt:
      return std::to_string(o.int_value);
    case OperandKind::kStr:
      return "'" + o.text + "'";
    case OperandKind::kPlaceholder:
      return "placeholder " + std::to_string(o.ph_index);
    case OperandKind::kNull:
      return "NULL";
  }
  return "?";
}

struct FragmentChecker {
  const Type& recv;
  const SchemaRegistry& reg;
  std::vector<SqlError> errs;

  // Column type from the receiver's top-level scalar fields.
  std::optional<Type> receiver_column(const std::string& column) const {
    if (recv.kind() != TypeKind::kFiniteHash) return std::nullopt;
    for (const auto& [k, v] : recv.node().fields) {
      if (k == column && v.kind() != TypeKind::kFiniteHash) return v;
    }
    return std::nullopt;
  }

  // Nested joined-table hash for a qualified reference.
  std::optional<Type> joined_table(const std::string& table) const {
    if (recv.kind() != TypeKind::kFiniteHash) return std::nullopt;
    for (const auto& [k, v] : recv.node().fields) {
      if (k == table && v.kind() == TypeKind::kFiniteHash) return v;
    }
    return std::nullopt;
  }

  std::optional<Type> registry_column(const std::string& table,
                                      const std::string& column) {
    const TableDef* def = reg.table(table);
    if (!def) return std::nullopt;
    for (const auto& c : def->columns) {
      if (c.name == column) return c.type;
    }
    return std::nullopt;
  }

  bool receiver_has_scalars() const {
    if (recv.kind() != TypeKind::kFiniteHash) return false;
    for (const auto& [k, v] : recv.node().fields) {
      if (v.kind() != TypeKind::kFiniteHash) return true;
    }
    return false;
  }

  SqlBase operand_base(const Operand& o, const std::string& context_table) {
    switch (o.kind) {
      case OperandKind::kInt:
        return SqlBase::kInt;
      case OperandKind::kStr:
        return SqlBase::kStr;
      case OperandKind::kNull:
        return SqlBase::kAny;
      case OperandKind::kPlaceholder:
        return o.ph_type.defined() ? base_of_type(o.ph_type) : SqlBase::kAny;
      case OperandKind::kColumn:
        break;
    }
    if (!o.table.empty()) {
      if (auto joined = joined_table(o.table)) {
        for (const auto& [k, v] : joined->node().fields) {
          if (k == o.column) return base_of_type(v);
        }
        errs.push_back({"SQL002", "unknown column " + o.column +
                                      " in table " + o.table});
        return SqlBase::kAny;
      }
      if (auto t = registry_column(o.table, o.column)) return base_of_type(*t);
      if (!reg.has_table(o.table)) {
        errs.push_back({"SQL002", "unknown table " + o.table});
      } else {
        errs.push_back({"SQL002", "unknown column " + o.column +
                                      " in table " + o.table});
      }
      return SqlBase::kAny;
    }
    if (!context_table.empty()) {
      if (auto t = registry_column(context_table, o.column)) {
        return base_of_type(*t);
      }
      errs.push_back({"SQL002", "unknown column " + o.column + " in table " +
                                    context_table});
      return SqlBase::kAny;
    }
    if (auto t = receiver_column(o.column)) return base_of_type(*t);
    if (!receiver_has_scalars()) {
      // No receiver context: accept a column that lives in exactly one
      // declared table.
      std::vector<std::string> owners;
      for (const auto& name : reg.table_order()) {
        if (registry_column(name, o.column)) owners.push_back(name);
      }
      if (owners.size() == 1) {
        return base_of_type(*registry_column(owners[0], o.column));
      }
      if (owners.size() > 1) {
        errs.push_back({"SQL002", "ambiguous column " + o.column});
        return SqlBase::kAny;
      }
    }
    errs.push_back({"SQL002", "unknown column " + o.column});
    return SqlBase::kAny;
  }

  static bool comparable(SqlBase a, SqlBase b) {
    return a == b || a == SqlBase::kAny || b == SqlBase::kAny;
  }

  void check(const Cond& c, const std::string& context_table) {
    switch (c.kind) {
      case CondKind::kAnd:
      case CondKind::kOr:
        check(*c.a, context_table);
        check(*c.b, context_table);
        return;
      case CondKind::kCompare: {
        SqlBase l = operand_base(c.lhs, context_table);
        SqlBase r = operand_base(c.rhs, context_table);
        if (!comparable(l, r)) {
          errs.push_back({"SQL003", "type mismatch: " + describe(c.lhs) +
                                        " is " + base_name(l) + " but " +
                                        describe(c.rhs) + " is " +
                                        base_name(r)});
        }
        return;
      }
      case CondKind::kIn: {
        SqlBase l = operand_base(c.lhs, context_table);
        const TableDef* def = reg.table(c.sub.table);
        if (!def) {
          errs.push_back({"SQL002", "unknown table " + c.sub.table});
          return;
        }
        std::optional<Type> colt = registry_column(c.sub.table, c.sub.column);
        if (!colt) {
          errs.push_back({"SQL002", "unknown column " + c.sub.column +
                                        " in table " + c.sub.table});
          return;
        }
        SqlBase r = base_of_type(*colt);
        if (!comparable(l, r)) {
          errs.push_back(
              {"SQL003", "type mismatch: " + describe(c.lhs) + " is " +
                             base_name(l) + " but the subquery selects " +
                             c.sub.column + " of type " + base_name(r)});
        }
        if (c.sub.where) check(*c.sub.where, c.sub.table);
        return;
      }
    }
  }
};

}  // namespace

std::string base_name(SqlBase b) {
  switch (b) {
    case SqlBase::kInt: return "Integer";
    case SqlBase::kStr: return "String";
    case SqlBase::kBool: return "%bool";
    case SqlBase::kAny: return "Any";
  }
  return "Any";
}

SqlBase base_of_type(const Type& t) {
  if (!t.defined()) return SqlBase::kAny;
  switch (t.kind()) {
    case TypeKind::kSingletonInt:
      return SqlBase::kInt;
    case TypeKind::kConstString:
      return SqlBase::kStr;
    case TypeKind::kNominal: {
      const std::string& n = t.node().name;
      if (n == cls::kInteger) return SqlBase::kInt;
      if (n == cls::kString) return SqlBase::kStr;
      if (n == cls::kBool || n == cls::kTrue || n == cls::kFalse) {
        return SqlBase::kBool;
      }
      return SqlBase::kAny;
    }
    default:
      return SqlBase::kAny;
  }
}

ParseOutcome parse_fragment(const std::string& text,
                            const std::vector<Type>& arg_types) {
  ParseOutcome out;
  try {
    FragmentParser p(lex(text), arg_types);
    out.ast = p.parse();
    if (p.placeholders_used() != arg_types.size()) {
      out.errors.push_back(
          {"SQL004",
           "fragment has " + std::to_string(p.placeholders_used()) +
               " placeholder(s) but " + std::to_string(arg_types.size()) +
               " argument type(s) were supplied"});
      out.ast = nullptr;
    }
  } catch (const SqlParseFail& f) {
    out.errors.push_back({"SQL001", "cannot parse fragment: " + f.message});
  }
  return out;
}

std::optional<std::string> base_table_of(const Type& receiver_schema,
                                         const SchemaRegistry& registry) {
  if (receiver_schema.kind() != TypeKind::kFiniteHash) return std::nullopt;
  std::vector<std::string> scalars;
  for (const auto& [k, v] : receiver_schema.node().fields) {
    if (v.kind() != TypeKind::kFiniteHash) scalars.push_back(k);
  }
  auto matches = registry.tables_matching_columns(scalars);
  if (matches.empty()) return std::nullopt;
  return matches.front();
}

std::string wrap_artificial(const std::string& fragment,
                            const Type& receiver_schema,
                            const SchemaRegistry* registry,
                            const std::vector<Type>& arg_types) {
  std::string base = "t1";
  std::vector<std::string> joins;
  if (registry) {
    if (auto b = base_table_of(receiver_schema, *registry)) base = *b;
  }
  if (receiver_schema.kind() == TypeKind::kFiniteHash) {
    for (const auto& [k, v] : receiver_schema.node().fields) {
      if (v.kind() == TypeKind::kFiniteHash) joins.push_back(k);
    }
  }
  std::string out = "SELECT * FROM `" + base + "`";
  for (const auto& j : joins) {
    out += " INNER JOIN `" + j + "` ON a.id = b.a_id";
  }
  out += " WHERE ";
  // Substitute [Type] for each ? outside quotes.
  std::size_t ph = 0;
  bool in_str = false;
  for (std::size_t i = 0; i < fragment.size(); ++i) {
    char c = fragment[i];
    if (c == '\'') in_str = !in_str;
    if (c == '?' && !in_str) {
      std::string display = "?";
      if (ph < arg_types.size()) {
        SqlBase b = base_of_type(arg_types[ph]);
        display = b == SqlBase::kAny ? print_type(arg_types[ph])
                                     : base_name(b);
      }
      out += "[" + display + "]";
      ++ph;
      continue;
    }
    out += c;
  }
  return out;
}

std::vector<SqlError> typecheck_fragment(const Cond& ast,
                                         const Type& receiver_schema,
                                         const SchemaRegistry& registry) {
  FragmentChecker fc{receiver_schema, registry, {}};
  fc.check(ast, "");
  return std::move(fc.errs);
}

CheckOutcome check_fragment(const std::string& text,
                            const std::vector<Type>& arg_types,
                            const Type& receiver_schema,
                            const SchemaRegistry& registry) {
  CheckOutcome out;
  out.artificial =
      wrap_artificial(text, receiver_schema, &registry, arg_types);
  ParseOutcome parsed = parse_fragment(text, arg_types);
  if (!parsed.ok()) {
    out.errors = std::move(parsed.errors);
    out.ok = false;
    return out;
  }
  out.errors = typecheck_fragment(*parsed.ast, receiver_schema, registry);
  out.ok = out.errors.empty();
  return out;
}

}  // namespace complang::sql
