#include "complang/parser.hpp"

#include <cctype>
#include <stdexcept>
#include <utility>
#include <vector>

namespace complang {

namespace {

enum class Tok : std::uint8_t {
  kIdent,
  kInt,
  kString,
  kSymbol,
  kPercentBool,
  kClass,
  kDef,
  kLib,
  kNil,
  kTrue,
  kFalse,
  kSelf,
  kTSelf,
  kNew,
  kIf,
  kThen,
  kElse,
  kEnd,
  kWhile,
  kDo,
  kCheck,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kLBrace,
  kRBrace,
  kDot,
  kComma,
  kSemi,
  kColon,
  kLt,
  kGt,
  kLtLt,
  kGtGt,
  kEqEq,
  kEq,
  kArrow,
  kAt,
  kPipe,
  kPlus,
  kMinus,
  kEof,
};

struct Token {
  Tok kind;
  std::string text;
  long long int_value = 0;
  Span span;
};

struct ParseError {
  Span span;
  std::string code;
  std::string message;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

Tok keyword_kind(const std::string& s) {
  if (s == "class") return Tok::kClass;
  if (s == "def") return Tok::kDef;
  if (s == "lib") return Tok::kLib;
  if (s == "nil") return Tok::kNil;
  if (s == "true") return Tok::kTrue;
  if (s == "false") return Tok::kFalse;
  if (s == "self") return Tok::kSelf;
  if (s == "tself") return Tok::kTSelf;
  if (s == "new") return Tok::kNew;
  if (s == "if") return Tok::kIf;
  if (s == "then") return Tok::kThen;
  if (s == "else") return Tok::kElse;
  if (s == "end") return Tok::kEnd;
  if (s == "while") return Tok::kWhile;
  if (s == "do") return Tok::kDo;
  if (s == "check") return Tok::kCheck;
  return Tok::kIdent;
}

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_trivia();
      Span sp = span_at(line_, col_);
      if (at_end()) {
        out.push_back({Tok::kEof, "", 0, sp});
        return out;
      }
      char c = peek();
      if (ident_start(c)) {
        std::string word = lex_ident();
        sp.end_col = col_;
        out.push_back({keyword_kind(word), word, 0, sp});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '-' && pos_ + 1 < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        bool neg = c == '-';
        if (neg) advance();
        long long v = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
          v = v * 10 + (peek() - '0');
          advance();
        }
        sp.end_col = col_;
        out.push_back({Tok::kInt, "", neg ? -v : v, sp});
        continue;
      }
      switch (c) {
        case '"': {
          advance();
          std::string content;
          while (!at_end() && peek() != '"') {
            char ch = peek();
            if (ch == '\\') {
              advance();
              if (at_end()) break;
              char esc = peek();
              switch (esc) {
                case 'n': content += '\n'; break;
                case 't': content += '\t'; break;
                case 'r': content += '\r'; break;
                case '"': content += '"'; break;
                case '\\': content += '\\'; break;
                default: content += esc;
              }
              advance();
            } else if (ch == '\n') {
              throw ParseError{sp, codes::kParse,
                               "unterminated string literal"};
            } else {
              content += ch;
              advance();
            }
          }
          if (at_end()) {
            throw ParseError{sp, codes::kParse, "unterminated string literal"};
          }
          advance();  // closing quote
          sp.end_col = col_;
          out.push_back({Tok::kString, content, 0, sp});
          continue;
        }
        case ':': {
          // `:name` is a symbol unless the colon directly follows an
          // expression ender (hash keys, signature colons).
          bool after_ender =
              pos_ > 0 && (ident_char(src_[pos_ - 1]) || src_[pos_ - 1] == ')' ||
                           src_[pos_ - 1] == ']' || src_[pos_ - 1] == '}' ||
                           src_[pos_ - 1] == '"');
          if (!after_ender && pos_ + 1 < src_.size() &&
              ident_start(src_[pos_ + 1])) {
            advance();
            std::string word = lex_ident();
            sp.end_col = col_;
            out.push_back({Tok::kSymbol, word, 0, sp});
          } else {
            advance();
            sp.end_col = col_;
            out.push_back({Tok::kColon, ":", 0, sp});
          }
          continue;
        }
        case '%': {
          advance();
          std::string word = at_end() || !ident_start(peek()) ? "" : lex_ident();
          if (word != "bool") {
            throw ParseError{sp, codes::kParse, "expected %bool"};
          }
          sp.end_col = col_;
          out.push_back({Tok::kPercentBool, "%bool", 0, sp});
          continue;
        }
        default:
          break;
      }
      out.push_back(lex_punct(sp));
    }
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string lex_ident() {
    std::string word;
    while (!at_end() && ident_char(peek())) {
      word += peek();
      advance();
    }
    if (!at_end() && peek() == '?') {
      word += '?';
      advance();
    }
    return word;
  }

  Token lex_punct(Span sp) {
    char c = peek();
    advance();
    auto two = [&](char next) {
      if (!at_end() && peek() == next) {
        advance();
        return true;
      }
      return false;
    };
    Tok kind;
    std::string text(1, c);
    switch (c) {
      case '(': kind = Tok::kLParen; break;
      case ')': kind = Tok::kRParen; break;
      case '[': kind = Tok::kLBracket; break;
      case ']': kind = Tok::kRBracket; break;
      case '{': kind = Tok::kLBrace; break;
      case '}': kind = Tok::kRBrace; break;
      case '.': kind = Tok::kDot; break;
      case ',': kind = Tok::kComma; break;
      case ';': kind = Tok::kSemi; break;
      case '|': kind = Tok::kPipe; break;
      case '@': kind = Tok::kAt; break;
      case '+': kind = Tok::kPlus; break;
      case '<':
        if (two('<')) {
          kind = Tok::kLtLt;
          text = "<<";
        } else {
          kind = Tok::kLt;
        }
        break;
      case '>':
        if (two('>')) {
          kind = Tok::kGtGt;
          text = ">>";
        } else {
          kind = Tok::kGt;
        }
        break;
      case '=':
        if (two('=')) {
          kind = Tok::kEqEq;
          text = "==";
        } else {
          kind = Tok::kEq;
        }
        break;
      case '-':
        if (two('>')) {
          kind = Tok::kArrow;
          text = "->";
        } else {
          kind = Tok::kMinus;
        }
        break;
      default:
        throw ParseError{sp, codes::kParse,
                         std::string("unexpected character '") + c + "'"};
    }
    sp.end_col = col_;
    return {kind, text, 0, sp};
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(Lexer(src).run()) {}

  Program parse_program() {
    Program prog;
    while (!at(Tok::kEof)) {
      if (at(Tok::kClass)) {
        prog.decls.push_back(parse_class());
      } else if (at(Tok::kDef)) {
        prog.decls.push_back(parse_def());
      } else if (at(Tok::kLib)) {
        prog.decls.push_back(parse_lib());
      } else {
        fail("expected class, def or lib declaration");
      }
    }
    return prog;
  }

  SchemaRegistry parse_schema() {
    SchemaRegistry reg;
    while (!at(Tok::kEof)) {
      Token head = expect(Tok::kIdent, "expected table, assoc or row");
      if (head.text == "table") {
        parse_table(reg);
      } else if (head.text == "assoc") {
        Token from = expect(Tok::kIdent, "expected table name");
        expect(Tok::kArrow, "expected ->");
        Token to = expect(Tok::kIdent, "expected table name");
        if (!reg.has_table(from.text)) {
          throw ParseError{from.span, codes::kSchemaParse,
                           "assoc references unknown table " + from.text};
        }
        if (!reg.has_table(to.text)) {
          throw ParseError{to.span, codes::kSchemaParse,
                           "assoc references unknown table " + to.text};
        }
        reg.add_assoc(from.text, to.text);
      } else if (head.text == "row") {
        parse_row(reg);
      } else {
        throw ParseError{head.span, codes::kSchemaParse,
                         "expected table, assoc or row, got " + head.text};
      }
    }
    return reg;
  }

  Type parse_type_only() {
    Type t = parse_type();
    expect(Tok::kEof, "trailing input after type");
    return t;
  }

  ExprPtr parse_expr_only() {
    ExprPtr e = parse_expr();
    expect(Tok::kEof, "trailing input after expression");
    return e;
  }

 private:
  const Token& cur() const { return toks_[idx_]; }
  const Token& peek(std::size_t n = 1) const {
    std::size_t i = idx_ + n;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return cur().kind == k; }

  Token advance() { return toks_[idx_++]; }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail(what);
    return advance();
  }

  bool accept(Tok k) {
    if (at(k)) {
      advance();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError{cur().span, codes::kParse, msg};
  }

  // Splits a `>>` token into two `>` when a type needs a single closer.
  void expect_gt() {
    if (at(Tok::kGt)) {
      advance();
      return;
    }
    if (at(Tok::kGtGt)) {
      Token& t = toks_[idx_];
      t.kind = Tok::kGt;
      t.text = ">";
      t.span.col += 1;
      return;
    }
    fail("expected >");
  }

  Decl parse_class() {
    Span sp = cur().span;
    expect(Tok::kClass, "expected class");
    Token name = expect(Tok::kIdent, "expected class name");
    ClassDecl decl;
    decl.name = name.text;
    decl.span = sp;
    if (accept(Tok::kLt)) {
      Token parent = expect(Tok::kIdent, "expected superclass name");
      decl.parent = parent.text;
    }
    return decl;
  }

  Decl parse_def() {
    Span sp = cur().span;
    expect(Tok::kDef, "expected def");
    DefDecl decl;
    decl.span = sp;
    decl.cls = expect(Tok::kIdent, "expected class name").text;
    expect(Tok::kDot, "expected .");
    decl.method = expect(Tok::kIdent, "expected method name").text;
    expect(Tok::kLParen, "expected (");
    decl.param = expect(Tok::kIdent, "expected parameter name").text;
    expect(Tok::kRParen, "expected )");
    expect(Tok::kColon, "expected :");
    expect(Tok::kLParen, "expected (");
    decl.arg_type = parse_type();
    expect(Tok::kRParen, "expected )");
    expect(Tok::kArrow, "expected ->");
    decl.ret_type = parse_type();
    expect(Tok::kEq, "expected = before method body");
    decl.body = parse_expr();
    return decl;
  }

  Decl parse_lib() {
    Span sp = cur().span;
    expect(Tok::kLib, "expected lib");
    LibDecl decl;
    decl.span = sp;
    decl.cls = expect(Tok::kIdent, "expected class name").text;
    expect(Tok::kDot, "expected .");
    decl.method = expect(Tok::kIdent, "expected method name").text;
    expect(Tok::kLParen, "expected (");
    decl.param = expect(Tok::kIdent, "expected parameter name").text;
    expect(Tok::kRParen, "expected )");
    expect(Tok::kColon, "expected :");
    if (at(Tok::kLtLt)) {
      Span csp = cur().span;
      advance();
      decl.arg_expr = parse_expr();
      expect(Tok::kGtGt, "expected >> after comp expression");
      decl.arg_bound = parse_type();
      decl.arg_is_comp = true;
      (void)csp;
    } else {
      expect(Tok::kLParen, "expected ( or <<");
      Span tsp = cur().span;
      decl.arg_bound = parse_type();
      expect(Tok::kRParen, "expected )");
      decl.arg_expr = mk_type_lit(decl.arg_bound, tsp);
    }
    expect(Tok::kArrow, "expected ->");
    if (at(Tok::kLtLt)) {
      advance();
      decl.ret_expr = parse_expr();
      expect(Tok::kGtGt, "expected >> after comp expression");
      decl.ret_bound = parse_type();
      decl.ret_is_comp = true;
    } else {
      Span tsp = cur().span;
      decl.ret_bound = parse_type();
      decl.ret_expr = mk_type_lit(decl.ret_bound, tsp);
    }
    if (accept(Tok::kLBracket)) {
      parse_annots(decl);
      expect(Tok::kRBracket, "expected ] after annotations");
    }
    return decl;
  }

  void parse_annots(LibDecl& decl) {
    bool saw_any = false;
    if (at(Tok::kIdent) && cur().text == "terminates") {
      advance();
      expect(Tok::kEq, "expected =");
      if (accept(Tok::kPlus)) {
        decl.terminates = Terminates::kYes;
      } else if (accept(Tok::kMinus)) {
        decl.terminates = Terminates::kNo;
      } else if (at(Tok::kIdent) && cur().text == "blockdep") {
        advance();
        decl.terminates = Terminates::kBlockDep;
      } else {
        fail("expected +, - or blockdep");
      }
      saw_any = true;
    }
    if (saw_any && !at(Tok::kRBracket)) {
      expect(Tok::kComma, "expected , between annotations");
    }
    if (at(Tok::kIdent) && cur().text == "pure") {
      advance();
      expect(Tok::kEq, "expected =");
      if (accept(Tok::kPlus)) {
        decl.pure = Pure::kYes;
      } else if (accept(Tok::kMinus)) {
        decl.pure = Pure::kNo;
      } else {
        fail("expected + or -");
      }
    }
  }

  void parse_table(SchemaRegistry& reg) {
    Token name = expect(Tok::kIdent, "expected table name");
    expect(Tok::kLBrace, "expected {");
    std::vector<ColumnDef> cols;
    while (!at(Tok::kRBrace)) {
      Token col = expect(Tok::kIdent, "expected column name");
      expect(Tok::kColon, "expected :");
      Type ty;
      if (accept(Tok::kPercentBool)) {
        ty = t_bool();
      } else {
        Token tname = expect(Tok::kIdent, "expected column type");
        if (tname.text == cls::kInteger) {
          ty = t_integer();
        } else if (tname.text == cls::kString) {
          ty = t_string();
        } else {
          throw ParseError{tname.span, codes::kSchemaParse,
                           "unknown column type " + tname.text +
                               " (expected Integer, String or %bool)"};
        }
      }
      for (auto& c : cols) {
        if (c.name == col.text) {
          throw ParseError{col.span, codes::kSchemaParse,
                           "duplicate column " + col.text};
        }
      }
      cols.push_back({col.text, ty});
      if (!at(Tok::kRBrace)) expect(Tok::kComma, "expected , or }");
    }
    expect(Tok::kRBrace, "expected }");
    if (!reg.add_table(name.text, std::move(cols))) {
      throw ParseError{name.span, codes::kSchemaParse,
                       "duplicate table " + name.text};
    }
  }

  void parse_row(SchemaRegistry& reg) {
    Token name = expect(Tok::kIdent, "expected table name");
    const TableDef* def = reg.table(name.text);
    if (!def) {
      throw ParseError{name.span, codes::kSchemaParse,
                       "row for unknown table " + name.text};
    }
    expect(Tok::kLBrace, "expected {");
    Row row;
    while (!at(Tok::kRBrace)) {
      Token col = expect(Tok::kIdent, "expected column name");
      const ColumnDef* cdef = nullptr;
      for (auto& c : def->columns) {
        if (c.name == col.text) {
          cdef = &c;
          break;
        }
      }
      if (!cdef) {
        throw ParseError{col.span, codes::kSchemaParse,
                         "row references unknown column " + col.text};
      }
      expect(Tok::kEq, "expected =");
      Value v;
      if (at(Tok::kInt)) {
        v = v_int(advance().int_value);
        if (!cdef->type.is_nominal(cls::kInteger)) {
          throw ParseError{col.span, codes::kSchemaParse,
                           "column " + col.text + " is not Integer"};
        }
      } else if (at(Tok::kString)) {
        v = v_string(advance().text);
        if (!cdef->type.is_nominal(cls::kString)) {
          throw ParseError{col.span, codes::kSchemaParse,
                           "column " + col.text + " is not String"};
        }
      } else if (at(Tok::kTrue) || at(Tok::kFalse)) {
        v = v_bool(advance().kind == Tok::kTrue);
        if (!cdef->type.is_nominal(cls::kBool)) {
          throw ParseError{col.span, codes::kSchemaParse,
                           "column " + col.text + " is not %bool"};
        }
      } else if (accept(Tok::kNil)) {
        v = v_nil();
      } else {
        fail("expected a literal cell value");
      }
      row[col.text] = v;
      if (!at(Tok::kRBrace)) expect(Tok::kComma, "expected , or }");
    }
    expect(Tok::kRBrace, "expected }");
    reg.add_row(name.text, std::move(row));
  }

  Type parse_type() {
    Type first = parse_type_prim();
    if (at(Tok::kIdent) && cur().text == "or") {
      std::vector<Type> members{first};
      while (at(Tok::kIdent) && cur().text == "or") {
        advance();
        members.push_back(parse_type_prim());
      }
      return t_union(std::move(members));
    }
    return first;
  }

  Type parse_type_prim() {
    if (accept(Tok::kPercentBool)) return t_bool();
    if (at(Tok::kLBrace)) {
      advance();
      std::vector<std::pair<std::string, Type>> fields;
      while (!at(Tok::kRBrace)) {
        Token key = expect(Tok::kIdent, "expected field name");
        expect(Tok::kColon, "expected :");
        Type vt = parse_type();
        for (auto& [k, v] : fields) {
          if (k == key.text) fail("duplicate field " + key.text);
        }
        fields.emplace_back(key.text, vt);
        if (!at(Tok::kRBrace)) expect(Tok::kComma, "expected , or }");
      }
      advance();
      return t_finite_hash(std::move(fields));
    }
    if (at(Tok::kLBracket)) {
      advance();
      std::vector<Type> elems;
      while (!at(Tok::kRBracket)) {
        elems.push_back(parse_type());
        if (!at(Tok::kRBracket)) expect(Tok::kComma, "expected , or ]");
      }
      advance();
      return t_tuple(std::move(elems));
    }
    if (accept(Tok::kLParen)) {
      Type t = parse_type();
      expect(Tok::kRParen, "expected )");
      return t;
    }
    if (at(Tok::kNil)) {
      // `Nil` lexes as an identifier; `nil` the keyword is not a type.
      fail("expected a type, got nil");
    }
    Token name = expect(Tok::kIdent, "expected a type");
    if (name.text == "Sing") {
      expect(Tok::kLParen, "expected (");
      Type t;
      if (at(Tok::kInt)) {
        t = t_sing_int(advance().int_value);
      } else if (at(Tok::kSymbol)) {
        t = t_sing_sym(advance().text);
      } else if (at(Tok::kIdent)) {
        t = t_sing_class(advance().text);
      } else {
        fail("expected an integer, symbol or class inside Sing(...)");
      }
      expect(Tok::kRParen, "expected )");
      return t;
    }
    if (name.text == "CStr") {
      expect(Tok::kLParen, "expected (");
      Token content = expect(Tok::kString, "expected a string literal");
      expect(Tok::kRParen, "expected )");
      return t_const_string(content.text);
    }
    if (at(Tok::kLt)) {
      advance();
      std::vector<Type> params;
      params.push_back(parse_type());
      while (accept(Tok::kComma)) params.push_back(parse_type());
      expect_gt();
      std::size_t arity = 0;
      if (name.text == cls::kArray || name.text == cls::kTable) arity = 1;
      if (name.text == cls::kHash) arity = 2;
      if (arity == 0) {
        throw ParseError{name.span, codes::kParse,
                         name.text + " is not a generic class"};
      }
      if (params.size() != arity) {
        throw ParseError{name.span, codes::kParse,
                         name.text + " expects " + std::to_string(arity) +
                             " type parameter(s)"};
      }
      return t_generic(name.text, std::move(params));
    }
    return t_nominal(name.text);
  }

  ExprPtr parse_expr() { return parse_seq(); }

  ExprPtr parse_seq() {
    ExprPtr e = parse_eq();
    while (at(Tok::kSemi)) {
      Span sp = cur().span;
      advance();
      ExprPtr rhs = parse_eq();
      e = mk_seq(e, rhs, span_join(e->span, rhs->span));
      (void)sp;
    }
    return e;
  }

  ExprPtr parse_eq() {
    ExprPtr e = parse_postfix();
    while (at(Tok::kEqEq)) {
      advance();
      ExprPtr rhs = parse_postfix();
      e = mk_eq(e, rhs, span_join(e->span, rhs->span));
    }
    return e;
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    while (at(Tok::kDot)) {
      advance();
      Token name = expect(Tok::kIdent, "expected method name");
      expect(Tok::kLParen, "expected (");
      ExprPtr arg;
      Span asp = cur().span;
      if (at(Tok::kRParen)) {
        arg = mk_nil(asp);  // zero-argument sugar passes nil
      } else {
        arg = parse_expr();
      }
      expect(Tok::kRParen, "expected )");
      std::optional<Block> block;
      if (at(Tok::kLBrace) && peek().kind == Tok::kPipe) {
        advance();
        expect(Tok::kPipe, "expected |");
        Token param = expect(Tok::kIdent, "expected block parameter");
        expect(Tok::kPipe, "expected |");
        ExprPtr body = parse_expr();
        expect(Tok::kRBrace, "expected } after block");
        block = Block{param.text, body};
      }
      e = mk_call(e, name.text, arg, block, span_join(e->span, name.span));
    }
    return e;
  }

  ExprPtr parse_primary() {
    Span sp = cur().span;
    switch (cur().kind) {
      case Tok::kNil: advance(); return mk_nil(sp);
      case Tok::kTrue: advance(); return mk_true(sp);
      case Tok::kFalse: advance(); return mk_false(sp);
      case Tok::kSelf: advance(); return mk_self(sp);
      case Tok::kTSelf: advance(); return mk_tself(sp);
      case Tok::kInt: return mk_int(advance().int_value, sp);
      case Tok::kString: return mk_str(advance().text, sp);
      case Tok::kSymbol: return mk_sym(advance().text, sp);
      case Tok::kIdent: return mk_var(advance().text, sp);
      case Tok::kNew: {
        advance();
        Token name = expect(Tok::kIdent, "expected class name after new");
        return mk_new(name.text, span_join(sp, name.span));
      }
      case Tok::kIf: {
        advance();
        ExprPtr c = parse_expr();
        expect(Tok::kThen, "expected then");
        ExprPtr t = parse_expr();
        expect(Tok::kElse, "expected else");
        ExprPtr e = parse_expr();
        Token endt = expect(Tok::kEnd, "expected end");
        return mk_if(c, t, e, span_join(sp, endt.span));
      }
      case Tok::kWhile: {
        advance();
        ExprPtr c = parse_expr();
        expect(Tok::kDo, "expected do");
        ExprPtr b = parse_expr();
        Token endt = expect(Tok::kEnd, "expected end");
        return mk_while(c, b, span_join(sp, endt.span));
      }
      case Tok::kLParen: {
        advance();
        ExprPtr e = parse_expr();
        expect(Tok::kRParen, "expected )");
        return e;
      }
      case Tok::kLBracket: {
        advance();
        std::vector<ExprPtr> elems;
        while (!at(Tok::kRBracket)) {
          elems.push_back(parse_expr());
          if (!at(Tok::kRBracket)) expect(Tok::kComma, "expected , or ]");
        }
        Token endt = advance();
        return mk_array(std::move(elems), span_join(sp, endt.span));
      }
      case Tok::kLBrace: {
        advance();
        std::vector<std::string> keys;
        std::vector<ExprPtr> vals;
        while (!at(Tok::kRBrace)) {
          Token key = expect(Tok::kIdent, "expected hash key");
          expect(Tok::kColon, "expected :");
          for (auto& k : keys) {
            if (k == key.text) fail("duplicate hash key " + key.text);
          }
          keys.push_back(key.text);
          vals.push_back(parse_expr());
          if (!at(Tok::kRBrace)) expect(Tok::kComma, "expected , or }");
        }
        Token endt = advance();
        return mk_hash(std::move(keys), std::move(vals),
                       span_join(sp, endt.span));
      }
      case Tok::kAt: {
        advance();
        expect(Tok::kLParen, "expected ( after @");
        Type t = parse_type();
        Token endt = expect(Tok::kRParen, "expected )");
        return mk_type_lit(t, span_join(sp, endt.span));
      }
      case Tok::kCheck:
        throw ParseError{sp, codes::kReserved,
                         "check[...] is inserted by the checker and cannot "
                         "appear in source programs"};
      default:
        fail("expected an expression");
    }
  }

  std::vector<Token> toks_;
  std::size_t idx_ = 0;
};

}  // namespace

ParseResult parse_program(const std::string& source) {
  ParseResult res;
  try {
    Parser p(source);
    res.program = p.parse_program();
    res.ok = true;
  } catch (const ParseError& e) {
    res.diags.push_back({e.span, e.code, e.message, ""});
  }
  return res;
}

SchemaParseResult parse_schema(const std::string& source) {
  SchemaParseResult res;
  try {
    Parser p(source);
    res.registry = p.parse_schema();
    res.ok = true;
  } catch (const ParseError& e) {
    res.diags.push_back({e.span, e.code, e.message, ""});
  }
  return res;
}

std::optional<Type> parse_type_text(const std::string& text) {
  try {
    Parser p(text);
    return p.parse_type_only();
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

std::optional<ExprPtr> parse_expr_text(const std::string& text) {
  try {
    Parser p(text);
    return p.parse_expr_only();
  } catch (const ParseError&) {
    return std::nullopt;
  }
}

}  // namespace complang
