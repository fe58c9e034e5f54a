#include "complang/driver.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "complang/effects.hpp"
#include "complang/interp.hpp"
#include "complang/parser.hpp"
#include "complang/sql.hpp"

namespace complang {

namespace {

ExitStatus status_for(const Diagnostics& diags) {
  for (const Diagnostic& d : diags) {
    if (d.code == codes::kParse || d.code == codes::kReserved ||
        d.code == codes::kSchemaParse) {
      return ExitStatus::kParseError;
    }
  }
  return diags.empty() ? ExitStatus::kOk : ExitStatus::kTypeError;
}

bool expr_uses_schema(const ExprPtr& e) {
  if (!e) return false;
  if (e->kind == ExprKind::kNew && e->str == cls::kSchema) return true;
  for (const ExprPtr& kid : e->kids) {
    if (expr_uses_schema(kid)) return true;
  }
  return e->block && expr_uses_schema(e->block->body);
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_diags(const Diagnostics& diags, const std::string& file,
                 std::ostream& err) {
  for (const Diagnostic& d : diags) {
    err << render_diagnostic(d, file);
  }
}

}  // namespace

bool program_uses_schema(const Program& p) {
  for (const Decl& d : p.decls) {
    if (const auto* def = std::get_if<DefDecl>(&d)) {
      if (expr_uses_schema(def->body)) return true;
    } else if (const auto* lib = std::get_if<LibDecl>(&d)) {
      if (expr_uses_schema(lib->arg_expr) || expr_uses_schema(lib->ret_expr)) {
        return true;
      }
    }
  }
  return false;
}

LoadResult load_program(const std::string& source,
                        const std::optional<std::string>& schema_source,
                        long long comp_fuel) {
  LoadResult lr;
  ParseResult parsed = parse_program(source);
  if (!parsed.ok) {
    lr.diags = parsed.diags;
    lr.status = status_for(lr.diags);
    return lr;
  }
  lr.program = parsed.program;
  if (schema_source) {
    SchemaParseResult sp = parse_schema(*schema_source);
    if (!sp.ok) {
      lr.diags = sp.diags;
      lr.status = status_for(lr.diags);
      return lr;
    }
    lr.schema = std::move(sp.registry);
    lr.has_schema = true;
  } else if (program_uses_schema(lr.program)) {
    lr.diags.push_back({{}, codes::kSchemaMissing,
                        "the program queries a schema; pass one with "
                        "--schema",
                        ""});
    lr.status = ExitStatus::kTypeError;
    return lr;
  }

  register_prelude(lr.ct, lr.natives);
  if (!merge_program_into(lr.ct, lr.program, lr.diags) ||
      !validate_structure(lr.ct, lr.diags)) {
    lr.status = status_for(lr.diags);
    return lr;
  }

  std::vector<EffectFailure> eff =
      check_termination(lr.ct, comp_roots(lr.ct));
  for (const EffectFailure& f : eff) {
    lr.diags.push_back({f.span, f.code, f.message, ""});
  }
  if (!lr.diags.empty()) {
    lr.status = ExitStatus::kTypeError;
    return lr;
  }

  Checker checker(lr.ct, lr.natives,
                  lr.has_schema ? &lr.schema : nullptr, &lr.store,
                  {comp_fuel});
  Diagnostics tc = checker.check_program();
  lr.diags.insert(lr.diags.end(), tc.begin(), tc.end());
  lr.status = status_for(lr.diags);
  return lr;
}

std::string render_rewritten(const LoadResult& lr) {
  Program out = lr.program;
  for (Decl& d : out.decls) {
    if (auto* def = std::get_if<DefDecl>(&d)) {
      const MethodEntry* e = lr.ct.lookup_exact(def->cls, def->method);
      if (e && e->rewritten_body) def->body = e->rewritten_body;
    }
  }
  return print_program(out);
}

namespace {

struct Sources {
  std::string source;
  std::optional<std::string> schema;
};

// nullopt means the error was already reported; exit with usage status.
std::optional<Sources> read_sources(
    const std::string& file, const std::optional<std::string>& schema_file,
    std::ostream& err) {
  auto src = read_file(file);
  if (!src) {
    err << "complang: cannot open " << file << "\n";
    return std::nullopt;
  }
  Sources s{std::move(*src), std::nullopt};
  if (schema_file) {
    auto sch = read_file(*schema_file);
    if (!sch) {
      err << "complang: cannot open " << *schema_file << "\n";
      return std::nullopt;
    }
    s.schema = std::move(*sch);
  }
  return s;
}

}  // namespace

int cmd_check(const std::string& file,
              const std::optional<std::string>& schema_file,
              const CheckOptions& opts, std::ostream& out,
              std::ostream& err) {
  auto sources = read_sources(file, schema_file, err);
  if (!sources) return static_cast<int>(ExitStatus::kParseError);
  LoadResult lr = load_program(sources->source, sources->schema,
                               opts.comp_fuel);
  print_diags(lr.diags, file, err);
  if (lr.ok() && opts.emit_rewritten) out << render_rewritten(lr);
  return static_cast<int>(lr.status);
}

int cmd_run(const std::string& file,
            const std::optional<std::string>& schema_file,
            const RunOptions& opts, std::ostream& out, std::ostream& err) {
  auto sources = read_sources(file, schema_file, err);
  if (!sources) return static_cast<int>(ExitStatus::kParseError);
  LoadResult lr = load_program(sources->source, sources->schema);
  print_diags(lr.diags, file, err);
  if (!lr.ok()) return static_cast<int>(lr.status);

  const MethodEntry* entry = lr.ct.lookup_exact("Main", "main");
  if (!entry || entry->origin != MethodOrigin::kUser) {
    print_diags({{{}, codes::kMissingEntry,
                  "the program has no Main.main entry point", ""}},
                file, err);
    return static_cast<int>(ExitStatus::kTypeError);
  }

  bool trace = opts.trace;
  if (const char* env = std::getenv("COMPLANG_TRACE");
      env && std::string(env) == "1") {
    trace = true;
  }
  InterpOptions iopts;
  iopts.trace = trace;
  iopts.trace_out = &err;
  Interp machine(lr.ct, lr.natives, lr.has_schema ? &lr.schema : nullptr,
                 nullptr, iopts);
  Span s{};
  ExprPtr call = mk_call(mk_new("Main", s), "main", mk_nil(s), std::nullopt, s);
  Outcome result = machine.run_with_budget(call, {}, opts.fuel);
  switch (result.kind) {
    case OutcomeKind::kValue:
      out << print_value(result.value) << "\n";
      return static_cast<int>(ExitStatus::kOk);
    case OutcomeKind::kBlame: {
      const BlameInfo& b = *result.blame;
      err << file << ":" << b.span.line << ":" << b.span.col << ": "
          << blame_to_string(b) << "\n";
      if (!b.note.empty()) err << "  note: " << b.note << "\n";
      return static_cast<int>(ExitStatus::kBlame);
    }
    case OutcomeKind::kFuel:
      err << file << ": fuel exhausted (limit " << opts.fuel << " steps)\n";
      return static_cast<int>(ExitStatus::kFuel);
  }
  return static_cast<int>(ExitStatus::kParseError);
}

int cmd_sqlcheck(const std::string& schema_file, const std::string& fragment,
                 const std::vector<std::string>& arg_types, std::ostream& out,
                 std::ostream& err) {
  auto sch = read_file(schema_file);
  if (!sch) {
    err << "complang: cannot open " << schema_file << "\n";
    return static_cast<int>(ExitStatus::kParseError);
  }
  SchemaParseResult sp = parse_schema(*sch);
  if (!sp.ok) {
    print_diags(sp.diags, schema_file, err);
    return static_cast<int>(ExitStatus::kParseError);
  }
  std::vector<Type> types;
  for (const std::string& text : arg_types) {
    auto t = parse_type_text(text);
    if (!t) {
      err << "complang: cannot parse argument type '" << text << "'\n";
      return static_cast<int>(ExitStatus::kParseError);
    }
    types.push_back(*t);
  }
  sql::CheckOutcome result =
      sql::check_fragment(fragment, types, t_finite_hash({}), sp.registry);
  out << result.artificial << "\n";
  if (result.ok) return static_cast<int>(ExitStatus::kOk);
  bool parse_failed = false;
  for (const sql::SqlError& e : result.errors) {
    err << "error[" << e.code << "]: " << e.message << "\n";
    if (e.code == codes::kSqlParse) parse_failed = true;
  }
  return static_cast<int>(parse_failed ? ExitStatus::kParseError
                                       : ExitStatus::kTypeError);
}

}  // namespace complang
