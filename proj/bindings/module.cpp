#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "complang/ast.hpp"
#include "complang/driver.hpp"
#include "complang/interp.hpp"
#include "complang/parser.hpp"
#include "complang/sql.hpp"
#include "complang/subtype.hpp"
#include "complang/value.hpp"

namespace py = pybind11;
using namespace complang;

namespace {

py::list diags_to_list(const Diagnostics& diags) {
  py::list out;
  for (const Diagnostic& d : diags) {
    py::dict e;
    e["code"] = d.code;
    e["message"] = d.message;
    e["line"] = d.span.line;
    e["col"] = d.span.col;
    if (!d.note.empty()) e["note"] = d.note;
    out.append(e);
  }
  return out;
}

const char* status_name(ExitStatus s) {
  switch (s) {
    case ExitStatus::kOk:
      return "ok";
    case ExitStatus::kTypeError:
      return "type_error";
    case ExitStatus::kParseError:
      return "parse_error";
    case ExitStatus::kBlame:
      return "blame";
    case ExitStatus::kFuel:
      return "fuel";
  }
  return "parse_error";
}

py::dict check(const std::string& source,
               const std::optional<std::string>& schema,
               long long comp_fuel) {
  LoadResult lr = load_program(source, schema, comp_fuel);
  py::dict out;
  out["ok"] = lr.ok();
  out["status"] = status_name(lr.status);
  out["diagnostics"] = diags_to_list(lr.diags);
  if (lr.ok()) out["rewritten"] = render_rewritten(lr);
  return out;
}

py::dict run(const std::string& source,
             const std::optional<std::string>& schema, long long fuel) {
  LoadResult lr = load_program(source, schema);
  py::dict out;
  out["diagnostics"] = diags_to_list(lr.diags);
  if (!lr.ok()) {
    out["status"] = status_name(lr.status);
    return out;
  }
  const MethodEntry* entry = lr.ct.lookup_exact("Main", "main");
  if (!entry || entry->origin != MethodOrigin::kUser) {
    out["status"] = "type_error";
    out["diagnostics"] = diags_to_list(
        {{{}, codes::kMissingEntry, "the program has no Main.main entry point",
          ""}});
    return out;
  }
  Interp machine(lr.ct, lr.natives, lr.has_schema ? &lr.schema : nullptr,
                 nullptr, InterpOptions{});
  Span s{};
  ExprPtr call = mk_call(mk_new("Main", s), "main", mk_nil(s), std::nullopt, s);
  Outcome o = machine.run_with_budget(call, {}, fuel);
  out["steps"] = o.steps;
  switch (o.kind) {
    case OutcomeKind::kValue:
      out["status"] = "ok";
      out["value"] = print_value(o.value);
      out["type"] = print_type(type_of(o.value));
      break;
    case OutcomeKind::kBlame: {
      out["status"] = "blame";
      py::dict b;
      b["kind"] = blame_kind_name(o.blame->kind);
      b["message"] = o.blame->message;
      if (!o.blame->note.empty()) b["note"] = o.blame->note;
      out["blame"] = b;
      break;
    }
    case OutcomeKind::kFuel:
      out["status"] = "fuel";
      break;
  }
  return out;
}

py::dict check_sql(const std::string& schema, const std::string& fragment,
                   const std::vector<std::string>& arg_types) {
  py::dict out;
  SchemaParseResult sp = parse_schema(schema);
  if (!sp.ok) {
    out["ok"] = false;
    out["errors"] = diags_to_list(sp.diags);
    return out;
  }
  std::vector<Type> types;
  for (const std::string& text : arg_types) {
    auto t = parse_type_text(text);
    if (!t) throw py::value_error("cannot parse argument type '" + text + "'");
    types.push_back(*t);
  }
  sql::CheckOutcome r =
      sql::check_fragment(fragment, types, t_finite_hash({}), sp.registry);
  out["ok"] = r.ok;
  out["artificial"] = r.artificial;
  py::list errs;
  for (const sql::SqlError& e : r.errors) {
    py::dict d;
    d["code"] = e.code;
    d["message"] = e.message;
    errs.append(d);
  }
  out["errors"] = errs;
  return out;
}

Type parse_type_or_throw(const std::string& text) {
  auto t = parse_type_text(text);
  if (!t) throw py::value_error("cannot parse type '" + text + "'");
  return *t;
}

// Hierarchy for the type-universe helpers: the prelude classes with no
// user additions.
const ClassHierarchy& prelude_hierarchy() {
  static const LoadResult lr = load_program("class Empty\n", std::nullopt);
  return lr.ct.hierarchy();
}

}  // namespace

PYBIND11_MODULE(_complang, m) {
  m.doc() = "comp-typed language core";
  m.attr("__version__") = "0.1.0";

  m.def("check", &check, py::arg("source"), py::arg("schema") = py::none(),
        py::arg("comp_fuel") = 100000,
        "Type check a program; returns ok/status/diagnostics and, on "
        "success, the rewritten program with its inserted checks.");
  m.def("run", &run, py::arg("source"), py::arg("schema") = py::none(),
        py::arg("fuel") = 1000000,
        "Check a program and evaluate Main.main(nil); returns the printed "
        "value and its runtime type, blame details, or fuel exhaustion.");
  m.def("check_sql", &check_sql, py::arg("schema"), py::arg("fragment"),
        py::arg("arg_types") = std::vector<std::string>{},
        "Type check one SQL where-fragment against a schema; returns "
        "ok/errors plus the artificial query it was checked through.");

  m.def(
      "normalize_type",
      [](const std::string& text) {
        return print_type(parse_type_or_throw(text));
      },
      py::arg("text"), "Parse a type and print its normal form.");
  m.def(
      "is_subtype",
      [](const std::string& a, const std::string& b) {
        return subtype(prelude_hierarchy(), parse_type_or_throw(a),
                       parse_type_or_throw(b), nullptr);
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "join_types",
      [](const std::string& a, const std::string& b) {
        return print_type(join(prelude_hierarchy(), parse_type_or_throw(a),
                               parse_type_or_throw(b), nullptr));
      },
      py::arg("a"), py::arg("b"));
}
