#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "complang/driver.hpp"

namespace {

// Splits on top-level commas so generic and tuple types keep theirs.
std::vector<std::string> split_types(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : csv) {
    if (c == '<' || c == '[' || c == '{') ++depth;
    if (c == '>' || c == ']' || c == '}') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  for (std::string& s : out) {
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
  }
  return out;
}

std::optional<std::string> opt_of(const std::string& s) {
  return s.empty() ? std::nullopt : std::make_optional(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"checker and interpreter for the comp-typed language"};
  app.require_subcommand(1);

  std::string check_file, check_schema;
  long long check_fuel = 100000;
  bool emit_rewritten = false;
  CLI::App* check = app.add_subcommand("check", "type check a program");
  check->add_option("file", check_file, "program (.lc)")->required();
  check->add_option("--schema", check_schema, "schema file");
  check->add_option("--fuel", check_fuel, "budget per comp type evaluation");
  check->add_flag("--emit-rewritten", emit_rewritten,
                  "print the program with inserted checks");

  std::string run_file, run_schema;
  long long run_fuel = 1000000;
  bool trace = false;
  CLI::App* run = app.add_subcommand("run", "type check and execute");
  run->add_option("file", run_file, "program (.lc)")->required();
  run->add_option("--schema", run_schema, "schema file");
  run->add_option("--fuel", run_fuel, "runtime step budget");
  run->add_flag("--trace", trace, "print each evaluation step");

  std::string sql_schema, fragment, arg_types;
  CLI::App* sqlcheck =
      app.add_subcommand("sqlcheck", "type check a SQL condition fragment");
  sqlcheck->add_option("fragment", fragment, "SQL condition")->required();
  sqlcheck->add_option("--schema", sql_schema, "schema file")->required();
  sqlcheck->add_option("--arg-types", arg_types,
                       "comma-separated types bound to the ? placeholders");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*check) {
    return complang::cmd_check(check_file, opt_of(check_schema),
                               {emit_rewritten, check_fuel}, std::cout,
                               std::cerr);
  }
  if (*run) {
    return complang::cmd_run(run_file, opt_of(run_schema), {run_fuel, trace},
                             std::cout, std::cerr);
  }
  return complang::cmd_sqlcheck(sql_schema, fragment, split_types(arg_types),
                                std::cout, std::cerr);
}
