#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "complang/driver.hpp"
#include "complang/interp.hpp"

namespace complang {

inline std::string corpus_path(const std::string& name) {
  return std::string(COMPLANG_CORPUS_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline LoadResult load_corpus(const std::string& program,
                              const std::string& schema = "") {
  std::optional<std::string> s;
  if (!schema.empty()) s = slurp(corpus_path(schema));
  return load_program(slurp(corpus_path(program)), s);
}

// The call the `run` command makes: new Main, invoke main on nil.
inline Outcome run_main(LoadResult& lr, long long fuel = 1000000) {
  Interp interp(lr.ct, lr.natives, lr.has_schema ? &lr.schema : nullptr,
                nullptr);
  Span s;
  ExprPtr call = mk_call(mk_new("Main", s), "main", mk_nil(s), std::nullopt, s);
  return interp.run_with_budget(call, Env{}, fuel);
}

inline std::vector<std::string> codes_of(const Diagnostics& diags) {
  std::vector<std::string> out;
  out.reserve(diags.size());
  for (const Diagnostic& d : diags) out.push_back(d.code);
  return out;
}

inline bool has_code(const Diagnostics& diags, const std::string& code) {
  for (const Diagnostic& d : diags) {
    if (d.code == code) return true;
  }
  return false;
}

inline const Diagnostic* find_code(const Diagnostics& diags,
                                   const std::string& code) {
  for (const Diagnostic& d : diags) {
    if (d.code == code) return &d;
  }
  return nullptr;
}

}  // namespace complang
