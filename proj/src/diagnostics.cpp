#include "complang/diagnostics.hpp"

namespace complang {

std::string render_diagnostic(const Diagnostic& d, const std::string& file) {
  std::string out = file + ":" + std::to_string(d.span.line) + ":" +
                    std::to_string(d.span.col) + ": error[" + d.code +
                    "]: " + d.message + "\n";
  if (!d.note.empty()) {
    out += "  note: " + d.note + "\n";
  }
  return out;
}

}  // namespace complang
