#pragma once

#include <cstdint>
#include <string>

namespace complang {

// Half-open source range; line/col are 1-based, col counts bytes.
struct Span {
  std::uint32_t line = 0;
  std::uint32_t col = 0;
  std::uint32_t end_line = 0;
  std::uint32_t end_col = 0;

  bool known() const { return line != 0; }
};

inline Span span_at(std::uint32_t line, std::uint32_t col) {
  return Span{line, col, line, col};
}

inline Span span_join(const Span& a, const Span& b) {
  if (!a.known()) return b;
  if (!b.known()) return a;
  Span s = a;
  if (b.end_line > s.end_line ||
      (b.end_line == s.end_line && b.end_col > s.end_col)) {
    s.end_line = b.end_line;
    s.end_col = b.end_col;
  }
  return s;
}

}  // namespace complang
