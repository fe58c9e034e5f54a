#pragma once

#include <string>
#include <vector>

#include "complang/span.hpp"

namespace complang {

// Stable diagnostic codes, grouped by phase.
namespace codes {
// Surface / schema parsing.
inline constexpr const char* kParse = "PAR001";
inline constexpr const char* kReserved = "PAR002";
inline constexpr const char* kSchemaParse = "SCH001";
inline constexpr const char* kSchemaMissing = "SCH002";
// Type checking.
inline constexpr const char* kArgMismatch = "TYP001";
inline constexpr const char* kUnknownMethod = "TYP002";
inline constexpr const char* kUnknownClass = "TYP003";
inline constexpr const char* kUnboundVar = "TYP004";
inline constexpr const char* kBodyMismatch = "TYP005";
inline constexpr const char* kCompNotAType = "TYP006";
inline constexpr const char* kCompEvalBlame = "TYP007";
inline constexpr const char* kCompFuel = "TYP008";
inline constexpr const char* kReplay = "TYP009";
inline constexpr const char* kDuplicateMethod = "TYP010";
inline constexpr const char* kBadOverride = "TYP011";
inline constexpr const char* kBadSignature = "TYP012";
inline constexpr const char* kBlockMisuse = "TYP013";
inline constexpr const char* kMissingEntry = "TYP014";
// Termination / purity.
inline constexpr const char* kEffLoop = "EFF001";
inline constexpr const char* kEffNonTerminating = "EFF002";
inline constexpr const char* kEffRecursion = "EFF003";
inline constexpr const char* kEffBlock = "EFF004";
// SQL fragment checking.
inline constexpr const char* kSqlParse = "SQL001";
inline constexpr const char* kSqlUnknownName = "SQL002";
inline constexpr const char* kSqlTypeMismatch = "SQL003";
inline constexpr const char* kSqlArity = "SQL004";
}  // namespace codes

struct Diagnostic {
  Span span;
  std::string code;
  std::string message;
  std::string note;  // secondary line with canonical types; may be empty
};

using Diagnostics = std::vector<Diagnostic>;

// Renders "file:line:col: error[CODE]: message" plus an indented note line.
std::string render_diagnostic(const Diagnostic& d, const std::string& file);

enum class ExitStatus : int {
  kOk = 0,
  kTypeError = 1,
  kParseError = 2,
  kBlame = 3,
  kFuel = 4,
};

}  // namespace complang
