#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace subtag {

enum class Errc {
  DivisionByZero,
  FieldMismatch,
  LengthMismatch,
  InvalidField,
  RankDeficient,
  DuplicatePoint,
  TooLong,
  TooLargeToEnumerate,
  TargetInCoalition,
  IndexOutOfRange,
  DependentBasis,
  CyclicGraph,
  DimensionMismatch,
  UnknownNode,
  NotQualified,
  PayloadInSubspace,
  InconsistentSystem,
  InvalidParams,
  InvalidCurve,
  ParseError,
  Internal,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and tests) can branch on the kind rather than the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& what);

}  // namespace subtag
