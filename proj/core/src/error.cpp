#include "subtag/error.hpp"

namespace subtag {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::InvalidField: return "InvalidField";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::DuplicatePoint: return "DuplicatePoint";
    case Errc::TooLong: return "TooLong";
    case Errc::TooLargeToEnumerate: return "TooLargeToEnumerate";
    case Errc::TargetInCoalition: return "TargetInCoalition";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::DependentBasis: return "DependentBasis";
    case Errc::CyclicGraph: return "CyclicGraph";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::UnknownNode: return "UnknownNode";
    case Errc::NotQualified: return "NotQualified";
    case Errc::PayloadInSubspace: return "PayloadInSubspace";
    case Errc::InconsistentSystem: return "InconsistentSystem";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::InvalidCurve: return "InvalidCurve";
    case Errc::ParseError: return "ParseError";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace subtag
