#include "pws/error.hpp"

namespace pws {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::UnsupportedCharacter: return "UnsupportedCharacter";
    case Errc::TruncatedInput: return "TruncatedInput";
    case Errc::EmptyPayload: return "EmptyPayload";
    case Errc::UnknownIdentifier: return "UnknownIdentifier";
    case Errc::MissingWarningType: return "MissingWarningType";
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::UnknownAccessIdentity: return "UnknownAccessIdentity";
    case Errc::EmptySet: return "EmptySet";
    case Errc::EmptyArea: return "EmptyArea";
    case Errc::NoLegitimateCell: return "NoLegitimateCell";
    case Errc::InsufficientGain: return "InsufficientGain";
    case Errc::IllegalTransition: return "IllegalTransition";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::MalformedTrace: return "MalformedTrace";
  }
  return "Unknown";
}

}  // namespace pws
