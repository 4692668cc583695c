#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pws {

enum class Errc {
  UnsupportedCharacter,
  TruncatedInput,
  EmptyPayload,
  UnknownIdentifier,
  MissingWarningType,
  MalformedRecord,
  OutOfRange,
  UnknownAccessIdentity,
  EmptySet,
  EmptyArea,
  NoLegitimateCell,
  InsufficientGain,
  IllegalTransition,
  InvalidConfig,
  MalformedTrace,
};

std::string_view to_string(Errc code);

/// Single exception type for the library. `code()` identifies the failure;
/// `index()` carries a position (character offset, byte offset) when one
/// applies.
class Error : public std::runtime_error {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  Error(Errc code, const std::string& what, std::size_t index = npos)
      : std::runtime_error(what), code_(code), index_(index) {}

  Errc code() const noexcept { return code_; }
  std::size_t index() const noexcept { return index_; }

 private:
  Errc code_;
  std::size_t index_;
};

}  // namespace pws
