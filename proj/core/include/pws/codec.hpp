#pragma once

// Construction, canonical serialization, and classification of PWS broadcast
// artifacts: GSM 7-bit payloads, CBS pages, warning SIBs (6/7/8) and PWS
// paging records. Byte layouts are documented in docs/wire-format.md.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pws {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::size_t kMaxPageLength = 32;
inline constexpr std::uint16_t kPagingRnti = 0xFFFE;  // 65534
inline constexpr std::uint16_t kDefaultTestIdentifier = 0x1100;
inline constexpr std::uint8_t kGsm7DefaultAlphabet = 0x0F;

inline constexpr std::uint16_t kEtwsIdentifier = 0x1102;
inline constexpr std::uint16_t kCmasPresidential = 0x1112;
inline constexpr std::uint16_t kCmasExtremeFirst = 0x1113;
inline constexpr std::uint16_t kCmasExtremeLast = 0x111A;
inline constexpr std::uint16_t kCmasAmber = 0x111B;

// ---------------------------------------------------------------------------
// GSM 7-bit default alphabet (ASCII-coincident subset)

struct Gsm7Packed {
  Bytes octets;
  std::size_t septet_count = 0;
};

/// True for characters whose GSM default-alphabet code point equals their
/// ASCII value: letters, digits, space, CR, LF and !"#%&'()*+,-./:;<=>?
bool is_gsm7_supported(char c) noexcept;

/// Packs septets little-endian into octets; trailing pad bits are zero.
/// Throws Errc::UnsupportedCharacter with the offending position.
Gsm7Packed encode_gsm7(std::string_view text);

/// Throws Errc::TruncatedInput when `octets` cannot hold `septet_count`
/// septets and Errc::UnsupportedCharacter for septets outside the subset.
std::string decode_gsm7(std::span<const std::uint8_t> octets, std::size_t septet_count);

// ---------------------------------------------------------------------------
// CBS pages

struct CbsPage {
  std::array<std::uint8_t, kMaxPageLength> octets{};  // zero padded
  std::size_t used_length = 0;

  std::span<const std::uint8_t> used() const { return {octets.data(), used_length}; }
  bool operator==(const CbsPage&) const = default;
};

/// Splits a payload into ceil(n/32) pages; only the last may be short.
std::vector<CbsPage> segment_warning(std::span<const std::uint8_t> payload);

/// Concatenation of the used prefix of each page.
Bytes join_pages(std::span<const CbsPage> pages);

// ---------------------------------------------------------------------------
// Identifiers

enum class WarningKind {
  EtwsEarthquakeTsunami,
  CmasPresidential,
  CmasExtremeSevere,
  CmasAmber,
  Test,
};

std::string_view to_string(WarningKind kind);

/// 0x1102 ETWS, 0x1112 Presidential, 0x1113..0x111A Extreme/Severe,
/// 0x111B Amber, `test_identifier` Test. Anything else throws
/// Errc::UnknownIdentifier.
WarningKind classify_message_identifier(std::uint16_t id,
                                        std::uint16_t test_identifier = kDefaultTestIdentifier);

/// ETWS and Test kinds travel on SIB6/SIB7; CMAS kinds on SIB8.
bool is_etws_family(WarningKind kind) noexcept;

// ---------------------------------------------------------------------------
// Warning messages and SIBs

struct WarningMessage {
  int local_identifier = 0;
  std::uint16_t message_identifier = 0;
  std::uint16_t serial_number = 0;
  std::optional<std::uint16_t> warning_type;  // ETWS primary only
  std::uint8_t data_coding_scheme = kGsm7DefaultAlphabet;
  std::string text;

  bool operator==(const WarningMessage&) const = default;
};

/// Signature attached to a warning SIB. Produced and checked by the
/// security module; carried here because it is part of the SIB record.
struct SignatureBlob {
  std::string key_id;
  Bytes bytes;

  bool operator==(const SignatureBlob&) const = default;
};

enum class SibKind : std::uint8_t { Sib6 = 6, Sib7 = 7, Sib8 = 8 };
enum class NotificationPart { Primary, Secondary };

std::string_view to_string(SibKind kind);

struct WarningSib {
  SibKind sib_kind = SibKind::Sib8;
  WarningMessage message;
  std::size_t septet_count = 0;
  std::vector<CbsPage> pages;
  std::optional<SignatureBlob> signature;

  bool operator==(const WarningSib&) const = default;
};

/// Classifies, GSM-7 encodes and segments `message`. ETWS/Test primaries
/// become SIB6 and require a warning_type (Errc::MissingWarningType);
/// ETWS/Test secondaries become SIB7; CMAS kinds become SIB8 regardless of
/// `part`.
WarningSib build_warning_sib(const WarningMessage& message, NotificationPart part,
                             std::uint16_t test_identifier = kDefaultTestIdentifier);

/// Decodes the page payload back to text.
std::string sib_text(const WarningSib& sib);

/// Canonical content bytes: what gets signed and hashed. Excludes the
/// signature.
Bytes canonical_bytes(const WarningSib& sib);

/// Full record: canonical content followed by the signature section.
Bytes serialize_record(const WarningSib& sib);

/// Inverse of serialize_record. Throws Errc::MalformedRecord or
/// Errc::TruncatedInput.
WarningSib parse_warning_sib(std::span<const std::uint8_t> record,
                             std::uint16_t test_identifier = kDefaultTestIdentifier);

// ---------------------------------------------------------------------------
// Paging

enum class PagingCause : std::uint8_t { Emergency = 0, Service = 1 };

/// Paging record. The P-RNTI is fixed at 0xFFFE and cannot be set.
class PagingMessage {
 public:
  PagingMessage(bool pws_indication, bool si_modification, PagingCause cause)
      : pws_indication_(pws_indication), si_modification_(si_modification), cause_(cause) {}

  static constexpr std::uint16_t p_rnti() { return kPagingRnti; }
  bool short_message_pws_indication() const { return pws_indication_; }
  bool short_message_si_modification() const { return si_modification_; }
  PagingCause cause() const { return cause_; }

  bool operator==(const PagingMessage&) const = default;

 private:
  bool pws_indication_;
  bool si_modification_;
  PagingCause cause_;
};

std::optional<PagingMessage> build_pws_paging(bool has_pending_warning);

Bytes serialize(const PagingMessage& paging);

/// Rejects any record whose P-RNTI is not 0xFFFE.
PagingMessage parse_paging(std::span<const std::uint8_t> record);

// ---------------------------------------------------------------------------
// Hex helpers (lowercase, no separators)

std::string to_hex(std::span<const std::uint8_t> bytes);

/// Accepts upper or lower case and ignores whitespace. Throws
/// Errc::MalformedRecord on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

}  // namespace pws
