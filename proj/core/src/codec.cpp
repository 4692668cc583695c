#include "pws/codec.hpp"

#include <algorithm>
#include <cctype>

#include "pws/error.hpp"

namespace pws {

namespace {

std::string hex16(std::uint16_t v) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string s = "0x0000";
  for (int i = 0; i < 4; ++i) s[5 - i] = kDigits[(v >> (4 * i)) & 0xF];
  return s;
}

void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
}

// Bounds-checked reader over a record.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>((data_[pos_] << 8) | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::span<const std::uint8_t> take(std::size_t n) {
    need(n);
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }
  std::size_t pos() const { return pos_; }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) {
      throw Error(Errc::TruncatedInput, "record truncated at byte " + std::to_string(pos_), pos_);
    }
  }
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------

bool is_gsm7_supported(char c) noexcept {
  const auto u = static_cast<unsigned char>(c);
  if (std::isalnum(u) && u < 0x80) return true;
  switch (c) {
    case ' ': case '\n': case '\r':
    case '!': case '"': case '#': case '%': case '&': case '\'':
    case '(': case ')': case '*': case '+': case ',': case '-':
    case '.': case '/': case ':': case ';': case '<': case '=':
    case '>': case '?':
      return true;
    default:
      return false;
  }
}

Gsm7Packed encode_gsm7(std::string_view text) {
  Gsm7Packed out;
  out.septet_count = text.size();
  out.octets.assign((7 * text.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!is_gsm7_supported(text[i])) {
      throw Error(Errc::UnsupportedCharacter,
                  "character at position " + std::to_string(i) + " has no GSM 7-bit code point", i);
    }
    const auto septet = static_cast<unsigned>(text[i]) & 0x7F;
    const std::size_t bit = 7 * i;
    const std::size_t byte = bit / 8;
    const unsigned shift = bit % 8;
    out.octets[byte] |= static_cast<std::uint8_t>(septet << shift);
    if (shift > 1) out.octets[byte + 1] |= static_cast<std::uint8_t>(septet >> (8 - shift));
  }
  return out;
}

std::string decode_gsm7(std::span<const std::uint8_t> octets, std::size_t septet_count) {
  const std::size_t needed = (7 * septet_count + 7) / 8;
  if (octets.size() < needed) {
    throw Error(Errc::TruncatedInput, "need " + std::to_string(needed) + " octets for " +
                                          std::to_string(septet_count) + " septets, got " +
                                          std::to_string(octets.size()));
  }
  std::string text(septet_count, '\0');
  for (std::size_t i = 0; i < septet_count; ++i) {
    const std::size_t bit = 7 * i;
    const std::size_t byte = bit / 8;
    const unsigned shift = bit % 8;
    unsigned v = octets[byte] >> shift;
    if (shift > 1) v |= static_cast<unsigned>(octets[byte + 1]) << (8 - shift);
    const char c = static_cast<char>(v & 0x7F);
    if (!is_gsm7_supported(c)) {
      throw Error(Errc::UnsupportedCharacter,
                  "septet " + std::to_string(i) + " is outside the supported alphabet", i);
    }
    text[i] = c;
  }
  return text;
}

// ---------------------------------------------------------------------------

std::vector<CbsPage> segment_warning(std::span<const std::uint8_t> payload) {
  if (payload.empty()) throw Error(Errc::EmptyPayload, "cannot segment an empty payload");
  std::vector<CbsPage> pages;
  pages.reserve((payload.size() + kMaxPageLength - 1) / kMaxPageLength);
  for (std::size_t off = 0; off < payload.size(); off += kMaxPageLength) {
    CbsPage page;
    page.used_length = std::min(kMaxPageLength, payload.size() - off);
    std::copy_n(payload.begin() + static_cast<std::ptrdiff_t>(off), page.used_length, page.octets.begin());
    pages.push_back(page);
  }
  return pages;
}

Bytes join_pages(std::span<const CbsPage> pages) {
  Bytes out;
  for (const auto& p : pages) {
    auto used = p.used();
    out.insert(out.end(), used.begin(), used.end());
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(WarningKind kind) {
  switch (kind) {
    case WarningKind::EtwsEarthquakeTsunami: return "EtwsEarthquakeTsunami";
    case WarningKind::CmasPresidential: return "CmasPresidential";
    case WarningKind::CmasExtremeSevere: return "CmasExtremeSevere";
    case WarningKind::CmasAmber: return "CmasAmber";
    case WarningKind::Test: return "Test";
  }
  return "Unknown";
}

std::string_view to_string(SibKind kind) {
  switch (kind) {
    case SibKind::Sib6: return "SIB6";
    case SibKind::Sib7: return "SIB7";
    case SibKind::Sib8: return "SIB8";
  }
  return "SIB?";
}

WarningKind classify_message_identifier(std::uint16_t id, std::uint16_t test_identifier) {
  if (id == test_identifier) return WarningKind::Test;
  if (id == kEtwsIdentifier) return WarningKind::EtwsEarthquakeTsunami;
  if (id == kCmasPresidential) return WarningKind::CmasPresidential;
  if (id >= kCmasExtremeFirst && id <= kCmasExtremeLast) return WarningKind::CmasExtremeSevere;
  if (id == kCmasAmber) return WarningKind::CmasAmber;
  throw Error(Errc::UnknownIdentifier, "unknown message identifier " + hex16(id), id);
}

bool is_etws_family(WarningKind kind) noexcept {
  return kind == WarningKind::EtwsEarthquakeTsunami || kind == WarningKind::Test;
}

WarningSib build_warning_sib(const WarningMessage& message, NotificationPart part,
                             std::uint16_t test_identifier) {
  const WarningKind kind = classify_message_identifier(message.message_identifier, test_identifier);
  if (message.local_identifier < 0 || message.local_identifier > 0xFF) {
    throw Error(Errc::OutOfRange, "local_identifier must fit in one octet");
  }
  WarningSib sib;
  if (is_etws_family(kind)) {
    if (part == NotificationPart::Primary) {
      if (!message.warning_type) {
        throw Error(Errc::MissingWarningType,
                    "ETWS primary notification " + hex16(message.message_identifier) +
                        " requires warning_type");
      }
      sib.sib_kind = SibKind::Sib6;
    } else {
      sib.sib_kind = SibKind::Sib7;
    }
  } else {
    sib.sib_kind = SibKind::Sib8;
  }
  sib.message = message;
  auto packed = encode_gsm7(message.text);
  sib.septet_count = packed.septet_count;
  sib.pages = segment_warning(packed.octets);
  if (sib.pages.size() > 0xFF) throw Error(Errc::OutOfRange, "warning text exceeds 255 pages");
  return sib;
}

std::string sib_text(const WarningSib& sib) {
  return decode_gsm7(join_pages(sib.pages), sib.septet_count);
}

Bytes canonical_bytes(const WarningSib& sib) {
  const auto& m = sib.message;
  Bytes out;
  out.reserve(13 + sib.pages.size() * (kMaxPageLength + 1));
  out.push_back(static_cast<std::uint8_t>(sib.sib_kind));
  out.push_back(static_cast<std::uint8_t>(m.local_identifier & 0xFF));
  put_u16(out, m.message_identifier);
  put_u16(out, m.serial_number);
  out.push_back(m.warning_type ? 1 : 0);
  put_u16(out, m.warning_type.value_or(0));
  out.push_back(m.data_coding_scheme);
  put_u16(out, static_cast<std::uint16_t>(sib.septet_count));
  out.push_back(static_cast<std::uint8_t>(sib.pages.size()));
  for (const auto& p : sib.pages) {
    out.push_back(static_cast<std::uint8_t>(p.used_length));
    auto used = p.used();
    out.insert(out.end(), used.begin(), used.end());
  }
  return out;
}

Bytes serialize_record(const WarningSib& sib) {
  Bytes out = canonical_bytes(sib);
  if (!sib.signature) {
    out.push_back(0);
    return out;
  }
  const auto& sig = *sib.signature;
  out.push_back(1);
  out.push_back(static_cast<std::uint8_t>(sig.key_id.size()));
  out.insert(out.end(), sig.key_id.begin(), sig.key_id.end());
  put_u16(out, static_cast<std::uint16_t>(sig.bytes.size()));
  out.insert(out.end(), sig.bytes.begin(), sig.bytes.end());
  return out;
}

WarningSib parse_warning_sib(std::span<const std::uint8_t> record, std::uint16_t test_identifier) {
  Reader r(record);
  WarningSib sib;
  const auto kind_byte = r.u8();
  if (kind_byte < 6 || kind_byte > 8) {
    throw Error(Errc::MalformedRecord, "unknown SIB kind " + std::to_string(kind_byte), 0);
  }
  sib.sib_kind = static_cast<SibKind>(kind_byte);
  auto& m = sib.message;
  m.local_identifier = r.u8();
  m.message_identifier = r.u16();
  m.serial_number = r.u16();
  const auto has_type = r.u8();
  const auto type = r.u16();
  if (has_type > 1) throw Error(Errc::MalformedRecord, "bad warning_type flag", 6);
  if (has_type) m.warning_type = type;
  m.data_coding_scheme = r.u8();
  sib.septet_count = r.u16();
  const auto page_count = r.u8();
  for (unsigned i = 0; i < page_count; ++i) {
    CbsPage page;
    page.used_length = r.u8();
    if (page.used_length == 0 || page.used_length > kMaxPageLength) {
      throw Error(Errc::MalformedRecord, "page length out of range", r.pos() - 1);
    }
    auto used = r.take(page.used_length);
    std::copy(used.begin(), used.end(), page.octets.begin());
    sib.pages.push_back(page);
  }
  const auto has_sig = r.u8();
  if (has_sig == 1) {
    SignatureBlob sig;
    const auto key_len = r.u8();
    auto key = r.take(key_len);
    sig.key_id.assign(key.begin(), key.end());
    const auto sig_len = r.u16();
    auto bytes = r.take(sig_len);
    sig.bytes.assign(bytes.begin(), bytes.end());
    sib.signature = std::move(sig);
  } else if (has_sig != 0) {
    throw Error(Errc::MalformedRecord, "bad signature flag", r.pos() - 1);
  }
  if (!r.done()) throw Error(Errc::MalformedRecord, "trailing bytes after record", r.pos());

  const auto payload = join_pages(sib.pages);
  if (payload.size() != (7 * sib.septet_count + 7) / 8) {
    throw Error(Errc::MalformedRecord, "page payload does not match septet count");
  }
  m.text = decode_gsm7(payload, sib.septet_count);

  // The SIB kind must agree with what the identifier classifies as.
  const auto kind = classify_message_identifier(m.message_identifier, test_identifier);
  const bool consistent = is_etws_family(kind)
                              ? (sib.sib_kind == SibKind::Sib6 ? m.warning_type.has_value()
                                                               : sib.sib_kind == SibKind::Sib7)
                              : sib.sib_kind == SibKind::Sib8;
  if (!consistent) {
    throw Error(Errc::MalformedRecord, std::string(to_string(sib.sib_kind)) +
                                           " does not match identifier " + hex16(m.message_identifier));
  }
  return sib;
}

// ---------------------------------------------------------------------------

std::optional<PagingMessage> build_pws_paging(bool has_pending_warning) {
  if (!has_pending_warning) return std::nullopt;
  return PagingMessage(true, false, PagingCause::Emergency);
}

Bytes serialize(const PagingMessage& paging) {
  Bytes out;
  put_u16(out, PagingMessage::p_rnti());
  std::uint8_t flags = 0;
  if (paging.short_message_pws_indication()) flags |= 0x01;
  if (paging.short_message_si_modification()) flags |= 0x02;
  out.push_back(flags);
  out.push_back(static_cast<std::uint8_t>(paging.cause()));
  return out;
}

PagingMessage parse_paging(std::span<const std::uint8_t> record) {
  Reader r(record);
  const auto rnti = r.u16();
  if (rnti != kPagingRnti) {
    throw Error(Errc::MalformedRecord, "paging P-RNTI must be 0xFFFE, got " + hex16(rnti), 0);
  }
  const auto flags = r.u8();
  const auto cause = r.u8();
  if ((flags & ~0x03) != 0) throw Error(Errc::MalformedRecord, "reserved paging flag bits set", 2);
  if (cause > 1) throw Error(Errc::MalformedRecord, "unknown paging cause", 3);
  if (!r.done()) throw Error(Errc::MalformedRecord, "trailing bytes after paging record", r.pos());
  return PagingMessage((flags & 0x01) != 0, (flags & 0x02) != 0, static_cast<PagingCause>(cause));
}

// ---------------------------------------------------------------------------

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kDigits[b >> 4]);
    s.push_back(kDigits[b & 0xF]);
  }
  return s;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  Bytes out;
  int hi = -1;
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const char c = hex[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    const int v = nibble(c);
    if (v < 0) throw Error(Errc::MalformedRecord, "invalid hex character", i);
    if (hi < 0) {
      hi = v;
    } else {
      out.push_back(static_cast<std::uint8_t>((hi << 4) | v));
      hi = -1;
    }
  }
  if (hi >= 0) throw Error(Errc::MalformedRecord, "odd number of hex digits");
  return out;
}

}  // namespace pws
