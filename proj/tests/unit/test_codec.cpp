#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "pws/codec.hpp"
#include "pws/error.hpp"

using namespace pws;

namespace {

// Reference packer: lay the septets out as an explicit bit list, LSB first,
// then read octets back off it. Shares nothing with the library code path.
std::vector<std::uint8_t> oracle_pack(const std::string& text) {
  std::vector<int> bits;
  for (unsigned char c : text) {
    for (int b = 0; b < 7; ++b) bits.push_back((c >> b) & 1);
  }
  while (bits.size() % 8 != 0) bits.push_back(0);
  std::vector<std::uint8_t> out(bits.size() / 8, 0);
  for (std::size_t k = 0; k < bits.size(); ++k) out[k / 8] |= static_cast<std::uint8_t>(bits[k] << (k % 8));
  return out;
}

std::string oracle_unpack(const std::vector<std::uint8_t>& octets, std::size_t septets) {
  std::string out;
  for (std::size_t s = 0; s < septets; ++s) {
    int v = 0;
    for (int b = 0; b < 7; ++b) {
      const std::size_t k = s * 7 + b;
      v |= ((octets[k / 8] >> (k % 8)) & 1) << b;
    }
    out.push_back(static_cast<char>(v));
  }
  return out;
}

const std::string kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789 \r\n!\"#%&'()*+,-./:;<=>?";

std::string random_text(std::mt19937_64& gen, std::size_t max_len) {
  const std::size_t len = 1 + gen() % max_len;
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(kAlphabet[gen() % kAlphabet.size()]);
  return s;
}

WarningMessage etws_example() {
  WarningMessage m;
  m.message_identifier = 0x1102;
  m.serial_number = 0x3000;
  m.warning_type = 0x0580;
  m.data_coding_scheme = 0x0F;
  m.text = "This is a ETWS test message";
  return m;
}

}  // namespace

TEST(Gsm7, OracleAgreesOnKnownStrings) {
  for (std::string s : {"A", "Th", "hello", "1234567", "12345678", "This is a ETWS test message"}) {
    const auto packed = encode_gsm7(s);
    EXPECT_EQ(packed.octets, oracle_pack(s)) << s;
    EXPECT_EQ(packed.septet_count, s.size());
  }
}

TEST(Gsm7, TwoCharacterPackingByHand) {
  // 'T' = 0x54, 'h' = 0x68: octet 0 keeps all of 'T' plus bit 0 of 'h' (0),
  // octet 1 holds the remaining six bits of 'h'.
  const auto packed = encode_gsm7("Th");
  ASSERT_EQ(packed.octets.size(), 2u);
  EXPECT_EQ(packed.octets[0], 0x54);
  EXPECT_EQ(packed.octets[1], 0x34);
}

TEST(Gsm7, EightSeptetsFillSevenOctets) {
  EXPECT_EQ(encode_gsm7("ABCDEFGH").octets.size(), 7u);
  EXPECT_EQ(encode_gsm7("ABCDEFGHI").octets.size(), 8u);
}

TEST(Gsm7, RejectsUnsupportedCharacterWithIndex) {
  try {
    encode_gsm7("ok$no");
    FAIL() << "expected UnsupportedCharacter";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnsupportedCharacter);
    EXPECT_EQ(e.index(), 2u);
  }
  EXPECT_THROW(encode_gsm7("caf\xC3\xA9"), Error);
  EXPECT_THROW(encode_gsm7("@"), Error);
}

TEST(Gsm7, DecodeTruncated) {
  const auto packed = encode_gsm7("hello world");
  std::vector<std::uint8_t> cut(packed.octets.begin(), packed.octets.end() - 1);
  try {
    decode_gsm7(cut, packed.septet_count);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TruncatedInput);
  }
}

TEST(Gsm7, RoundTripProperty10k) {
  std::mt19937_64 gen(0xC0DEC);
  for (int i = 0; i < 10000; ++i) {
    const auto text = random_text(gen, 400);
    const auto packed = encode_gsm7(text);
    ASSERT_EQ(packed.octets, oracle_pack(text));
    ASSERT_EQ(oracle_unpack(packed.octets, packed.septet_count), text);
    ASSERT_EQ(decode_gsm7(packed.octets, packed.septet_count), text);
  }
}

TEST(Pages, SegmentationBoundaries) {
  std::vector<std::uint8_t> payload(65);
  for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<std::uint8_t>(i);
  const auto pages = segment_warning(payload);
  ASSERT_EQ(pages.size(), 3u);
  EXPECT_EQ(pages[0].used_length, 32u);
  EXPECT_EQ(pages[1].used_length, 32u);
  EXPECT_EQ(pages[2].used_length, 1u);
  EXPECT_EQ(pages[2].octets[1], 0);
  EXPECT_EQ(join_pages(pages), payload);
  EXPECT_EQ(segment_warning(std::vector<std::uint8_t>(32)).size(), 1u);
  EXPECT_EQ(segment_warning(std::vector<std::uint8_t>(33)).size(), 2u);
}

TEST(Pages, EmptyPayloadRejected) {
  try {
    segment_warning({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyPayload);
  }
}

TEST(Classify, IdentifierRanges) {
  EXPECT_EQ(classify_message_identifier(0x1102), WarningKind::EtwsEarthquakeTsunami);
  EXPECT_EQ(classify_message_identifier(0x1112), WarningKind::CmasPresidential);
  for (std::uint16_t id = 0x1113; id <= 0x111A; ++id) {
    EXPECT_EQ(classify_message_identifier(id), WarningKind::CmasExtremeSevere);
  }
  EXPECT_EQ(classify_message_identifier(0x111B), WarningKind::CmasAmber);
  EXPECT_EQ(classify_message_identifier(0x1100), WarningKind::Test);
  EXPECT_EQ(classify_message_identifier(0x1120, 0x1120), WarningKind::Test);
  EXPECT_THROW(classify_message_identifier(0x1111), Error);
  EXPECT_THROW(classify_message_identifier(0x111C), Error);
}

TEST(WarningSibs, EtwsExampleRecord) {
  const auto sib = build_warning_sib(etws_example(), NotificationPart::Primary);
  EXPECT_EQ(sib.sib_kind, SibKind::Sib6);
  EXPECT_EQ(sib.pages.size(), 1u);
  EXPECT_EQ(sib.septet_count, 27u);
  EXPECT_EQ(sib.pages[0].used_length, (27u * 7 + 7) / 8);
  EXPECT_EQ(classify_message_identifier(sib.message.message_identifier), WarningKind::EtwsEarthquakeTsunami);
  EXPECT_EQ(sib_text(sib), "This is a ETWS test message");
}

TEST(WarningSibs, KindSelection) {
  auto m = etws_example();
  EXPECT_EQ(build_warning_sib(m, NotificationPart::Secondary).sib_kind, SibKind::Sib7);
  m.warning_type.reset();
  try {
    build_warning_sib(m, NotificationPart::Primary);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MissingWarningType);
  }
  EXPECT_EQ(build_warning_sib(m, NotificationPart::Secondary).sib_kind, SibKind::Sib7);
  m.message_identifier = 0x1112;
  EXPECT_EQ(build_warning_sib(m, NotificationPart::Primary).sib_kind, SibKind::Sib8);
  EXPECT_EQ(build_warning_sib(m, NotificationPart::Secondary).sib_kind, SibKind::Sib8);
}

TEST(WarningSibs, RecordRoundTripProperty) {
  std::mt19937_64 gen(77);
  const std::uint16_t ids[] = {0x1102, 0x1112, 0x1115, 0x111B, 0x1100};
  for (int i = 0; i < 2000; ++i) {
    WarningMessage m;
    m.local_identifier = static_cast<int>(gen() % 256);
    m.message_identifier = ids[gen() % 5];
    m.serial_number = static_cast<std::uint16_t>(gen());
    m.warning_type = static_cast<std::uint16_t>(gen());
    m.text = random_text(gen, 300);
    const auto part = gen() % 2 ? NotificationPart::Primary : NotificationPart::Secondary;
    auto sib = build_warning_sib(m, part);
    if (gen() % 2) sib.signature = SignatureBlob{"k", std::vector<std::uint8_t>(64, 0xAB)};
    for (const auto& p : sib.pages) ASSERT_LE(p.used_length, kMaxPageLength);
    const auto bytes = serialize_record(sib);
    ASSERT_EQ(parse_warning_sib(bytes), sib);
  }
}

TEST(WarningSibs, ParserRejectsDamage) {
  const auto sib = build_warning_sib(etws_example(), NotificationPart::Primary);
  auto bytes = serialize_record(sib);
  auto trailing = bytes;
  trailing.push_back(0);
  EXPECT_THROW(parse_warning_sib(trailing), Error);
  auto cut = bytes;
  cut.pop_back();
  cut.pop_back();
  EXPECT_THROW(parse_warning_sib(cut), Error);
  auto wrong_kind = bytes;
  wrong_kind[0] = 8;
  EXPECT_THROW(parse_warning_sib(wrong_kind), Error);
  auto bad_page = bytes;
  bad_page[13] = 33;
  EXPECT_THROW(parse_warning_sib(bad_page), Error);
}

TEST(Paging, FixedPrnti) {
  const auto p = build_pws_paging(true);
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(PagingMessage::p_rnti(), 65534);
  EXPECT_TRUE(p->short_message_pws_indication());
  EXPECT_FALSE(build_pws_paging(false).has_value());
  const auto bytes = serialize(*p);
  EXPECT_EQ(to_hex(bytes), "fffe0100");
  EXPECT_EQ(parse_paging(bytes), *p);
  auto forged = bytes;
  forged[1] = 0xFD;
  EXPECT_THROW(parse_paging(forged), Error);
}

TEST(Hex, RoundTrip) {
  const std::vector<std::uint8_t> b{0x00, 0x7F, 0xFF, 0xA5};
  EXPECT_EQ(to_hex(b), "007fffa5");
  EXPECT_EQ(from_hex("00 7F ff a5"), b);
  EXPECT_THROW(from_hex("abc"), Error);
  EXPECT_THROW(from_hex("zz"), Error);
}
