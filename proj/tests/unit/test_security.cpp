#include <gtest/gtest.h>

#include "pws/codec.hpp"
#include "pws/security.hpp"

using namespace pws;

namespace {

WarningSib sample_sib() {
  WarningMessage m;
  m.message_identifier = 0x1112;
  m.serial_number = 0x3001;
  m.text = "Shelter in place";
  return build_warning_sib(m, NotificationPart::Primary);
}

}  // namespace

TEST(Signature, SignVerifyAndTamper) {
  const auto key = KeyPair::from_seed("net", "seed-a");
  const auto sib = sample_sib();
  const auto sig = sign_sib(key, sib);
  EXPECT_EQ(sig.key_id, "net");
  EXPECT_EQ(sig.bytes.size(), 64u);
  EXPECT_TRUE(verify_sib(key.public_key(), sib, sig));

  auto tampered = sib;
  tampered.pages[0].octets[0] ^= 0x01;
  EXPECT_FALSE(verify_sib(key.public_key(), tampered, sig));

  auto reserial = sib;
  reserial.message.serial_number ^= 1;
  EXPECT_FALSE(verify_sib(key.public_key(), reserial, sig));

  const auto other = KeyPair::from_seed("net", "seed-b");
  EXPECT_FALSE(verify_sib(other.public_key(), sib, sig));
}

TEST(Signature, Deterministic) {
  const auto k1 = KeyPair::from_seed("net", "same");
  const auto k2 = KeyPair::from_seed("net", "same");
  EXPECT_EQ(k1.public_key(), k2.public_key());
  EXPECT_EQ(sign_sib(k1, sample_sib()), sign_sib(k2, sample_sib()));
}

TEST(Signature, IgnoresAttachedSignature) {
  const auto key = KeyPair::from_seed("net", "x");
  auto sib = sample_sib();
  const auto sig = sign_sib(key, sib);
  sib.signature = sig;
  EXPECT_EQ(sign_sib(key, sib), sig);
  EXPECT_TRUE(verify_sib(key.public_key(), sib, sig));
}

TEST(UeAccept, PolicyCases) {
  const auto net = KeyPair::from_seed("net", "n");
  const auto rogue = KeyPair::from_seed("net", "r");
  const auto sib = sample_sib();
  const auto good = sign_sib(net, sib);
  const auto forged = sign_sib(rogue, sib);

  VerificationPolicy off{false, false, true};
  EXPECT_EQ(ue_accept(off, sib, std::nullopt, std::nullopt), Acceptance::Accept);
  EXPECT_EQ(ue_accept(off, sib, forged, net.public_key()), Acceptance::Accept);

  VerificationPolicy verify_only{false, true, true};
  EXPECT_EQ(ue_accept(verify_only, sib, std::nullopt, net.public_key()), Acceptance::Reject);

  VerificationPolicy sign_only{true, false, true};
  EXPECT_EQ(ue_accept(sign_only, sib, std::nullopt, net.public_key()), Acceptance::Accept);

  VerificationPolicy both{true, true, true};
  EXPECT_EQ(ue_accept(both, sib, good, net.public_key()), Acceptance::Accept);
  EXPECT_EQ(ue_accept(both, sib, forged, net.public_key()), Acceptance::Reject);
  EXPECT_EQ(ue_accept(both, sib, good, std::nullopt), Acceptance::Reject);

  VerificationPolicy roaming{true, true, false};
  EXPECT_EQ(ue_accept(roaming, sib, good, net.public_key()), Acceptance::Reject);
}

TEST(Matrix, AnalyticRows) {
  EXPECT_EQ(evaluate_matrix({false, false, true}), (OutcomeRow{true, true, false}));
  EXPECT_EQ(evaluate_matrix({false, true, true}), (OutcomeRow{false, true, true}));
  EXPECT_EQ(evaluate_matrix({true, false, true}), (OutcomeRow{true, true, false}));
  EXPECT_EQ(evaluate_matrix({true, true, true}), (OutcomeRow{false, true, false}));
  EXPECT_EQ(evaluate_matrix({true, true, false}), evaluate_matrix({false, true, true}));
  for (bool s : {false, true}) {
    for (bool v : {false, true}) EXPECT_TRUE(evaluate_matrix({s, v, true}).suppression_possible);
  }
}

TEST(Digest, StableAndSignatureBlind) {
  const auto sib = sample_sib();
  const auto d = sib_digest(sib);
  EXPECT_EQ(d.size(), 64u);
  EXPECT_EQ(d, sib_digest(sample_sib()));
  auto signed_copy = sib;
  signed_copy.signature = sign_sib(KeyPair::from_seed("k", "k"), sib);
  EXPECT_EQ(sib_digest(signed_copy), d);
  auto other = sib;
  other.message.serial_number++;
  EXPECT_NE(sib_digest(other), d);
}

TEST(Digest, EtwsExampleVector) {
  // Reference digest computed outside the library with Python's hashlib.
  WarningMessage m;
  m.message_identifier = 0x1102;
  m.serial_number = 0x3000;
  m.warning_type = 0x0580;
  m.text = "This is a ETWS test message";
  const auto sib = build_warning_sib(m, NotificationPart::Primary);
  EXPECT_EQ(to_hex(canonical_bytes(sib)),
            "0600110230000105800f001b011854747a0e4acf416150917a9d82e8e5391dd42ecfe7e17319");
  EXPECT_EQ(sib_digest(sib), "92758b3ba618f3e45b9972bec69089207351d05b00e1bc0654fae21d705cc32f");
}

TEST(CrossCheck, FlagsUnknownHashes) {
  const std::set<std::string> log{"aa", "bb"};
  EXPECT_TRUE(cross_check({"ue", {1}, {}}, log).empty());
  EXPECT_TRUE(cross_check({"ue", {1}, {"aa", "bb", "aa"}}, log).empty());
  const auto flagged = cross_check({"ue", {1}, {"cc", "aa", "dd", "cc"}}, log);
  EXPECT_EQ(flagged, (std::vector<std::string>{"cc", "dd"}));
}
