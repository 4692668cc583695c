#include "pws/security.hpp"

#include <sodium.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace pws {

namespace {

void ensure_sodium() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
  });
}

}  // namespace

KeyPair KeyPair::from_seed(std::string key_id, std::string_view seed_material) {
  ensure_sodium();
  std::array<unsigned char, crypto_hash_sha256_BYTES> seed{};
  crypto_hash_sha256(seed.data(), reinterpret_cast<const unsigned char*>(seed_material.data()),
                     seed_material.size());
  KeyPair kp;
  kp.key_id_ = std::move(key_id);
  crypto_sign_seed_keypair(kp.public_.data(), kp.secret_.data(), seed.data());
  sodium_memzero(seed.data(), seed.size());
  return kp;
}

SignatureBlob sign_sib(const KeyPair& key, const WarningSib& sib) {
  ensure_sodium();
  const Bytes content = canonical_bytes(sib);
  SignatureBlob blob;
  blob.key_id = key.key_id_;
  blob.bytes.resize(crypto_sign_BYTES);
  crypto_sign_detached(blob.bytes.data(), nullptr, content.data(), content.size(), key.secret_.data());
  return blob;
}

bool verify_sib(const PublicKey& key, const WarningSib& sib, const SignatureBlob& signature) {
  ensure_sodium();
  if (signature.key_id != key.key_id || signature.bytes.size() != crypto_sign_BYTES) return false;
  const Bytes content = canonical_bytes(sib);
  return crypto_sign_verify_detached(signature.bytes.data(), content.data(), content.size(),
                                     key.bytes.data()) == 0;
}

std::string_view to_string(Acceptance a) { return a == Acceptance::Accept ? "Accept" : "Reject"; }

Acceptance ue_accept(const VerificationPolicy& policy, const WarningSib& sib,
                     const std::optional<SignatureBlob>& signature,
                     const std::optional<PublicKey>& public_key) {
  if (!policy.ue_verifies) return Acceptance::Accept;
  if (!signature || !public_key || !policy.key_compatible) return Acceptance::Reject;
  return verify_sib(*public_key, sib, *signature) ? Acceptance::Accept : Acceptance::Reject;
}

OutcomeRow evaluate_matrix(const VerificationPolicy& policy) {
  //                         spoof  supp   false-rej
  static constexpr OutcomeRow kNoSignNoVerify{true, true, false};
  static constexpr OutcomeRow kNoSignVerify{false, true, true};
  static constexpr OutcomeRow kSignNoVerify{true, true, false};
  static constexpr OutcomeRow kSignVerify{false, true, false};

  const bool signs = policy.plmn_signs && policy.key_compatible;
  if (!signs) return policy.ue_verifies ? kNoSignVerify : kNoSignNoVerify;
  return policy.ue_verifies ? kSignVerify : kSignNoVerify;
}

std::string sib_digest(const WarningSib& sib) {
  ensure_sodium();
  const Bytes content = canonical_bytes(sib);
  std::array<std::uint8_t, crypto_hash_sha256_BYTES> digest{};
  crypto_hash_sha256(digest.data(), content.data(), content.size());
  return to_hex(digest);
}

std::vector<std::string> cross_check(const EnrichedMeasurementReport& report,
                                     const std::set<std::string>& legitimate_broadcast_log) {
  std::vector<std::string> flagged;
  for (const auto& h : report.warning_hashes) {
    if (legitimate_broadcast_log.contains(h)) continue;
    if (std::find(flagged.begin(), flagged.end(), h) == flagged.end()) flagged.push_back(h);
  }
  return flagged;
}

}  // namespace pws
