#pragma once

// Partial-PKI protection of warning SIBs (6/7/8), the UE acceptance policy,
// the verification outcome matrix, and hash-enriched measurement reports.

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pws/codec.hpp"

namespace pws {

struct PublicKey {
  std::string key_id;
  std::array<std::uint8_t, 32> bytes{};

  bool operator==(const PublicKey&) const = default;
};

/// Signing key. Ed25519 under the hood, so signatures are deterministic.
class KeyPair {
 public:
  /// Derives the key deterministically from `seed_material` (hashed to a
  /// 32-byte seed).
  static KeyPair from_seed(std::string key_id, std::string_view seed_material);

  const std::string& key_id() const { return key_id_; }
  PublicKey public_key() const { return {key_id_, public_}; }

 private:
  friend SignatureBlob sign_sib(const KeyPair& key, const WarningSib& sib);

  std::string key_id_;
  std::array<std::uint8_t, 32> public_{};
  std::array<std::uint8_t, 64> secret_{};
};

/// Signature over canonical_bytes(sib); any existing signature on `sib` is
/// ignored.
SignatureBlob sign_sib(const KeyPair& key, const WarningSib& sib);

bool verify_sib(const PublicKey& key, const WarningSib& sib, const SignatureBlob& signature);

struct VerificationPolicy {
  bool plmn_signs = false;
  bool ue_verifies = false;
  bool key_compatible = true;  // UE holds the serving PLMN's public key

  bool operator==(const VerificationPolicy&) const = default;
};

enum class Acceptance { Accept, Reject };

std::string_view to_string(Acceptance a);

/// Non-verifying UEs accept everything. Verifying UEs accept only when a
/// signature is present, the keys are compatible and the signature checks
/// out against `public_key`.
Acceptance ue_accept(const VerificationPolicy& policy, const WarningSib& sib,
                     const std::optional<SignatureBlob>& signature,
                     const std::optional<PublicKey>& public_key);

struct OutcomeRow {
  bool spoofing_possible = false;
  bool suppression_possible = false;
  bool false_rejection_possible = false;

  bool operator==(const OutcomeRow&) const = default;
};

/// Analytic outcome table indexed by (network signs, UE verifies). An
/// incompatible key reads as "network does not sign".
OutcomeRow evaluate_matrix(const VerificationPolicy& policy);

/// SHA-256 over canonical_bytes(sib), lowercase hex.
std::string sib_digest(const WarningSib& sib);

struct EnrichedMeasurementReport {
  std::string reporting_ue;
  std::vector<std::uint8_t> observed_cells;
  std::vector<std::string> warning_hashes;
};

/// Hashes in `report` that the network never broadcast, in report order
/// and without repeats.
std::vector<std::string> cross_check(const EnrichedMeasurementReport& report,
                                     const std::set<std::string>& legitimate_broadcast_log);

}  // namespace pws
