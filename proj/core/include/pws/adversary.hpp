#pragma once

// Attacker playbooks: reconnaissance and cloning, malicious attachment,
// the MitM relay, the non-MitM reject loop, spoofed warning generation and
// the barring broadcast.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pws/channel.hpp"
#include "pws/codec.hpp"
#include "pws/entities.hpp"
#include "pws/rng.hpp"
#include "pws/security.hpp"

namespace pws {

enum class AttackVariant { SpoofMitM, SpoofNonMitM, SuppressDoSMitM, SuppressDoSNonMitM, Barring };

std::string_view to_string(AttackVariant v);
std::optional<AttackVariant> parse_attack_variant(std::string_view name);

bool is_spoofing(AttackVariant v) noexcept;
bool is_mitm(AttackVariant v) noexcept;
/// Every variant except Barring needs a malicious attachment.
bool needs_attachment(AttackVariant v) noexcept;

struct SpoofProfile {
  std::string name = "custom";
  int si_periodicity_frames = 16;
  int repetition_period = 10;
  int number_of_broadcasts = 10000;
  bool concurrent_warnings = false;
  bool message_id_permutations = false;
  bool serial_permutations = false;
  int max_segment = 32;

  static SpoofProfile sufficient();
  static SpoofProfile maximum();

  bool operator==(const SpoofProfile&) const = default;
};

/// Accepts "sufficient" and "maximum".
std::optional<SpoofProfile> spoof_profile_preset(std::string_view name);

/// Throws Errc::OutOfRange when a field leaves the range spanned by the two
/// presets (max_segment must be exactly 32).
void validate(const SpoofProfile& profile);

struct AttackPlan {
  AttackVariant variant = AttackVariant::Barring;
  double rogue_gain_boost_db = 10.0;
  std::optional<SpoofProfile> spoof_profile;
  Tick start_tick = 0;
  std::optional<Tick> stop_tick;
  std::vector<std::string> victims;    // SUPIs; empty = every UE
  std::vector<std::uint8_t> targets;   // cells to clone; empty = default per variant
  Tick mitm_connection_lifetime_ms = 60000;
  std::uint16_t spoof_message_identifier = kCmasPresidential;
  std::uint16_t spoof_serial_number = 0x4000;
  std::string spoof_text = "PRESIDENTIAL ALERT Evacuate the area now";
};

/// Throws Errc::InvalidConfig unless spoof_profile is present exactly for
/// spoofing variants, and the timing fields are consistent.
void validate(const AttackPlan& plan);

struct RogueCell {
  std::uint8_t cloned_from = 0;
  CellConfig config;
};

/// Snapshot of the strongest legitimate cell. Throws Errc::NoLegitimateCell.
CellConfig reconnaissance(std::span<const CellConfig> channel);

/// Clones `target`. Spoofing and suppression variants raise the reselection
/// priority to 7; Barring marks the MIB barred/notAllowed and reserves the
/// cell in SIB1. The gain is target + boost, capped at 0 dB.
RogueCell deploy_rogue(const AttackPlan& plan, const CellConfig& target);

// ---------------------------------------------------------------------------
// Malicious attachment

enum class LurePath { Reselection, Handover };

std::string_view to_string(LurePath p);

enum class Endpoint { Ue, Rogue, LegitimateCell, Amf };

std::string_view to_string(Endpoint e);

/// Effect a transcript step has on the UE when it is applied.
enum class LureEffect { None, ReleaseInactive, CampOnRogue, ConnectToRogue, HandoverToRogue, ReleaseToIdle };

struct TranscriptStep {
  Tick offset = 0;
  std::string layer;  // "RRC", "NAS" or "MOB" for idle-mode mobility
  std::string message;
  Endpoint from = Endpoint::Ue;
  Endpoint to = Endpoint::Rogue;
  LureEffect effect = LureEffect::None;
  bool starts_attack_window = false;

  bool operator==(const TranscriptStep&) const = default;
};

struct LureTiming {
  Tick attach_overhead_ms = 3000;   // first RRC message to the RRC Release
  Tick attach_retry_interval_ms = 8000;
};

struct LureTranscript {
  LurePath path = LurePath::Reselection;
  std::vector<TranscriptStep> steps;  // ends with the first NAS Attach Request
};

/// Connected UEs are taken through an unverified measurement report and a
/// handover; Idle/Inactive ones through cell reselection. Throws
/// Errc::InsufficientGain when attack_success fails. The caller guarantees
/// the UE is not already attached to the rogue.
LureTranscript lure(const UeState& ue, double delta, SuccessMode mode, Rng& rng, const LureTiming& timing,
                    const SuccessRule& rule = SuccessRule::attachment());

// ---------------------------------------------------------------------------
// MitM relay

enum class RelayMode { Relay, DropWarnings, InjectWarnings };

enum class Direction { Uplink, Downlink };

struct RadioMessage {
  Direction direction = Direction::Downlink;
  std::string layer;
  std::string name;
  std::optional<PagingMessage> paging;
  std::optional<WarningSib> sib;

  bool operator==(const RadioMessage&) const = default;
};

/// Paging with the PWS indication, or any SIB6/7/8.
bool is_warning_bearing(const RadioMessage& msg);

/// Relay forwards unchanged. DropWarnings forwards everything but
/// warning-bearing messages. InjectWarnings forwards and appends `forged`
/// after downlink traffic.
std::vector<RadioMessage> mitm_step(const RadioMessage& msg, RelayMode mode,
                                    std::span<const RadioMessage> forged = {});

// ---------------------------------------------------------------------------
// Non-MitM reject loop

struct RejectLoopStep {
  Tick tick = 0;
  std::string message;  // "AttachRequest", "AttachReject", "RRCRelease", "RRCSetupRequest", "RRCSetup"
  Endpoint from = Endpoint::Ue;
  Endpoint to = Endpoint::Rogue;
};

struct RejectLoopResult {
  std::vector<RejectLoopStep> steps;
  int rejects = 0;
  Tick last_reject_tick = 0;
};

/// Answers every Attach Request with an Attach Reject until the UE gives up
/// and deregisters. `first_attach_tick` is when the first request arrives.
RejectLoopResult nonmitm_reject_loop(UeState& ue, Tick first_attach_tick, Tick retry_interval);

// ---------------------------------------------------------------------------
// Spoofed warnings

inline constexpr std::array<std::uint16_t, 11> kSpoofIdentifiers = {
    kEtwsIdentifier, 0x1112, 0x1113, 0x1114, 0x1115, 0x1116, 0x1117, 0x1118, 0x1119, 0x111A, 0x111B};
inline constexpr std::uint16_t kSpoofSerialFirst = 0x3000;
inline constexpr std::uint16_t kSpoofSerialLast = 0x5000;

/// Stream of (message_identifier, serial_number) pairs for forged warnings.
class SpoofStream {
 public:
  SpoofStream(const SpoofProfile& profile, std::uint16_t base_identifier, std::uint16_t base_serial,
              std::uint64_t seed);

  std::pair<std::uint16_t, std::uint16_t> next();

 private:
  SpoofProfile profile_;
  std::uint16_t base_identifier_;
  std::uint16_t base_serial_;
  Rng rng_;
  std::optional<std::pair<std::uint16_t, std::uint16_t>> last_;
};

SpoofStream spoof_serials_and_ids(const SpoofProfile& profile, std::uint16_t base_identifier,
                                  std::uint16_t base_serial, std::uint64_t seed);

inline constexpr std::uint16_t kEtwsWarningTypeEarthquakeTsunami = 0x0580;

/// Forged SIBs for one emission: one, or two with concurrent warnings.
/// ETWS identifiers become SIB6 primaries. `attacker_key` signs them when the
/// network is known to sign; the legitimate key is never available here.
std::vector<WarningSib> forge_warnings(const SpoofProfile& profile, SpoofStream& stream, std::string_view text,
                                       const KeyPair* attacker_key,
                                       std::uint16_t test_identifier = kDefaultTestIdentifier);

}  // namespace pws
