#include "pws/adversary.hpp"

#include <algorithm>

#include "pws/error.hpp"

namespace pws {

std::string_view to_string(AttackVariant v) {
  switch (v) {
    case AttackVariant::SpoofMitM: return "SpoofMitM";
    case AttackVariant::SpoofNonMitM: return "SpoofNonMitM";
    case AttackVariant::SuppressDoSMitM: return "SuppressDoSMitM";
    case AttackVariant::SuppressDoSNonMitM: return "SuppressDoSNonMitM";
    case AttackVariant::Barring: return "Barring";
  }
  return "Unknown";
}

std::optional<AttackVariant> parse_attack_variant(std::string_view name) {
  for (auto v : {AttackVariant::SpoofMitM, AttackVariant::SpoofNonMitM, AttackVariant::SuppressDoSMitM,
                 AttackVariant::SuppressDoSNonMitM, AttackVariant::Barring}) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

bool is_spoofing(AttackVariant v) noexcept {
  return v == AttackVariant::SpoofMitM || v == AttackVariant::SpoofNonMitM;
}

bool is_mitm(AttackVariant v) noexcept {
  return v == AttackVariant::SpoofMitM || v == AttackVariant::SuppressDoSMitM;
}

bool needs_attachment(AttackVariant v) noexcept { return v != AttackVariant::Barring; }

SpoofProfile SpoofProfile::sufficient() { return {"sufficient", 16, 10, 10000, false, false, false, 32}; }

SpoofProfile SpoofProfile::maximum() { return {"maximum", 512, 131071, 65535, true, true, true, 32}; }

std::optional<SpoofProfile> spoof_profile_preset(std::string_view name) {
  if (name == "sufficient") return SpoofProfile::sufficient();
  if (name == "maximum") return SpoofProfile::maximum();
  return std::nullopt;
}

void validate(const SpoofProfile& p) {
  const int f = p.si_periodicity_frames;
  if (f < 8 || f > 512 || (f & (f - 1)) != 0) {
    throw Error(Errc::OutOfRange, "si_periodicity_frames must be one of 8, 16, ..., 512");
  }
  if (p.repetition_period < 1 || p.repetition_period > kMaxRepetitionPeriod) {
    throw Error(Errc::OutOfRange, "repetition_period must be within [1, 131071]");
  }
  if (p.number_of_broadcasts < 1 || p.number_of_broadcasts > kMaxNumberOfBroadcasts) {
    throw Error(Errc::OutOfRange, "number_of_broadcasts must be within [1, 65535]");
  }
  if (p.max_segment != static_cast<int>(kMaxPageLength)) {
    throw Error(Errc::OutOfRange, "max_segment must be 32");
  }
}

void validate(const AttackPlan& plan) {
  if (is_spoofing(plan.variant) != plan.spoof_profile.has_value()) {
    throw Error(Errc::InvalidConfig, is_spoofing(plan.variant) ? "spoofing variant requires a spoof profile"
                                                               : "spoof profile given for a non-spoofing variant");
  }
  if (plan.spoof_profile) validate(*plan.spoof_profile);
  if (plan.start_tick < 0) throw Error(Errc::InvalidConfig, "start_tick must be non-negative");
  if (plan.stop_tick && *plan.stop_tick < plan.start_tick) {
    throw Error(Errc::InvalidConfig, "stop_tick precedes start_tick");
  }
  if (plan.mitm_connection_lifetime_ms <= 0) {
    throw Error(Errc::InvalidConfig, "mitm_connection_lifetime_ms must be positive");
  }
  if (plan.rogue_gain_boost_db < 0) throw Error(Errc::InvalidConfig, "rogue_gain_boost_db must be non-negative");
}

CellConfig reconnaissance(std::span<const CellConfig> channel) {
  std::vector<CellConfig> legit;
  for (const auto& c : channel) {
    if (c.legitimate) legit.push_back(c);
  }
  if (legit.empty()) throw Error(Errc::NoLegitimateCell, "no legitimate cell visible");
  return rank_cells(legit).front();
}

RogueCell deploy_rogue(const AttackPlan& plan, const CellConfig& target) {
  RogueCell rogue;
  rogue.cloned_from = target.cell_id;
  rogue.config = target;
  rogue.config.legitimate = false;
  rogue.config.gain_db = std::min(kMaxGainDb, target.gain_db + plan.rogue_gain_boost_db);
  if (plan.variant == AttackVariant::Barring) {
    rogue.config.mib.cell_barred = CellBarred::Barred;
    rogue.config.mib.intra_freq_reselection = IntraFreqReselection::NotAllowed;
    rogue.config.sib1.cell_reserved_for_operator_use = CellReservation::Reserved;
  } else {
    rogue.config.sib2.cell_reselection_priority = 7;
  }
  return rogue;
}

// ---------------------------------------------------------------------------

std::string_view to_string(LurePath p) { return p == LurePath::Handover ? "Handover" : "Reselection"; }

std::string_view to_string(Endpoint e) {
  switch (e) {
    case Endpoint::Ue: return "ue";
    case Endpoint::Rogue: return "rogue";
    case Endpoint::LegitimateCell: return "gnb";
    case Endpoint::Amf: return "amf";
  }
  return "unknown";
}

LureTranscript lure(const UeState& ue, double delta, SuccessMode mode, Rng& rng, const LureTiming& timing,
                    const SuccessRule& rule) {
  if (ue.rrc_state() == RrcState::Deregistered) {
    throw Error(Errc::IllegalTransition, "a deregistered UE cannot be lured");
  }
  if (!attack_success(delta, mode, rng, rule)) {
    throw Error(Errc::InsufficientGain, "rogue gain margin too small for malicious attachment");
  }
  const Tick o = timing.attach_overhead_ms;
  const Tick retry = o + timing.attach_retry_interval_ms;
  LureTranscript t;
  auto& s = t.steps;
  using E = Endpoint;
  using L = LureEffect;
  if (ue.rrc_state() == RrcState::Connected) {
    t.path = LurePath::Handover;
    s.push_back({0, "RRC", "MeasurementReport", E::Ue, E::LegitimateCell, L::None, false});
    s.push_back({0, "RRC", "RRCReconfiguration", E::LegitimateCell, E::Ue, L::HandoverToRogue, false});
    s.push_back({0, "RRC", "RRCReestablishmentRequest", E::Ue, E::Rogue, L::None, true});
    s.push_back({o / 6, "RRC", "RRCReject", E::Rogue, E::Ue, L::ReleaseToIdle, false});
    s.push_back({2 * o / 6, "RRC", "RRCSetupRequest", E::Ue, E::Rogue, L::None, false});
    s.push_back({2 * o / 6, "RRC", "RRCSetup", E::Rogue, E::Ue, L::ConnectToRogue, false});
  } else {
    t.path = LurePath::Reselection;
    if (ue.rrc_state() == RrcState::Inactive) {
      s.push_back({0, "RRC", "RRCRelease", E::LegitimateCell, E::Ue, L::ReleaseInactive, false});
    }
    s.push_back({0, "MOB", "CellReselection", E::Ue, E::Rogue, L::CampOnRogue, false});
    s.push_back({0, "RRC", "RRCSetupRequest", E::Ue, E::Rogue, L::None, true});
    s.push_back({2 * o / 6, "RRC", "RRCSetup", E::Rogue, E::Ue, L::ConnectToRogue, false});
  }
  s.push_back({3 * o / 6, "NAS", "ServiceRequest", E::Ue, E::Rogue, L::None, false});
  s.push_back({4 * o / 6, "NAS", "ServiceReject", E::Rogue, E::Ue, L::None, false});
  s.push_back({o, "RRC", "RRCRelease", E::Rogue, E::Ue, L::ReleaseToIdle, false});
  s.push_back({retry, "RRC", "RRCSetupRequest", E::Ue, E::Rogue, L::None, false});
  s.push_back({retry, "RRC", "RRCSetup", E::Rogue, E::Ue, L::ConnectToRogue, false});
  s.push_back({retry, "NAS", "AttachRequest", E::Ue, E::Rogue, L::None, false});
  return t;
}

// ---------------------------------------------------------------------------

bool is_warning_bearing(const RadioMessage& msg) {
  if (msg.paging && msg.paging->short_message_pws_indication()) return true;
  return msg.sib.has_value();
}

std::vector<RadioMessage> mitm_step(const RadioMessage& msg, RelayMode mode, std::span<const RadioMessage> forged) {
  std::vector<RadioMessage> out;
  if (mode == RelayMode::DropWarnings && msg.direction == Direction::Downlink && is_warning_bearing(msg)) {
    return out;
  }
  out.push_back(msg);
  if (mode == RelayMode::InjectWarnings && msg.direction == Direction::Downlink) {
    out.insert(out.end(), forged.begin(), forged.end());
  }
  return out;
}

RejectLoopResult nonmitm_reject_loop(UeState& ue, Tick first_attach_tick, Tick retry_interval) {
  RejectLoopResult r;
  Tick t = first_attach_tick;
  while (true) {
    r.steps.push_back({t, "AttachRequest", Endpoint::Ue, Endpoint::Rogue});
    r.steps.push_back({t, "AttachReject", Endpoint::Rogue, Endpoint::Ue});
    ++r.rejects;
    r.last_reject_tick = t;
    const auto outcome = ue_handle_attach_reject(ue, t, retry_interval);
    if (outcome.deregistered) break;
    r.steps.push_back({t, "RRCRelease", Endpoint::Rogue, Endpoint::Ue});
    t = *outcome.retry_at;
    r.steps.push_back({t, "RRCSetupRequest", Endpoint::Ue, Endpoint::Rogue});
    r.steps.push_back({t, "RRCSetup", Endpoint::Rogue, Endpoint::Ue});
  }
  return r;
}

// ---------------------------------------------------------------------------

SpoofStream::SpoofStream(const SpoofProfile& profile, std::uint16_t base_identifier, std::uint16_t base_serial,
                         std::uint64_t seed)
    : profile_(profile), base_identifier_(base_identifier), base_serial_(base_serial), rng_(seed) {}

std::pair<std::uint16_t, std::uint16_t> SpoofStream::next() {
  if (!profile_.message_id_permutations && !profile_.serial_permutations) return {base_identifier_, base_serial_};
  constexpr std::uint64_t serial_span = kSpoofSerialLast - kSpoofSerialFirst + 1;
  std::pair<std::uint16_t, std::uint16_t> p;
  do {
    p.first = profile_.message_id_permutations ? kSpoofIdentifiers[rng_.below(kSpoofIdentifiers.size())]
                                               : base_identifier_;
    p.second = profile_.serial_permutations
                   ? static_cast<std::uint16_t>(kSpoofSerialFirst + rng_.below(serial_span))
                   : base_serial_;
  } while (last_ && *last_ == p);
  last_ = p;
  return p;
}

SpoofStream spoof_serials_and_ids(const SpoofProfile& profile, std::uint16_t base_identifier,
                                  std::uint16_t base_serial, std::uint64_t seed) {
  validate(profile);
  return SpoofStream(profile, base_identifier, base_serial, seed);
}

std::vector<WarningSib> forge_warnings(const SpoofProfile& profile, SpoofStream& stream, std::string_view text,
                                       const KeyPair* attacker_key, std::uint16_t test_identifier) {
  std::vector<WarningSib> out;
  const int count = profile.concurrent_warnings ? 2 : 1;
  for (int i = 0; i < count; ++i) {
    const auto [id, serial] = stream.next();
    WarningMessage m;
    m.message_identifier = id;
    m.serial_number = serial;
    m.text = std::string(text);
    const auto kind = classify_message_identifier(id, test_identifier);
    if (is_etws_family(kind)) m.warning_type = kEtwsWarningTypeEarthquakeTsunami;
    auto sib = build_warning_sib(m, NotificationPart::Primary, test_identifier);
    if (attacker_key) sib.signature = sign_sib(*attacker_key, sib);
    out.push_back(std::move(sib));
  }
  return out;
}

}  // namespace pws
