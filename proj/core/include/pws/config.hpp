#pragma once

// Scenario description: network layout, UEs, scheduled warnings, an
// optional attack, and scripted events. Loaded from JSON.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pws/adversary.hpp"
#include "pws/channel.hpp"
#include "pws/entities.hpp"
#include "pws/security.hpp"

namespace pws {

struct UeConfig {
  std::string supi;
  std::uint32_t tmsi = 0;
  RrcState initial_state = RrcState::Idle;  // state reached after power-on
  int access_identity = 0;
  bool verifies_warnings = false;
  Tick power_on_tick = 0;
  int max_attach_attempts = 5;
};

struct GnbConfig {
  std::uint32_t gnb_id = 0;
  int si_periodicity_frames = 16;
};

struct AmfConfig {
  std::string name;
  std::vector<std::uint32_t> gnbs;
};

struct WarningSubmission {
  Tick at_tick = 0;
  WarningMessage message;
  NotificationPart part = NotificationPart::Primary;
  std::vector<std::uint32_t> area;  // empty = every configured TAC
  std::optional<std::uint32_t> global_ran_node_id;
  ScheduleParams params;
};

struct Timings {
  Tick t_rec_supi_ms = 10000;
  Tick t_rach_ran_ms = 2000;
  Tick attach_retry_interval_ms = 8000;
  Tick attach_overhead_ms = 3000;
  Tick mib_recheck_interval_ms = 300000;
  Tick cell_search_retry_ms = 10000;
  bool auto_recovery = true;  // user power-cycles after losing service to an attack
};

struct KeyConfig {
  std::string network_key_id = "plmn-00101";
  std::string network_key_seed = "pwsim network signing key";
  std::string foreign_key_seed = "pwsim visited network key";
  std::string attacker_key_seed = "pwsim attacker key";
};

enum class ScenarioEventKind { AirplaneToggle, Reboot, CoverageEscape, StopWarning };

std::string_view to_string(ScenarioEventKind k);

struct ScenarioEvent {
  Tick at_tick = 0;
  ScenarioEventKind kind = ScenarioEventKind::AirplaneToggle;
  std::string ue;  // SUPI, for UE events
  std::uint16_t message_identifier = 0;
  std::uint16_t serial_number = 0;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  SuccessMode mode = SuccessMode::Deterministic;
  Tick duration_ticks = 200000;
  std::uint16_t test_identifier = kDefaultTestIdentifier;
  DrxConfig drx;
  Timings timings;
  SuccessRule barring_rule = SuccessRule::barring();
  SuccessRule attachment_rule = SuccessRule::attachment();
  VerificationPolicy policy;
  bool enriched_reports = false;
  KeyConfig keys;
  std::vector<GnbConfig> gnbs;
  std::vector<AmfConfig> amfs;
  std::vector<CellConfig> cells;
  std::vector<UeConfig> ues;
  std::vector<WarningSubmission> warnings;
  std::optional<AttackPlan> attack;
  std::vector<ScenarioEvent> events;
};

/// Fills omitted sections (cells, gNBs, AMFs, UEs) with the lab defaults
/// and throws Errc::InvalidConfig naming the offending field path.
ScenarioConfig parse_config(const nlohmann::json& doc);

ScenarioConfig load_config(const std::filesystem::path& path);

/// Structural checks: positive duration, unique cell ids and SUPIs, known
/// references. Throws Errc::InvalidConfig.
void validate(const ScenarioConfig& config);

}  // namespace pws
