#pragma once

// Legitimate-side entities: the UE state machine, gNodeB broadcast
// scheduling, AMF routing and trace records, and the CBC/CBCF front end.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pws/channel.hpp"
#include "pws/codec.hpp"
#include "pws/security.hpp"

namespace pws {

/// Simulation time: one tick is one millisecond.
using Tick = std::int64_t;
inline constexpr Tick kTicksPerFrame = 10;

// ---------------------------------------------------------------------------
// UE

enum class RrcState { Idle, Inactive, Connected, Deregistered };

std::string_view to_string(RrcState s);

/// Idle<->Connected, Inactive->Idle, Connected->Inactive, any->Deregistered,
/// Deregistered->Idle. Everything else is illegal.
bool transition_allowed(RrcState from, RrcState to) noexcept;

struct DrxConfig {
  Tick cycle_length_ticks = 1280;           // 128 frames
  Tick si_modification_period_ticks = 5120;
};

void validate(const DrxConfig& drx);

struct MibCacheEntry {
  Mib mib;
  Tick stored_at = 0;
};

struct ReceivedWarning {
  Tick tick = 0;
  std::uint16_t message_identifier = 0;
  std::uint16_t serial_number = 0;
  bool displayed = false;
};

class UeState {
 public:
  std::string supi;
  std::uint32_t tmsi = 0;
  std::map<std::uint8_t, MibCacheEntry> mib_cache;
  int attach_attempts = 0;
  int max_attach_attempts = 5;
  int access_identity = 0;
  bool verifies_warnings = false;
  std::vector<ReceivedWarning> received_warnings;
  bool ims_emergency_available = false;

  RrcState rrc_state() const { return rrc_state_; }
  /// Present iff Connected.
  std::optional<std::uint8_t> serving_cell() const { return serving_cell_; }
  /// Cell an Idle/Inactive UE camps on.
  std::optional<std::uint8_t> camped_cell() const { return camped_cell_; }

  // State transitions. Each throws Errc::IllegalTransition when the edge is
  // not allowed from the current state.
  void camp(std::uint8_t cell);               // Idle/Inactive: (re)select cell
  void connect(std::uint8_t cell);            // Idle -> Connected
  void handover(std::uint8_t cell);           // Connected -> Connected
  void release_to_idle();                     // Connected -> Idle, camps on the old serving cell
  void suspend();                             // Connected -> Inactive
  void resume_to_idle();                      // Inactive -> Idle
  void deregister();                          // any -> Deregistered
  /// Deregistered -> Idle with attach counter and MIB cache wiped. Does not
  /// camp; the caller performs cell selection.
  void power_cycle();

  bool has_displayed(std::uint16_t id, std::uint16_t serial) const;

 private:
  void move_to(RrcState to);

  RrcState rrc_state_ = RrcState::Deregistered;
  std::optional<std::uint8_t> serving_cell_;
  std::optional<std::uint8_t> camped_cell_;
};

/// tmsi mod cycle.
Tick ue_paging_occasion(std::uint32_t tmsi, const DrxConfig& drx);

/// Idle/Inactive UEs check at their paging occasion every DRX cycle;
/// Connected UEs at SI modification period boundaries.
bool is_paging_check(const UeState& ue, Tick tick, const DrxConfig& drx);

/// Smallest tick > `after` at which is_paging_check holds, or nullopt for
/// Deregistered UEs.
std::optional<Tick> next_paging_check(const UeState& ue, Tick after, const DrxConfig& drx);

/// What a UE can observe from the cell it listens to at one tick.
struct CellView {
  std::optional<PagingMessage> paging_for_idle;       // in this paging occasion
  std::optional<PagingMessage> paging_for_connected;  // at this modification boundary
  std::vector<WarningSib> scheduled;                  // warning SIBs currently on air
};

struct UeTickResult {
  std::optional<PagingMessage> paging;
  std::vector<std::size_t> read;  // indices into CellView::scheduled
};

/// Decides whether the UE checks paging at `tick` and, on a PWS indication,
/// which scheduled SIBs it reads. Warnings already displayed (same
/// identifier and serial) are skipped.
UeTickResult ue_tick(const UeState& ue, Tick tick, const CellView& view, const DrxConfig& drx);

enum class WarningOutcome { Displayed, Discarded, Rejected };

std::string_view to_string(WarningOutcome o);

struct WarningContext {
  VerificationPolicy policy;
  std::optional<PublicKey> public_key;
  std::uint16_t test_identifier = kDefaultTestIdentifier;
};

/// Test-kind warnings are discarded; a verifying UE may reject; everything
/// else is displayed. Every outcome is appended to received_warnings.
WarningOutcome ue_receive_warning(UeState& ue, const WarningSib& sib, Tick tick, const WarningContext& ctx);

struct AttachRejectOutcome {
  bool deregistered = false;
  std::optional<Tick> retry_at;
};

/// Counts the reject; at max_attach_attempts the UE deregisters (DoS) and
/// loses IMS emergency service, otherwise a retry is due after
/// `retry_interval`.
AttachRejectOutcome ue_handle_attach_reject(UeState& ue, Tick tick, Tick retry_interval);

enum class RecoveryEvent { AirplaneToggle, Reboot };

std::string_view to_string(RecoveryEvent e);

/// Wipes temporal memory: any state -> Deregistered -> Idle, counters and
/// MIB cache cleared. The UE is left without a camped cell.
void ue_recover(UeState& ue, RecoveryEvent event);

enum class MibStoreResult { Stored, Ignored, Refreshed };

std::string_view to_string(MibStoreResult r);

/// The first MIB per cell is cached; later ones are ignored until
/// `recheck_interval` has elapsed since it was stored.
MibStoreResult ue_store_mib(UeState& ue, std::uint8_t cell_id, const Mib& mib, Tick tick, Tick recheck_interval);

/// Cached MIB for `cell_id` if still inside its recheck interval.
std::optional<Mib> cached_mib(const UeState& ue, std::uint8_t cell_id, Tick tick, Tick recheck_interval);

// ---------------------------------------------------------------------------
// Warning distribution

struct ScheduleParams {
  int repetition_period_s = 10;
  int number_of_broadcasts = 100;
  bool cwm_indicator = false;
  NotificationPart part = NotificationPart::Primary;
};

inline constexpr int kMaxNumberOfBroadcasts = 65535;
inline constexpr int kMaxRepetitionPeriod = 131071;

struct WriteReplaceWarningRequest {
  std::uint16_t message_identifier = 0;
  std::uint16_t serial_number = 0;
  std::vector<std::uint32_t> warning_area_list;  // TACs; empty = every cell
  std::optional<std::uint32_t> global_ran_node_id;
  int repetition_period_s = 10;
  int number_of_broadcasts = 100;
  bool cwm_indicator = false;
  WarningSib warning_sib;
};

/// Throws Errc::OutOfRange for broadcast counts outside [1, 65535] or
/// repetition periods outside [1, 131071].
void validate(const WriteReplaceWarningRequest& req);

struct BroadcastSchedule {
  std::uint64_t id = 0;
  WriteReplaceWarningRequest request;
  std::uint8_t cell_id = 0;
  int remaining_broadcasts = 0;
  Tick start_tick = 0;
  Tick next_tick = 0;
  int si_periodicity_frames = 16;
  bool stopped = false;

  bool active() const { return !stopped && remaining_broadcasts > 0; }
  Tick si_period_ticks() const { return si_periodicity_frames * kTicksPerFrame; }
  Tick repetition_ticks() const { return Tick{request.repetition_period_s} * 1000; }
  /// Start of the paging round in effect at `tick` (tick >= start_tick).
  Tick round_start(Tick tick) const;
};

struct WriteReplaceResponse {
  std::uint32_t gnb_id = 0;
  std::uint16_t message_identifier = 0;
  std::uint16_t serial_number = 0;
  bool duplicate = false;
  std::vector<std::uint8_t> broadcast_cells;
  std::vector<std::uint32_t> completed_tacs;
};

struct WriteReplaceResult {
  WriteReplaceResponse response;
  std::vector<std::uint64_t> started;   // schedule ids
  std::vector<std::uint64_t> replaced;  // schedule ids stopped by a non-CWM request
  std::vector<std::pair<std::uint8_t, PagingMessage>> paging;
};

class Gnb {
 public:
  Gnb(std::uint32_t gnb_id, std::vector<CellConfig> cells, int si_periodicity_frames = 16);

  std::uint32_t id() const { return id_; }
  const std::vector<CellConfig>& cells() const { return cells_; }
  std::set<std::uint32_t> tacs() const;
  int si_periodicity_frames() const { return si_periodicity_frames_; }

  /// Duplicate (identifier, serial) pairs get a Response but no schedule.
  /// With CWM the new warning runs alongside ongoing ones; without it, it
  /// replaces them.
  WriteReplaceResult write_replace(const WriteReplaceWarningRequest& req, Tick now);

  /// Removes matching schedules. Returns whether anything was stopped; the
  /// acknowledgement is implicit.
  bool stop_warning(std::uint16_t id, std::uint16_t serial);

  /// Accounts one SIB emission for `schedule_id`; false if the schedule is
  /// gone, stopped or out of budget.
  bool consume_broadcast(std::uint64_t schedule_id);

  const std::vector<BroadcastSchedule>& schedules() const { return schedules_; }
  const BroadcastSchedule* find_schedule(std::uint64_t schedule_id) const;
  std::vector<const BroadcastSchedule*> active_on(std::uint8_t cell_id) const;

 private:
  std::uint32_t id_;
  std::vector<CellConfig> cells_;
  int si_periodicity_frames_;
  std::vector<BroadcastSchedule> schedules_;
  std::set<std::pair<std::uint16_t, std::uint16_t>> seen_;
  std::uint64_t next_schedule_id_ = 1;
};

struct WriteReplaceConfirm {
  std::uint16_t message_identifier = 0;
  std::uint16_t serial_number = 0;
  std::vector<std::uint32_t> unknown_tacs;
};

enum class TraceOutcome { Completed, Failed };

std::string_view to_string(TraceOutcome o);

struct AmfTraceRecord {
  std::uint16_t message_identifier = 0;
  std::uint16_t serial_number = 0;
  TraceOutcome outcome = TraceOutcome::Failed;
  std::vector<std::uint32_t> broadcast_completed_areas;
};

struct AmfForwardResult {
  WriteReplaceConfirm confirm;
  std::vector<std::size_t> targets;  // indices into the gNB span
};

class Amf {
 public:
  Amf(std::string name, std::vector<std::uint32_t> gnb_ids);

  const std::string& name() const { return name_; }
  bool serves(std::uint32_t gnb_id) const;
  std::set<std::uint32_t> tacs(std::span<const Gnb> gnbs) const;

  /// The confirm is produced before any RAN response. Without a TAC list
  /// and Global RAN Node ID the request goes to every served gNB.
  AmfForwardResult forward(const WriteReplaceWarningRequest& req, std::span<const Gnb> gnbs) const;

  /// Outcome comes from RAN responses alone; UEs never acknowledge.
  AmfTraceRecord conclude(const WriteReplaceWarningRequest& req, std::span<const WriteReplaceResponse> responses);

  const std::vector<AmfTraceRecord>& trace_records() const { return records_; }

 private:
  std::string name_;
  std::vector<std::uint32_t> gnb_ids_;
  std::vector<AmfTraceRecord> records_;
};

class Cbcf {
 public:
  Cbcf(std::vector<Amf> amfs, std::optional<KeyPair> signing_key);

  /// AMFs covering any TAC of the area. When none do, every AMF is chosen so
  /// the unknown areas get reported back.
  std::vector<std::size_t> select_amfs(const WriteReplaceWarningRequest& req, std::span<const Gnb> gnbs) const;

  std::vector<Amf>& amfs() { return amfs_; }
  const std::vector<Amf>& amfs() const { return amfs_; }
  const std::optional<KeyPair>& signing_key() const { return signing_key_; }

 private:
  std::vector<Amf> amfs_;
  std::optional<KeyPair> signing_key_;
};

/// Builds the Write-Replace-Warning request for a CBE submission: the SIB is
/// built (and signed when the CBCF holds a key) and identifiers copied.
/// Throws Errc::EmptyArea for an empty area.
WriteReplaceWarningRequest cbe_submit(const Cbcf& cbcf, const WarningMessage& warning,
                                      std::span<const std::uint32_t> area, const ScheduleParams& params,
                                      std::uint16_t test_identifier = kDefaultTestIdentifier);

}  // namespace pws
