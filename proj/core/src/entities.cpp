#include "pws/entities.hpp"

#include <algorithm>

#include "pws/error.hpp"

namespace pws {

std::string_view to_string(RrcState s) {
  switch (s) {
    case RrcState::Idle: return "Idle";
    case RrcState::Inactive: return "Inactive";
    case RrcState::Connected: return "Connected";
    case RrcState::Deregistered: return "Deregistered";
  }
  return "Unknown";
}

bool transition_allowed(RrcState from, RrcState to) noexcept {
  if (to == RrcState::Deregistered) return true;
  switch (from) {
    case RrcState::Idle: return to == RrcState::Connected;
    case RrcState::Connected: return to == RrcState::Idle || to == RrcState::Inactive;
    case RrcState::Inactive: return to == RrcState::Idle;
    case RrcState::Deregistered: return to == RrcState::Idle;
  }
  return false;
}

void validate(const DrxConfig& drx) {
  if (drx.cycle_length_ticks <= 0 || drx.si_modification_period_ticks <= 0) {
    throw Error(Errc::OutOfRange, "DRX cycle and SI modification period must be positive");
  }
}

// ---------------------------------------------------------------------------

void UeState::move_to(RrcState to) {
  if (!transition_allowed(rrc_state_, to)) {
    throw Error(Errc::IllegalTransition, "illegal RRC transition " + std::string(to_string(rrc_state_)) +
                                             " -> " + std::string(to_string(to)));
  }
  rrc_state_ = to;
}

void UeState::camp(std::uint8_t cell) {
  if (rrc_state_ != RrcState::Idle && rrc_state_ != RrcState::Inactive) {
    throw Error(Errc::IllegalTransition, "only Idle/Inactive UEs camp on a cell");
  }
  camped_cell_ = cell;
}

void UeState::connect(std::uint8_t cell) {
  move_to(RrcState::Connected);
  serving_cell_ = cell;
  camped_cell_.reset();
}

void UeState::handover(std::uint8_t cell) {
  if (rrc_state_ != RrcState::Connected) {
    throw Error(Errc::IllegalTransition, "handover requires a Connected UE");
  }
  serving_cell_ = cell;
}

void UeState::release_to_idle() {
  const auto cell = serving_cell_;
  move_to(RrcState::Idle);
  serving_cell_.reset();
  camped_cell_ = cell;
}

void UeState::suspend() {
  const auto cell = serving_cell_;
  move_to(RrcState::Inactive);
  serving_cell_.reset();
  camped_cell_ = cell;
}

void UeState::resume_to_idle() {
  if (rrc_state_ != RrcState::Inactive) {
    throw Error(Errc::IllegalTransition, "resume_to_idle requires an Inactive UE");
  }
  move_to(RrcState::Idle);
}

void UeState::deregister() {
  move_to(RrcState::Deregistered);
  serving_cell_.reset();
  camped_cell_.reset();
  ims_emergency_available = false;
}

void UeState::power_cycle() {
  if (rrc_state_ != RrcState::Deregistered) deregister();
  move_to(RrcState::Idle);
  attach_attempts = 0;
  mib_cache.clear();
}

bool UeState::has_displayed(std::uint16_t id, std::uint16_t serial) const {
  return std::any_of(received_warnings.begin(), received_warnings.end(), [&](const ReceivedWarning& w) {
    return w.displayed && w.message_identifier == id && w.serial_number == serial;
  });
}

// ---------------------------------------------------------------------------

Tick ue_paging_occasion(std::uint32_t tmsi, const DrxConfig& drx) {
  return static_cast<Tick>(tmsi) % drx.cycle_length_ticks;
}

bool is_paging_check(const UeState& ue, Tick tick, const DrxConfig& drx) {
  switch (ue.rrc_state()) {
    case RrcState::Idle:
    case RrcState::Inactive:
      return tick % drx.cycle_length_ticks == ue_paging_occasion(ue.tmsi, drx);
    case RrcState::Connected:
      return tick % drx.si_modification_period_ticks == 0;
    case RrcState::Deregistered:
      return false;
  }
  return false;
}

std::optional<Tick> next_paging_check(const UeState& ue, Tick after, const DrxConfig& drx) {
  auto next_multiple = [after](Tick period, Tick offset) {
    // smallest t > after with t % period == offset
    Tick base = after - offset;
    Tick k = base >= 0 ? base / period + 1 : 0;
    Tick t = k * period + offset;
    while (t <= after) t += period;
    return t;
  };
  switch (ue.rrc_state()) {
    case RrcState::Idle:
    case RrcState::Inactive:
      return next_multiple(drx.cycle_length_ticks, ue_paging_occasion(ue.tmsi, drx));
    case RrcState::Connected:
      return next_multiple(drx.si_modification_period_ticks, 0);
    case RrcState::Deregistered:
      return std::nullopt;
  }
  return std::nullopt;
}

UeTickResult ue_tick(const UeState& ue, Tick tick, const CellView& view, const DrxConfig& drx) {
  UeTickResult result;
  if (!is_paging_check(ue, tick, drx)) return result;
  const auto& paging = ue.rrc_state() == RrcState::Connected ? view.paging_for_connected : view.paging_for_idle;
  if (!paging || !paging->short_message_pws_indication()) return result;
  result.paging = paging;
  for (std::size_t i = 0; i < view.scheduled.size(); ++i) {
    const auto& m = view.scheduled[i].message;
    if (!ue.has_displayed(m.message_identifier, m.serial_number)) result.read.push_back(i);
  }
  return result;
}

std::string_view to_string(WarningOutcome o) {
  switch (o) {
    case WarningOutcome::Displayed: return "Displayed";
    case WarningOutcome::Discarded: return "Discarded";
    case WarningOutcome::Rejected: return "Rejected";
  }
  return "Unknown";
}

WarningOutcome ue_receive_warning(UeState& ue, const WarningSib& sib, Tick tick, const WarningContext& ctx) {
  WarningOutcome outcome = WarningOutcome::Displayed;
  const auto& m = sib.message;
  if (classify_message_identifier(m.message_identifier, ctx.test_identifier) == WarningKind::Test) {
    outcome = WarningOutcome::Discarded;
  } else {
    VerificationPolicy policy = ctx.policy;
    policy.ue_verifies = ue.verifies_warnings;
    if (ue_accept(policy, sib, sib.signature, ctx.public_key) == Acceptance::Reject) {
      outcome = WarningOutcome::Rejected;
    }
  }
  ue.received_warnings.push_back(
      {tick, m.message_identifier, m.serial_number, outcome == WarningOutcome::Displayed});
  return outcome;
}

AttachRejectOutcome ue_handle_attach_reject(UeState& ue, Tick tick, Tick retry_interval) {
  AttachRejectOutcome out;
  ue.attach_attempts = std::min(ue.attach_attempts + 1, ue.max_attach_attempts);
  if (ue.attach_attempts >= ue.max_attach_attempts) {
    ue.deregister();
    out.deregistered = true;
  } else {
    out.retry_at = tick + retry_interval;
  }
  return out;
}

std::string_view to_string(RecoveryEvent e) {
  return e == RecoveryEvent::AirplaneToggle ? "AirplaneToggle" : "Reboot";
}

void ue_recover(UeState& ue, RecoveryEvent) { ue.power_cycle(); }

std::string_view to_string(MibStoreResult r) {
  switch (r) {
    case MibStoreResult::Stored: return "Stored";
    case MibStoreResult::Ignored: return "Ignored";
    case MibStoreResult::Refreshed: return "Refreshed";
  }
  return "Unknown";
}

MibStoreResult ue_store_mib(UeState& ue, std::uint8_t cell_id, const Mib& mib, Tick tick, Tick recheck_interval) {
  auto it = ue.mib_cache.find(cell_id);
  if (it == ue.mib_cache.end()) {
    ue.mib_cache.emplace(cell_id, MibCacheEntry{mib, tick});
    return MibStoreResult::Stored;
  }
  if (tick - it->second.stored_at < recheck_interval) return MibStoreResult::Ignored;
  it->second = MibCacheEntry{mib, tick};
  return MibStoreResult::Refreshed;
}

std::optional<Mib> cached_mib(const UeState& ue, std::uint8_t cell_id, Tick tick, Tick recheck_interval) {
  auto it = ue.mib_cache.find(cell_id);
  if (it == ue.mib_cache.end() || tick - it->second.stored_at >= recheck_interval) return std::nullopt;
  return it->second.mib;
}

// ---------------------------------------------------------------------------

void validate(const WriteReplaceWarningRequest& req) {
  if (req.number_of_broadcasts < 1 || req.number_of_broadcasts > kMaxNumberOfBroadcasts) {
    throw Error(Errc::OutOfRange, "number_of_broadcasts must be within [1, 65535]");
  }
  if (req.repetition_period_s < 1 || req.repetition_period_s > kMaxRepetitionPeriod) {
    throw Error(Errc::OutOfRange, "repetition_period must be within [1, 131071]");
  }
}

Tick BroadcastSchedule::round_start(Tick tick) const {
  const Tick rep = repetition_ticks();
  if (tick <= start_tick) return start_tick;
  return start_tick + ((tick - start_tick) / rep) * rep;
}

Gnb::Gnb(std::uint32_t gnb_id, std::vector<CellConfig> cells, int si_periodicity_frames)
    : id_(gnb_id), cells_(std::move(cells)), si_periodicity_frames_(si_periodicity_frames) {
  if (si_periodicity_frames_ <= 0) throw Error(Errc::OutOfRange, "SI periodicity must be positive");
}

std::set<std::uint32_t> Gnb::tacs() const {
  std::set<std::uint32_t> out;
  for (const auto& c : cells_) out.insert(c.tac);
  return out;
}

WriteReplaceResult Gnb::write_replace(const WriteReplaceWarningRequest& req, Tick now) {
  validate(req);
  WriteReplaceResult result;
  auto& resp = result.response;
  resp.gnb_id = id_;
  resp.message_identifier = req.message_identifier;
  resp.serial_number = req.serial_number;

  std::vector<const CellConfig*> affected;
  for (const auto& c : cells_) {
    const bool in_area = req.warning_area_list.empty() ||
                         std::find(req.warning_area_list.begin(), req.warning_area_list.end(), c.tac) !=
                             req.warning_area_list.end();
    if (in_area) affected.push_back(&c);
  }
  for (const auto* c : affected) {
    resp.broadcast_cells.push_back(c->cell_id);
    if (std::find(resp.completed_tacs.begin(), resp.completed_tacs.end(), c->tac) == resp.completed_tacs.end()) {
      resp.completed_tacs.push_back(c->tac);
    }
  }
  std::sort(resp.completed_tacs.begin(), resp.completed_tacs.end());

  if (!seen_.emplace(req.message_identifier, req.serial_number).second) {
    resp.duplicate = true;
    return result;
  }

  for (const auto* c : affected) {
    if (!req.cwm_indicator) {
      for (auto& s : schedules_) {
        if (s.cell_id == c->cell_id && s.active()) {
          s.stopped = true;
          result.replaced.push_back(s.id);
        }
      }
    }
    BroadcastSchedule s;
    s.id = next_schedule_id_++;
    s.request = req;
    s.cell_id = c->cell_id;
    s.remaining_broadcasts = req.number_of_broadcasts;
    s.start_tick = now;
    s.next_tick = now;
    s.si_periodicity_frames = si_periodicity_frames_;
    schedules_.push_back(std::move(s));
    result.started.push_back(schedules_.back().id);
    result.paging.emplace_back(c->cell_id, *build_pws_paging(true));
  }
  return result;
}

bool Gnb::stop_warning(std::uint16_t id, std::uint16_t serial) {
  bool any = false;
  for (auto& s : schedules_) {
    if (s.request.message_identifier == id && s.request.serial_number == serial && s.active()) {
      s.stopped = true;
      any = true;
    }
  }
  return any;
}

bool Gnb::consume_broadcast(std::uint64_t schedule_id) {
  for (auto& s : schedules_) {
    if (s.id != schedule_id) continue;
    if (!s.active()) return false;
    --s.remaining_broadcasts;
    s.next_tick += s.si_period_ticks();
    return true;
  }
  return false;
}

const BroadcastSchedule* Gnb::find_schedule(std::uint64_t schedule_id) const {
  for (const auto& s : schedules_) {
    if (s.id == schedule_id) return &s;
  }
  return nullptr;
}

std::vector<const BroadcastSchedule*> Gnb::active_on(std::uint8_t cell_id) const {
  std::vector<const BroadcastSchedule*> out;
  for (const auto& s : schedules_) {
    if (s.cell_id == cell_id && s.active()) out.push_back(&s);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(TraceOutcome o) { return o == TraceOutcome::Completed ? "Completed" : "Failed"; }

Amf::Amf(std::string name, std::vector<std::uint32_t> gnb_ids) : name_(std::move(name)), gnb_ids_(std::move(gnb_ids)) {}

bool Amf::serves(std::uint32_t gnb_id) const {
  return std::find(gnb_ids_.begin(), gnb_ids_.end(), gnb_id) != gnb_ids_.end();
}

std::set<std::uint32_t> Amf::tacs(std::span<const Gnb> gnbs) const {
  std::set<std::uint32_t> out;
  for (const auto& g : gnbs) {
    if (!serves(g.id())) continue;
    auto t = g.tacs();
    out.insert(t.begin(), t.end());
  }
  return out;
}

AmfForwardResult Amf::forward(const WriteReplaceWarningRequest& req, std::span<const Gnb> gnbs) const {
  AmfForwardResult out;
  out.confirm.message_identifier = req.message_identifier;
  out.confirm.serial_number = req.serial_number;
  const auto known = tacs(gnbs);
  for (auto tac : req.warning_area_list) {
    if (!known.contains(tac)) out.confirm.unknown_tacs.push_back(tac);
  }
  for (std::size_t i = 0; i < gnbs.size(); ++i) {
    const auto& g = gnbs[i];
    if (!serves(g.id())) continue;
    if (req.global_ran_node_id) {
      if (g.id() == *req.global_ran_node_id) out.targets.push_back(i);
      continue;
    }
    if (req.warning_area_list.empty()) {
      out.targets.push_back(i);
      continue;
    }
    const auto gt = g.tacs();
    if (std::any_of(req.warning_area_list.begin(), req.warning_area_list.end(),
                    [&](std::uint32_t tac) { return gt.contains(tac); })) {
      out.targets.push_back(i);
    }
  }
  return out;
}

AmfTraceRecord Amf::conclude(const WriteReplaceWarningRequest& req, std::span<const WriteReplaceResponse> responses) {
  AmfTraceRecord rec;
  rec.message_identifier = req.message_identifier;
  rec.serial_number = req.serial_number;
  rec.outcome = responses.empty() ? TraceOutcome::Failed : TraceOutcome::Completed;
  std::set<std::uint32_t> areas;
  for (const auto& r : responses) areas.insert(r.completed_tacs.begin(), r.completed_tacs.end());
  rec.broadcast_completed_areas.assign(areas.begin(), areas.end());
  records_.push_back(rec);
  return rec;
}

Cbcf::Cbcf(std::vector<Amf> amfs, std::optional<KeyPair> signing_key)
    : amfs_(std::move(amfs)), signing_key_(std::move(signing_key)) {}

std::vector<std::size_t> Cbcf::select_amfs(const WriteReplaceWarningRequest& req, std::span<const Gnb> gnbs) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < amfs_.size(); ++i) {
    const auto t = amfs_[i].tacs(gnbs);
    if (req.warning_area_list.empty() ||
        std::any_of(req.warning_area_list.begin(), req.warning_area_list.end(),
                    [&](std::uint32_t tac) { return t.contains(tac); })) {
      out.push_back(i);
    }
  }
  if (out.empty()) {
    for (std::size_t i = 0; i < amfs_.size(); ++i) out.push_back(i);
  }
  return out;
}

WriteReplaceWarningRequest cbe_submit(const Cbcf& cbcf, const WarningMessage& warning,
                                      std::span<const std::uint32_t> area, const ScheduleParams& params,
                                      std::uint16_t test_identifier) {
  if (area.empty()) throw Error(Errc::EmptyArea, "warning area must list at least one TAC");
  WriteReplaceWarningRequest req;
  req.message_identifier = warning.message_identifier;
  req.serial_number = warning.serial_number;
  req.warning_area_list.assign(area.begin(), area.end());
  req.repetition_period_s = params.repetition_period_s;
  req.number_of_broadcasts = params.number_of_broadcasts;
  req.cwm_indicator = params.cwm_indicator;
  req.warning_sib = build_warning_sib(warning, params.part, test_identifier);
  if (cbcf.signing_key()) req.warning_sib.signature = sign_sib(*cbcf.signing_key(), req.warning_sib);
  validate(req);
  return req;
}

}  // namespace pws
