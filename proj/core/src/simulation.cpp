#include "pws/simulation.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>

#include "pws/adversary.hpp"
#include "pws/error.hpp"

namespace pws {

namespace {

enum Phase : int { kControl = 0, kNetwork = 1, kAdversary = 2, kUe = 3 };

struct Event {
  Tick tick;
  int phase;
  int order;
  std::uint64_t seq;
  std::function<void()> fn;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return std::tie(a.tick, a.phase, a.order, a.seq) > std::tie(b.tick, b.phase, b.order, b.seq);
  }
};

std::string hex_id(std::uint64_t v, int width) {
  std::ostringstream s;
  s << "0x" << std::hex << std::uppercase;
  s.width(width);
  s.fill('0');
  s << v;
  return s.str();
}

struct UeRun {
  UeConfig cfg;
  UeState st;
  bool powered = false;
  bool initial_applied = false;
  bool victim = false;
  bool attack_done = false;
  bool escaped = false;
  bool suppressed = false;
  bool barred_by_attack = false;
  bool no_service = false;
  int rogue = -1;
  Tick lure_start = 0;
  std::uint64_t check_gen = 0;
  std::uint64_t search_gen = 0;
  std::uint64_t attack_gen = 0;
  std::uint64_t recovery_gen = 0;
  std::map<int, bool> dominated;
  std::vector<std::string> displayed_digests;
};

struct RogueRun {
  RogueCell cell;
  bool active = false;
  std::vector<WarningSib> forged;
  int forged_broadcasts = 0;
};

struct View {
  CellView cell;
  std::vector<bool> forged;  // parallel to cell.scheduled
};

class Simulation {
 public:
  explicit Simulation(const ScenarioConfig& cfg);
  RunResult run();

 private:
  void push(Tick tick, int phase, int order, std::function<void()> fn);
  void record(std::string actor, std::string kind, OrderedJson payload = OrderedJson::object()) {
    trace_.record(now_, std::move(actor), std::move(kind), std::move(payload));
  }
  template <typename F>
  void with_state(std::size_t i, F&& f);

  const CellConfig& legit_cell(std::uint8_t cell_id) const;
  std::size_t gnb_of(std::uint8_t cell_id) const;
  std::string gnb_actor(std::size_t g) const { return "gnb-" + hex_id(gnbs_[g].id(), 5); }
  std::string rogue_actor(int r) const { return "rogue-" + hex_id(rogues_[r].cell.config.cell_id, 2); }

  // UE side
  void power_on(std::size_t i);
  void cell_search(std::size_t i);
  bool rogue_visible(std::size_t i, int r) const;
  bool dominates(std::size_t i, int r);
  void schedule_check(std::size_t i);
  void paging_check(std::size_t i);
  void schedule_retry(std::size_t i);
  void schedule_recovery(std::size_t i);
  void recover(std::size_t i, RecoveryEvent event);
  void camp_on(std::size_t i, const CellConfig& cell);

  // network side
  void submit(std::size_t k);
  void emit(std::size_t g, std::uint64_t schedule_id);
  View legit_view(std::uint8_t cell_id) const;
  View rogue_view(int r) const;

  // adversary side
  void start_attack();
  void stop_attack(const std::string& reason);
  void emit_forged(int r);
  void begin_lure(std::size_t i);
  void apply_step(std::size_t i, int r, const TranscriptStep& step);
  void attach_request(std::size_t i, int r);
  void disconnect(std::size_t i, const std::string& reason);
  void barring_end(std::size_t i, const std::string& reason);
  void check_victims_done();
  void trace_radio(std::size_t i, std::string_view layer, std::string_view message, Endpoint from, Endpoint to,
                   bool window_start = false);

  // scripted events
  void scenario_event(std::size_t k);
  void finish();

  const ScenarioConfig& cfg_;
  Rng rng_;
  Trace trace_;
  Tick now_ = 0;
  std::uint64_t seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;

  std::vector<Gnb> gnbs_;
  std::map<std::uint8_t, std::size_t> cell_gnb_;
  std::optional<Cbcf> cbcf_;
  WarningContext ctx_;
  std::optional<KeyPair> attacker_key_;
  std::set<std::string> legit_digests_;

  std::vector<UeRun> ues_;
  std::vector<RogueRun> rogues_;
  bool attack_active_ = false;
  std::optional<SpoofStream> stream_;
};

Simulation::Simulation(const ScenarioConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {
  validate(cfg_);
  for (const auto& g : cfg_.gnbs) {
    std::vector<CellConfig> cells;
    for (const auto& c : cfg_.cells) {
      if (c.gnb_id == g.gnb_id) {
        cells.push_back(c);
        cell_gnb_[c.cell_id] = gnbs_.size();
      }
    }
    gnbs_.emplace_back(g.gnb_id, std::move(cells), g.si_periodicity_frames);
  }
  std::vector<Amf> amfs;
  for (const auto& a : cfg_.amfs) amfs.emplace_back(a.name, a.gnbs);
  std::optional<KeyPair> network_key;
  if (cfg_.policy.plmn_signs) {
    network_key = KeyPair::from_seed(cfg_.keys.network_key_id, cfg_.keys.network_key_seed);
    attacker_key_ = KeyPair::from_seed(cfg_.keys.network_key_id, cfg_.keys.attacker_key_seed);
  }
  cbcf_.emplace(std::move(amfs), network_key);

  ctx_.policy = cfg_.policy;
  ctx_.test_identifier = cfg_.test_identifier;
  ctx_.public_key = KeyPair::from_seed(cfg_.keys.network_key_id, cfg_.policy.key_compatible
                                                                      ? cfg_.keys.network_key_seed
                                                                      : cfg_.keys.foreign_key_seed)
                        .public_key();

  for (const auto& u : cfg_.ues) {
    UeRun r;
    r.cfg = u;
    r.st.supi = u.supi;
    r.st.tmsi = u.tmsi;
    r.st.access_identity = u.access_identity;
    r.st.verifies_warnings = u.verifies_warnings;
    r.st.max_attach_attempts = u.max_attach_attempts;
    ues_.push_back(std::move(r));
  }
}

void Simulation::push(Tick tick, int phase, int order, std::function<void()> fn) {
  if (tick > cfg_.duration_ticks) return;
  queue_.push(Event{tick, phase, order, seq_++, std::move(fn)});
}

template <typename F>
void Simulation::with_state(std::size_t i, F&& f) {
  auto& u = ues_[i];
  const auto before = u.st.rrc_state();
  f();
  const auto after = u.st.rrc_state();
  if (before != after) {
    OrderedJson p;
    p["from"] = to_string(before);
    p["to"] = to_string(after);
    record(u.cfg.supi, "rrc_state", std::move(p));
  }
}

const CellConfig& Simulation::legit_cell(std::uint8_t cell_id) const {
  for (const auto& c : gnbs_[gnb_of(cell_id)].cells()) {
    if (c.cell_id == cell_id) return c;
  }
  throw Error(Errc::InvalidConfig, "unknown cell " + hex_id(cell_id, 2));
}

std::size_t Simulation::gnb_of(std::uint8_t cell_id) const {
  auto it = cell_gnb_.find(cell_id);
  if (it == cell_gnb_.end()) throw Error(Errc::InvalidConfig, "unknown cell " + hex_id(cell_id, 2));
  return it->second;
}

RunResult Simulation::run() {
  {
    OrderedJson p;
    p["scenario"] = cfg_.name;
    p["seed"] = cfg_.seed;
    p["mode"] = cfg_.mode == SuccessMode::Deterministic ? "Deterministic" : "Stochastic";
    p["duration_ticks"] = cfg_.duration_ticks;
    p["policy"] = {{"plmn_signs", cfg_.policy.plmn_signs},
                   {"ue_verifies", cfg_.policy.ue_verifies},
                   {"key_compatible", cfg_.policy.key_compatible}};
    record("harness", "run_start", std::move(p));
  }
  for (std::size_t i = 0; i < ues_.size(); ++i) {
    push(ues_[i].cfg.power_on_tick, kControl, static_cast<int>(i), [this, i] { power_on(i); });
  }
  for (std::size_t k = 0; k < cfg_.warnings.size(); ++k) {
    push(cfg_.warnings[k].at_tick, kControl, 10000 + static_cast<int>(k), [this, k] { submit(k); });
  }
  for (std::size_t k = 0; k < cfg_.events.size(); ++k) {
    push(cfg_.events[k].at_tick, kControl, 20000 + static_cast<int>(k), [this, k] { scenario_event(k); });
  }
  if (cfg_.attack) {
    push(cfg_.attack->start_tick, kAdversary, 0, [this] { start_attack(); });
    if (cfg_.attack->stop_tick) push(*cfg_.attack->stop_tick, kControl, 30000, [this] { stop_attack("stop_tick"); });
  }
  while (!queue_.empty()) {
    Event e = queue_.top();
    queue_.pop();
    now_ = e.tick;
    e.fn();
  }
  now_ = std::max(now_, cfg_.duration_ticks);
  finish();
  RunResult result;
  result.metrics = measure_durations(trace_);
  result.trace = std::move(trace_);
  return result;
}

// ---------------------------------------------------------------------------
// UE side

void Simulation::power_on(std::size_t i) {
  auto& u = ues_[i];
  if (u.powered) return;
  u.powered = true;
  record(u.cfg.supi, "ue_power_on", {{"tmsi", u.cfg.tmsi}, {"access_identity", u.cfg.access_identity}});
  with_state(i, [&] { u.st.power_cycle(); });
  cell_search(i);
}

bool Simulation::rogue_visible(std::size_t i, int r) const {
  const auto& u = ues_[i];
  return rogues_[r].active && !u.escaped && u.victim;
}

bool Simulation::dominates(std::size_t i, int r) {
  auto& u = ues_[i];
  auto it = u.dominated.find(r);
  if (it != u.dominated.end()) return it->second;
  const auto& rogue = rogues_[r].cell;
  const double delta = gain_delta(rogue.config.gain_db, legit_cell(rogue.cloned_from).gain_db);
  const bool ok = attack_success(delta, cfg_.mode, rng_, cfg_.barring_rule);
  u.dominated.emplace(r, ok);
  return ok;
}

void Simulation::camp_on(std::size_t i, const CellConfig& cell) {
  auto& u = ues_[i];
  u.st.camp(cell.cell_id);
  u.rogue = -1;
  u.no_service = false;
  u.st.ims_emergency_available = cell.sib1.ims_emergency_support;
  record(u.cfg.supi, "camp", {{"cell", cell.cell_id}, {"source", "network"}, {"gain_db", cell.gain_db}});
  if (u.suppressed) {
    u.suppressed = false;
    u.barred_by_attack = false;
    record(u.cfg.supi, "reconnected", {{"cell", cell.cell_id}});
  }
  if (!u.initial_applied) {
    u.initial_applied = true;
    if (u.cfg.initial_state == RrcState::Connected || u.cfg.initial_state == RrcState::Inactive) {
      with_state(i, [&] { u.st.connect(cell.cell_id); });
    }
    if (u.cfg.initial_state == RrcState::Inactive) with_state(i, [&] { u.st.suspend(); });
  }
  schedule_check(i);
}

void Simulation::cell_search(std::size_t i) {
  auto& u = ues_[i];
  if (u.st.rrc_state() != RrcState::Idle || u.st.camped_cell()) return;

  struct Candidate {
    const CellConfig* cell;
    int rogue;
  };
  std::vector<Candidate> candidates;
  for (const auto& g : gnbs_) {
    for (const auto& c : g.cells()) {
      Candidate cand{&c, -1};
      for (int r = 0; r < static_cast<int>(rogues_.size()); ++r) {
        if (cfg_.attack->variant != AttackVariant::Barring) break;
        if (rogues_[r].cell.cloned_from == c.cell_id && rogue_visible(i, r) && dominates(i, r)) {
          cand = {&rogues_[r].cell.config, r};
          break;
        }
      }
      candidates.push_back(cand);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return ranks_before(*a.cell, *b.cell); });

  std::set<std::string> excluded_bands;
  for (const auto& cand : candidates) {
    const auto& cell = *cand.cell;
    if (excluded_bands.contains(cell.frequency_band)) continue;
    const char* source = cand.rogue >= 0 ? "rogue" : "network";
    const auto stored = ue_store_mib(u.st, cell.cell_id, cell.mib, now_, cfg_.timings.mib_recheck_interval_ms);
    const Mib mib = u.st.mib_cache.at(cell.cell_id).mib;
    {
      OrderedJson p;
      p["cell"] = cell.cell_id;
      p["source"] = source;
      p["result"] = to_string(stored);
      p["broadcast_barred"] = cell.mib.cell_barred == CellBarred::Barred;
      p["cached_barred"] = mib.cell_barred == CellBarred::Barred;
      record(u.cfg.supi, "mib_store", std::move(p));
    }
    const auto decision = barring_decision(mib, cell.sib1, u.st.access_identity);
    {
      OrderedJson p;
      p["cell"] = cell.cell_id;
      p["source"] = source;
      p["decision"] = to_string(decision);
      p["from_cache"] = stored == MibStoreResult::Ignored;
      record(u.cfg.supi, "access_decision", std::move(p));
    }
    if (is_barred(decision)) {
      if (cand.rogue >= 0 || mib != legit_cell(cell.cell_id).mib) u.barred_by_attack = true;
      if (decision == AccessDecision::BarredNoIntraFreqReselection) excluded_bands.insert(cell.frequency_band);
      continue;
    }
    if (cand.rogue >= 0) continue;  // a rogue that is not barring never offers service here
    camp_on(i, cell);
    return;
  }
  u.no_service = true;
  u.st.ims_emergency_available = false;
  if (u.barred_by_attack) u.suppressed = true;
  record(u.cfg.supi, "no_service");
  schedule_retry(i);
}

void Simulation::schedule_retry(std::size_t i) {
  auto& u = ues_[i];
  const auto gen = ++u.search_gen;
  push(now_ + cfg_.timings.cell_search_retry_ms, kUe, static_cast<int>(i), [this, i, gen] {
    if (ues_[i].search_gen == gen) cell_search(i);
  });
}

void Simulation::schedule_check(std::size_t i) {
  auto& u = ues_[i];
  const auto gen = ++u.check_gen;
  const auto next = next_paging_check(u.st, now_, cfg_.drx);
  if (!next) return;
  push(*next, kUe, static_cast<int>(i), [this, i, gen] {
    if (ues_[i].check_gen != gen) return;
    paging_check(i);
    schedule_check(i);
  });
}

void Simulation::paging_check(std::size_t i) {
  auto& u = ues_[i];
  const auto cell = u.st.serving_cell() ? u.st.serving_cell() : u.st.camped_cell();
  if (!cell) return;
  const View view = u.rogue >= 0 ? rogue_view(u.rogue) : legit_view(*cell);
  const auto res = ue_tick(u.st, now_, view.cell, cfg_.drx);
  if (!res.paging) return;
  const char* source = u.rogue >= 0 ? "rogue" : "network";
  {
    OrderedJson p;
    p["cell"] = *cell;
    p["source"] = source;
    p["p_rnti"] = PagingMessage::p_rnti();
    p["record"] = to_hex(serialize(*res.paging));
    record(u.cfg.supi, "ue_paging", std::move(p));
  }
  for (auto idx : res.read) {
    const auto& sib = view.cell.scheduled[idx];
    const auto& m = sib.message;
    const bool seen = std::any_of(u.st.received_warnings.begin(), u.st.received_warnings.end(), [&](const auto& w) {
      return w.message_identifier == m.message_identifier && w.serial_number == m.serial_number;
    });
    if (seen) continue;
    const auto outcome = ue_receive_warning(u.st, sib, now_, ctx_);
    const auto digest = sib_digest(sib);
    if (outcome == WarningOutcome::Displayed) u.displayed_digests.push_back(digest);
    OrderedJson p;
    p["cell"] = *cell;
    p["source"] = source;
    p["origin"] = view.forged[idx] ? "forged" : "network";
    p["message_identifier"] = hex_id(m.message_identifier, 4);
    p["serial_number"] = hex_id(m.serial_number, 4);
    p["kind"] = to_string(classify_message_identifier(m.message_identifier, cfg_.test_identifier));
    p["sib"] = static_cast<int>(sib.sib_kind);
    p["signed"] = sib.signature.has_value();
    p["outcome"] = to_string(outcome);
    p["digest"] = digest;
    record(u.cfg.supi, "warning_rx", std::move(p));
  }
}

void Simulation::schedule_recovery(std::size_t i) {
  if (!cfg_.timings.auto_recovery) return;
  auto& u = ues_[i];
  const auto gen = ++u.recovery_gen;
  push(now_ + cfg_.timings.t_rec_supi_ms, kControl, static_cast<int>(i), [this, i, gen] {
    if (ues_[i].recovery_gen == gen) recover(i, RecoveryEvent::AirplaneToggle);
  });
}

void Simulation::recover(std::size_t i, RecoveryEvent event) {
  auto& u = ues_[i];
  if (!u.powered) return;
  if (u.rogue >= 0) disconnect(i, event == RecoveryEvent::Reboot ? "reboot" : "airplane_toggle");
  ++u.recovery_gen;
  ++u.search_gen;
  record(u.cfg.supi, "recovery", {{"event", to_string(event)}});
  with_state(i, [&] {
    if (u.st.rrc_state() != RrcState::Deregistered) u.st.deregister();
  });
  with_state(i, [&] { ue_recover(u.st, event); });
  u.rogue = -1;
  u.no_service = false;
  u.st.ims_emergency_available = false;
  schedule_check(i);
  const auto gen = u.search_gen;
  push(now_ + cfg_.timings.t_rach_ran_ms, kUe, static_cast<int>(i), [this, i, gen] {
    if (ues_[i].search_gen == gen) cell_search(i);
  });
}

// ---------------------------------------------------------------------------
// Network side

void Simulation::submit(std::size_t k) {
  const auto& w = cfg_.warnings[k];
  std::vector<std::uint32_t> area = w.area;
  if (area.empty()) {
    std::set<std::uint32_t> all;
    for (const auto& c : cfg_.cells) all.insert(c.tac);
    area.assign(all.begin(), all.end());
  }
  auto req = cbe_submit(*cbcf_, w.message, area, w.params, cfg_.test_identifier);
  req.global_ran_node_id = w.global_ran_node_id;
  legit_digests_.insert(sib_digest(req.warning_sib));
  {
    OrderedJson p;
    p["message_identifier"] = hex_id(req.message_identifier, 4);
    p["serial_number"] = hex_id(req.serial_number, 4);
    p["area"] = req.warning_area_list;
    p["sib"] = static_cast<int>(req.warning_sib.sib_kind);
    p["pages"] = req.warning_sib.pages.size();
    p["signed"] = req.warning_sib.signature.has_value();
    p["digest"] = sib_digest(req.warning_sib);
    record("cbc", "cbe_submit", std::move(p));
  }
  for (auto a : cbcf_->select_amfs(req, gnbs_)) {
    auto& amf = cbcf_->amfs()[a];
    const auto fwd = amf.forward(req, gnbs_);
    record(amf.name(), "amf_confirm",
           {{"message_identifier", hex_id(req.message_identifier, 4)},
            {"serial_number", hex_id(req.serial_number, 4)},
            {"unknown_tacs", fwd.confirm.unknown_tacs}});
    std::vector<WriteReplaceResponse> responses;
    for (auto g : fwd.targets) {
      const auto res = gnbs_[g].write_replace(req, now_);
      {
        OrderedJson p;
        p["amf"] = amf.name();
        p["message_identifier"] = hex_id(req.message_identifier, 4);
        p["serial_number"] = hex_id(req.serial_number, 4);
        p["duplicate"] = res.response.duplicate;
        p["cells"] = res.response.broadcast_cells;
        record(gnb_actor(g), "gnb_response", std::move(p));
      }
      for (auto sid : res.replaced) {
        const auto* s = gnbs_[g].find_schedule(sid);
        record(gnb_actor(g), "schedule_replaced", {{"schedule", sid}, {"cell", s->cell_id}});
      }
      for (auto sid : res.started) {
        const auto* s = gnbs_[g].find_schedule(sid);
        OrderedJson p;
        p["schedule"] = sid;
        p["cell"] = s->cell_id;
        p["message_identifier"] = hex_id(req.message_identifier, 4);
        p["serial_number"] = hex_id(req.serial_number, 4);
        p["number_of_broadcasts"] = req.number_of_broadcasts;
        p["repetition_period_s"] = req.repetition_period_s;
        p["cwm"] = req.cwm_indicator;
        record(gnb_actor(g), "schedule_start", std::move(p));
        push(s->next_tick, kNetwork, static_cast<int>(g), [this, g, sid] { emit(g, sid); });
      }
      for (const auto& [cell, paging] : res.paging) {
        OrderedJson p;
        p["cell"] = cell;
        p["p_rnti"] = PagingMessage::p_rnti();
        p["pws"] = paging.short_message_pws_indication();
        p["record"] = to_hex(serialize(paging));
        record(gnb_actor(g), "paging", std::move(p));
      }
      responses.push_back(res.response);
    }
    const auto rec = amf.conclude(req, responses);
    record(amf.name(), "amf_trace",
           {{"message_identifier", hex_id(rec.message_identifier, 4)},
            {"serial_number", hex_id(rec.serial_number, 4)},
            {"outcome", to_string(rec.outcome)},
            {"responses", responses.size()},
            {"broadcast_completed_areas", rec.broadcast_completed_areas}});
  }
}

void Simulation::emit(std::size_t g, std::uint64_t schedule_id) {
  auto& gnb = gnbs_[g];
  if (!gnb.consume_broadcast(schedule_id)) return;
  const auto* s = gnb.find_schedule(schedule_id);
  OrderedJson p;
  p["cell"] = s->cell_id;
  p["origin"] = "network";
  p["schedule"] = schedule_id;
  p["message_identifier"] = hex_id(s->request.message_identifier, 4);
  p["serial_number"] = hex_id(s->request.serial_number, 4);
  p["sent"] = s->request.number_of_broadcasts - s->remaining_broadcasts;
  p["remaining"] = s->remaining_broadcasts;
  record(gnb_actor(g), "sib_emit", std::move(p));
  if (s->active()) push(s->next_tick, kNetwork, static_cast<int>(g), [this, g, schedule_id] { emit(g, schedule_id); });
}

View Simulation::legit_view(std::uint8_t cell_id) const {
  View v;
  bool idle = false;
  bool connected = false;
  for (const auto* s : gnbs_[gnb_of(cell_id)].active_on(cell_id)) {
    if (s->remaining_broadcasts == s->request.number_of_broadcasts || now_ < s->start_tick) continue;
    v.cell.scheduled.push_back(s->request.warning_sib);
    v.forged.push_back(false);
    if ((now_ - s->start_tick) % s->repetition_ticks() < cfg_.drx.cycle_length_ticks) idle = true;
    if (s->round_start(now_) > now_ - cfg_.drx.si_modification_period_ticks) connected = true;
  }
  v.cell.paging_for_idle = build_pws_paging(idle);
  v.cell.paging_for_connected = build_pws_paging(connected);
  return v;
}

View Simulation::rogue_view(int r) const {
  const auto& rogue = rogues_[r];
  const auto variant = cfg_.attack->variant;
  View v;
  if (!rogue.active) return v;
  if (variant == AttackVariant::SuppressDoSNonMitM) return v;
  if (variant == AttackVariant::SpoofNonMitM) {
    if (rogue.forged.empty()) return v;
    v.cell.paging_for_idle = build_pws_paging(true);
    v.cell.paging_for_connected = build_pws_paging(true);
    v.cell.scheduled = rogue.forged;
    v.forged.assign(rogue.forged.size(), true);
    return v;
  }

  // MitM: relay what the cloned cell broadcasts through mitm_step.
  const auto legit = legit_view(rogue.cell.cloned_from);
  std::vector<RadioMessage> downlink;
  downlink.push_back({Direction::Downlink, "RRC", "MIB", std::nullopt, std::nullopt});
  if (legit.cell.paging_for_idle) downlink.push_back({Direction::Downlink, "RRC", "Paging", legit.cell.paging_for_idle, {}});
  if (legit.cell.paging_for_connected) {
    downlink.push_back({Direction::Downlink, "RRC", "PagingModification", legit.cell.paging_for_connected, {}});
  }
  for (const auto& sib : legit.cell.scheduled) downlink.push_back({Direction::Downlink, "RRC", "SystemInformation", {}, sib});

  std::vector<RadioMessage> forged;
  const auto mode = variant == AttackVariant::SpoofMitM ? RelayMode::InjectWarnings : RelayMode::DropWarnings;
  if (mode == RelayMode::InjectWarnings && !rogue.forged.empty()) {
    forged.push_back({Direction::Downlink, "RRC", "Paging", build_pws_paging(true), {}});
    forged.push_back({Direction::Downlink, "RRC", "PagingModification", build_pws_paging(true), {}});
    for (const auto& sib : rogue.forged) forged.push_back({Direction::Downlink, "RRC", "SystemInformation", {}, sib});
  }
  std::vector<RadioMessage> out;
  for (std::size_t k = 0; k < downlink.size(); ++k) {
    auto step = mitm_step(downlink[k], mode, k == 0 ? std::span<const RadioMessage>(forged) : std::span<const RadioMessage>{});
    out.insert(out.end(), step.begin(), step.end());
  }
  for (const auto& m : out) {
    if (m.name == "Paging" && m.paging) v.cell.paging_for_idle = m.paging;
    if (m.name == "PagingModification" && m.paging) v.cell.paging_for_connected = m.paging;
    if (m.sib) {
      v.cell.scheduled.push_back(*m.sib);
      v.forged.push_back(std::find(rogue.forged.begin(), rogue.forged.end(), *m.sib) != rogue.forged.end());
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Adversary side

void Simulation::start_attack() {
  const auto& plan = *cfg_.attack;
  std::vector<std::uint8_t> targets = plan.targets;
  if (targets.empty()) targets.push_back(reconnaissance(cfg_.cells).cell_id);
  OrderedJson victims = OrderedJson::array();
  for (auto& u : ues_) {
    u.victim = plan.victims.empty() ||
               std::find(plan.victims.begin(), plan.victims.end(), u.cfg.supi) != plan.victims.end();
    if (u.victim) victims.push_back(u.cfg.supi);
  }
  attack_active_ = true;
  record("rogue", "attack_start", {{"variant", to_string(plan.variant)}, {"targets", targets}, {"victims", victims}});
  for (auto t : targets) {
    RogueRun r;
    r.cell = deploy_rogue(plan, legit_cell(t));
    r.active = true;
    rogues_.push_back(std::move(r));
    const int idx = static_cast<int>(rogues_.size()) - 1;
    const auto& c = rogues_[idx].cell.config;
    OrderedJson p;
    p["cell"] = c.cell_id;
    p["cloned_from"] = rogues_[idx].cell.cloned_from;
    p["n_id_cell"] = c.n_id_cell;
    p["gain_db"] = c.gain_db;
    p["cell_barred"] = to_string(c.mib.cell_barred);
    p["intra_freq_reselection"] = to_string(c.mib.intra_freq_reselection);
    p["cell_reserved_for_operator_use"] = to_string(c.sib1.cell_reserved_for_operator_use);
    p["cell_reselection_priority"] = c.sib2.cell_reselection_priority;
    record(rogue_actor(idx), "rogue_deployed", std::move(p));
  }
  if (is_spoofing(plan.variant)) {
    stream_.emplace(spoof_serials_and_ids(*plan.spoof_profile, plan.spoof_message_identifier,
                                          plan.spoof_serial_number, mix_seed(cfg_.seed ^ 0x5F00F5EEDULL)));
    for (int r = 0; r < static_cast<int>(rogues_.size()); ++r) emit_forged(r);
  }
  if (needs_attachment(plan.variant)) {
    for (std::size_t i = 0; i < ues_.size(); ++i) {
      if (ues_[i].victim) push(now_, kAdversary, 100 + static_cast<int>(i), [this, i] { begin_lure(i); });
    }
  }
}

void Simulation::stop_attack(const std::string& reason) {
  if (!attack_active_) return;
  attack_active_ = false;
  for (auto& r : rogues_) {
    r.active = false;
    r.forged.clear();
  }
  record("rogue", "attack_stop", {{"reason", reason}});
  for (std::size_t i = 0; i < ues_.size(); ++i) {
    auto& u = ues_[i];
    ++u.attack_gen;
    if (u.rogue >= 0) {
      disconnect(i, "attack_stop");
    } else if (u.no_service && u.barred_by_attack && !u.escaped) {
      barring_end(i, "attack_stop");
    }
  }
}

void Simulation::emit_forged(int r) {
  auto& rogue = rogues_[r];
  const auto& profile = *cfg_.attack->spoof_profile;
  if (!rogue.active) return;
  if (rogue.forged_broadcasts >= profile.number_of_broadcasts) {
    rogue.forged.clear();
    return;
  }
  ++rogue.forged_broadcasts;
  rogue.forged = forge_warnings(profile, *stream_, cfg_.attack->spoof_text,
                                attacker_key_ ? &*attacker_key_ : nullptr, cfg_.test_identifier);
  for (const auto& sib : rogue.forged) {
    OrderedJson p;
    p["cell"] = rogue.cell.config.cell_id;
    p["origin"] = "forged";
    p["message_identifier"] = hex_id(sib.message.message_identifier, 4);
    p["serial_number"] = hex_id(sib.message.serial_number, 4);
    p["sent"] = rogue.forged_broadcasts;
    p["remaining"] = profile.number_of_broadcasts - rogue.forged_broadcasts;
    record(rogue_actor(r), "sib_emit", std::move(p));
  }
  push(now_ + Tick{profile.si_periodicity_frames} * kTicksPerFrame, kAdversary, 1 + r, [this, r] { emit_forged(r); });
}

void Simulation::trace_radio(std::size_t i, std::string_view layer, std::string_view message, Endpoint from,
                             Endpoint to, bool window_start) {
  OrderedJson p;
  p["layer"] = layer;
  p["message"] = message;
  p["from"] = to_string(from);
  p["to"] = to_string(to);
  p["window_start"] = window_start;
  record(ues_[i].cfg.supi, "radio", std::move(p));
}

void Simulation::begin_lure(std::size_t i) {
  auto& u = ues_[i];
  const auto cell = u.st.serving_cell() ? u.st.serving_cell() : u.st.camped_cell();
  if (!attack_active_ || !u.powered || u.escaped || u.rogue >= 0 || !cell) {
    u.attack_done = true;
    record(u.cfg.supi, "lure_failed", {{"reason", "unreachable"}});
    check_victims_done();
    return;
  }
  int r = 0;
  for (int k = 0; k < static_cast<int>(rogues_.size()); ++k) {
    if (rogues_[k].cell.cloned_from == *cell) r = k;
  }
  const double delta = gain_delta(rogues_[r].cell.config.gain_db, legit_cell(*cell).gain_db);
  LureTranscript transcript;
  try {
    transcript = lure(u.st, delta, cfg_.mode, rng_,
                      {cfg_.timings.attach_overhead_ms, cfg_.timings.attach_retry_interval_ms},
                      cfg_.attachment_rule);
  } catch (const Error& e) {
    u.attack_done = true;
    record(u.cfg.supi, "lure_failed", {{"reason", to_string(e.code())}, {"delta_db", delta}});
    check_victims_done();
    return;
  }
  u.lure_start = now_;
  record(u.cfg.supi, "lure",
         {{"path", to_string(transcript.path)}, {"delta_db", delta}, {"rogue_cell", rogues_[r].cell.config.cell_id}});
  const auto gen = ++u.attack_gen;
  for (const auto& step : transcript.steps) {
    push(now_ + step.offset, kAdversary, 100 + static_cast<int>(i), [this, i, r, step, gen] {
      if (ues_[i].attack_gen == gen) apply_step(i, r, step);
    });
  }
}

void Simulation::apply_step(std::size_t i, int r, const TranscriptStep& step) {
  auto& u = ues_[i];
  trace_radio(i, step.layer, step.message, step.from, step.to, step.starts_attack_window);
  const auto rogue_cell = rogues_[r].cell.config.cell_id;
  with_state(i, [&] {
    switch (step.effect) {
      case LureEffect::None: break;
      case LureEffect::ReleaseInactive: u.st.resume_to_idle(); break;
      case LureEffect::CampOnRogue:
        u.st.camp(rogue_cell);
        u.rogue = r;
        u.st.ims_emergency_available = false;
        break;
      case LureEffect::HandoverToRogue:
        u.st.handover(rogue_cell);
        u.rogue = r;
        u.st.ims_emergency_available = false;
        break;
      case LureEffect::ConnectToRogue: u.st.connect(rogue_cell); break;
      case LureEffect::ReleaseToIdle: u.st.release_to_idle(); break;
    }
  });
  if (step.effect != LureEffect::None) schedule_check(i);
  if (step.message == "AttachRequest") attach_request(i, r);
}

void Simulation::attach_request(std::size_t i, int r) {
  auto& u = ues_[i];
  const auto& plan = *cfg_.attack;
  if (is_mitm(plan.variant)) {
    trace_radio(i, "NAS", "AttachRequest", Endpoint::Rogue, Endpoint::Amf);
    trace_radio(i, "NAS", "RegistrationAccept", Endpoint::Amf, Endpoint::Rogue);
    trace_radio(i, "NAS", "RegistrationAccept", Endpoint::Rogue, Endpoint::Ue);
    const auto gen = u.attack_gen;
    push(u.lure_start + plan.mitm_connection_lifetime_ms, kAdversary, 100 + static_cast<int>(i), [this, i, gen] {
      if (ues_[i].attack_gen == gen) disconnect(i, "connection_failure");
    });
    return;
  }
  trace_radio(i, "NAS", "AttachReject", Endpoint::Rogue, Endpoint::Ue);
  AttachRejectOutcome out;
  with_state(i, [&] { out = ue_handle_attach_reject(u.st, now_, cfg_.timings.attach_retry_interval_ms); });
  if (out.deregistered) {
    disconnect(i, "attach_rejected");
    return;
  }
  trace_radio(i, "RRC", "RRCRelease", Endpoint::Rogue, Endpoint::Ue);
  with_state(i, [&] { u.st.release_to_idle(); });
  schedule_check(i);
  const auto gen = u.attack_gen;
  push(*out.retry_at, kAdversary, 100 + static_cast<int>(i), [this, i, r, gen] {
    auto& v = ues_[i];
    if (v.attack_gen != gen) return;
    trace_radio(i, "RRC", "RRCSetupRequest", Endpoint::Ue, Endpoint::Rogue);
    trace_radio(i, "RRC", "RRCSetup", Endpoint::Rogue, Endpoint::Ue);
    with_state(i, [&] { v.st.connect(rogues_[r].cell.config.cell_id); });
    schedule_check(i);
    trace_radio(i, "NAS", "AttachRequest", Endpoint::Ue, Endpoint::Rogue);
    attach_request(i, r);
  });
}

void Simulation::disconnect(std::size_t i, const std::string& reason) {
  auto& u = ues_[i];
  ++u.attack_gen;
  record(u.cfg.supi, "disconnect", {{"reason", reason}});
  with_state(i, [&] {
    if (u.st.rrc_state() != RrcState::Deregistered) u.st.deregister();
  });
  u.rogue = -1;
  u.st.ims_emergency_available = false;
  u.suppressed = true;
  u.attack_done = true;
  schedule_check(i);
  schedule_recovery(i);
  check_victims_done();
}

void Simulation::barring_end(std::size_t i, const std::string& reason) {
  record(ues_[i].cfg.supi, "barring_end", {{"reason", reason}});
  schedule_recovery(i);
}

void Simulation::check_victims_done() {
  if (!attack_active_ || !needs_attachment(cfg_.attack->variant)) return;
  for (const auto& u : ues_) {
    if (u.victim && !u.attack_done) return;
  }
  stop_attack("victims_done");
}

// ---------------------------------------------------------------------------

void Simulation::scenario_event(std::size_t k) {
  const auto& e = cfg_.events[k];
  if (e.kind == ScenarioEventKind::StopWarning) {
    bool stopped = false;
    for (auto& g : gnbs_) stopped = g.stop_warning(e.message_identifier, e.serial_number) || stopped;
    record("cbc", "stop_warning",
           {{"message_identifier", hex_id(e.message_identifier, 4)},
            {"serial_number", hex_id(e.serial_number, 4)},
            {"stopped", stopped}});
    return;
  }
  std::size_t i = 0;
  while (ues_[i].cfg.supi != e.ue) ++i;
  auto& u = ues_[i];
  switch (e.kind) {
    case ScenarioEventKind::AirplaneToggle: recover(i, RecoveryEvent::AirplaneToggle); break;
    case ScenarioEventKind::Reboot: recover(i, RecoveryEvent::Reboot); break;
    case ScenarioEventKind::CoverageEscape:
      if (u.escaped) break;
      u.escaped = true;
      record(u.cfg.supi, "coverage_escape");
      if (u.rogue >= 0) {
        disconnect(i, "coverage_escape");
      } else if (attack_active_ && u.no_service && u.barred_by_attack) {
        barring_end(i, "coverage_escape");
      }
      break;
    case ScenarioEventKind::StopWarning: break;
  }
}

void Simulation::finish() {
  if (cfg_.enriched_reports) {
    for (auto& u : ues_) {
      if (!u.powered || u.st.rrc_state() == RrcState::Deregistered) continue;
      EnrichedMeasurementReport report;
      report.reporting_ue = u.cfg.supi;
      if (auto c = u.st.serving_cell() ? u.st.serving_cell() : u.st.camped_cell()) report.observed_cells.push_back(*c);
      report.warning_hashes = u.displayed_digests;
      const auto flagged = cross_check(report, legit_digests_);
      record(u.cfg.supi, "measurement_report",
             {{"observed_cells", report.observed_cells}, {"warning_hashes", report.warning_hashes.size()}});
      for (const auto& h : flagged) record("network", "spoof_detected", {{"ue", u.cfg.supi}, {"digest", h}});
    }
  }
  OrderedJson ues = OrderedJson::array();
  for (const auto& u : ues_) {
    OrderedJson s;
    s["supi"] = u.cfg.supi;
    s["state"] = to_string(u.st.rrc_state());
    const auto c = u.st.serving_cell() ? u.st.serving_cell() : u.st.camped_cell();
    s["cell"] = c ? OrderedJson(*c) : OrderedJson(nullptr);
    s["on_rogue"] = u.rogue >= 0;
    s["ims_emergency_available"] = u.st.ims_emergency_available;
    s["received"] = u.st.received_warnings.size();
    ues.push_back(std::move(s));
  }
  record("harness", "run_end", {{"ues", ues}});
}

}  // namespace

RunResult run(const ScenarioConfig& config) {
  Simulation sim(config);
  return sim.run();
}

}  // namespace pws
