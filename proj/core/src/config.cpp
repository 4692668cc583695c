#include "pws/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "pws/error.hpp"

namespace pws {

using nlohmann::json;

std::string_view to_string(ScenarioEventKind k) {
  switch (k) {
    case ScenarioEventKind::AirplaneToggle: return "airplane_toggle";
    case ScenarioEventKind::Reboot: return "reboot";
    case ScenarioEventKind::CoverageEscape: return "coverage_escape";
    case ScenarioEventKind::StopWarning: return "stop_warning";
  }
  return "unknown";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(Errc::InvalidConfig, path + ": " + what);
}

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string at_index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void require_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
}

// Integers may be given as JSON numbers or "0x..." strings.
std::int64_t as_int(const json& j, const std::string& path, std::int64_t lo, std::int64_t hi) {
  std::int64_t v = 0;
  if (j.is_number_integer()) {
    v = j.get<std::int64_t>();
  } else if (j.is_number_unsigned()) {
    const auto u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX)) fail(path, "integer out of range");
    v = static_cast<std::int64_t>(u);
  } else if (j.is_string()) {
    const auto s = j.get<std::string>();
    int base = 10;
    std::string_view digits = s;
    if (digits.starts_with("0x") || digits.starts_with("0X")) {
      base = 16;
      digits.remove_prefix(2);
    }
    const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
    if (digits.empty() || ec != std::errc() || p != digits.data() + digits.size()) {
      fail(path, "expected an integer, got \"" + s + "\"");
    }
  } else {
    fail(path, "expected an integer");
  }
  if (v < lo || v > hi) fail(path, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                                        std::to_string(hi) + "]");
  return v;
}

std::uint64_t as_u64(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) fail(path, "expected a non-negative integer");
    return j.get<std::uint64_t>();
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    std::string_view digits = s;
    int base = 10;
    if (digits.starts_with("0x") || digits.starts_with("0X")) {
      base = 16;
      digits.remove_prefix(2);
    }
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v, base);
    if (digits.empty() || ec != std::errc() || p != digits.data() + digits.size()) fail(path, "expected an integer");
    return v;
  }
  fail(path, "expected an integer");
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

// Reads optional members of an object, tracking unknown keys.
class Fields {
 public:
  Fields(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) { require_object(obj_, path_); }

  const json* find(std::string_view key) {
    seen_.insert(std::string(key));
    auto it = obj_.find(std::string(key));
    return it == obj_.end() ? nullptr : &*it;
  }
  std::string path(std::string_view key) const { return join(path_, key); }

  template <typename T>
  void integer(std::string_view key, T& out, std::int64_t lo, std::int64_t hi) {
    if (const auto* j = find(key)) out = static_cast<T>(as_int(*j, path(key), lo, hi));
  }
  void boolean(std::string_view key, bool& out) {
    if (const auto* j = find(key)) out = as_bool(*j, path(key));
  }
  void number(std::string_view key, double& out) {
    if (const auto* j = find(key)) out = as_double(*j, path(key));
  }
  void string(std::string_view key, std::string& out) {
    if (const auto* j = find(key)) out = as_string(*j, path(key));
  }
  const json& required(std::string_view key) {
    const auto* j = find(key);
    if (!j) fail(path_, "missing field \"" + std::string(key) + "\"");
    return *j;
  }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.contains(it.key())) fail(join(path_, it.key()), "unknown field");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

constexpr std::int64_t kTickMax = std::int64_t{1} << 40;

template <typename Enum, std::size_t N>
Enum as_enum(const json& j, const std::string& path, const std::array<std::pair<std::string_view, Enum>, N>& names) {
  const auto s = as_string(j, path);
  for (const auto& [name, value] : names) {
    if (name == s) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : names) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
  fail(path, "unknown value \"" + s + "\" (expected one of " + allowed + ")");
}

RrcState parse_rrc_state(const json& j, const std::string& path) {
  static constexpr std::array<std::pair<std::string_view, RrcState>, 3> names{
      {{"Idle", RrcState::Idle}, {"Inactive", RrcState::Inactive}, {"Connected", RrcState::Connected}}};
  return as_enum(j, path, names);
}

std::vector<std::uint32_t> parse_u32_list(const json& j, const std::string& path) {
  require_array(j, path);
  std::vector<std::uint32_t> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(static_cast<std::uint32_t>(as_int(j[i], at_index(path, i), 0, UINT32_MAX)));
  }
  return out;
}

CellConfig parse_cell(const json& j, const std::string& path) {
  Fields f(j, path);
  CellConfig c;
  c.cell_id = static_cast<std::uint8_t>(as_int(f.required("cell_id"), f.path("cell_id"), 0, 255));
  f.integer("gnb_id", c.gnb_id, 0, UINT32_MAX);
  f.string("plmn", c.plmn);
  f.integer("tac", c.tac, 0, UINT32_MAX);
  f.integer("n_id_cell", c.n_id_cell, 0, 1007);
  f.string("frequency_band", c.frequency_band);
  f.number("gain_db", c.gain_db);
  f.boolean("legitimate", c.legitimate);
  if (const auto* m = f.find("mib")) {
    Fields mf(*m, f.path("mib"));
    bool barred = c.mib.cell_barred == CellBarred::Barred;
    bool intra = c.mib.intra_freq_reselection == IntraFreqReselection::Allowed;
    mf.boolean("cell_barred", barred);
    mf.boolean("intra_freq_reselection_allowed", intra);
    mf.finish();
    c.mib.cell_barred = barred ? CellBarred::Barred : CellBarred::NotBarred;
    c.mib.intra_freq_reselection = intra ? IntraFreqReselection::Allowed : IntraFreqReselection::NotAllowed;
  }
  if (const auto* s = f.find("sib1")) {
    Fields sf(*s, f.path("sib1"));
    bool reserved = c.sib1.cell_reserved_for_operator_use == CellReservation::Reserved;
    sf.boolean("cell_reserved_for_operator_use", reserved);
    sf.boolean("ims_emergency_support", c.sib1.ims_emergency_support);
    sf.finish();
    c.sib1.cell_reserved_for_operator_use = reserved ? CellReservation::Reserved : CellReservation::NotReserved;
  }
  f.integer("cell_reselection_priority", c.sib2.cell_reselection_priority, 0, 7);
  f.finish();
  try {
    validate(c);
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return c;
}

UeConfig parse_ue(const json& j, const std::string& path, bool verifies_by_default) {
  Fields f(j, path);
  UeConfig u;
  u.verifies_warnings = verifies_by_default;
  u.supi = as_string(f.required("supi"), f.path("supi"));
  f.integer("tmsi", u.tmsi, 0, UINT32_MAX);
  if (const auto* s = f.find("initial_state")) u.initial_state = parse_rrc_state(*s, f.path("initial_state"));
  f.integer("access_identity", u.access_identity, 0, 15);
  if (!is_known_access_identity(u.access_identity)) fail(f.path("access_identity"), "unknown access identity");
  f.boolean("verifies_warnings", u.verifies_warnings);
  f.integer("power_on_tick", u.power_on_tick, 0, kTickMax);
  f.integer("max_attach_attempts", u.max_attach_attempts, 1, 100);
  f.finish();
  return u;
}

WarningSubmission parse_warning(const json& j, const std::string& path) {
  Fields f(j, path);
  WarningSubmission w;
  f.integer("at_tick", w.at_tick, 0, kTickMax);
  f.integer("local_identifier", w.message.local_identifier, 0, 65535);
  w.message.message_identifier =
      static_cast<std::uint16_t>(as_int(f.required("message_identifier"), f.path("message_identifier"), 0, 0xFFFF));
  w.message.serial_number =
      static_cast<std::uint16_t>(as_int(f.required("serial_number"), f.path("serial_number"), 0, 0xFFFF));
  if (const auto* wt = f.find("warning_type")) {
    w.message.warning_type = static_cast<std::uint16_t>(as_int(*wt, f.path("warning_type"), 0, 0xFFFF));
  }
  f.integer("data_coding_scheme", w.message.data_coding_scheme, 0, 255);
  w.message.text = as_string(f.required("text"), f.path("text"));
  if (const auto* p = f.find("part")) {
    static constexpr std::array<std::pair<std::string_view, NotificationPart>, 2> names{
        {{"primary", NotificationPart::Primary}, {"secondary", NotificationPart::Secondary}}};
    w.part = as_enum(*p, f.path("part"), names);
  }
  if (const auto* a = f.find("area")) w.area = parse_u32_list(*a, f.path("area"));
  if (const auto* g = f.find("global_ran_node_id")) {
    w.global_ran_node_id = static_cast<std::uint32_t>(as_int(*g, f.path("global_ran_node_id"), 0, UINT32_MAX));
  }
  f.integer("repetition_period_s", w.params.repetition_period_s, 1, kMaxRepetitionPeriod);
  f.integer("number_of_broadcasts", w.params.number_of_broadcasts, 1, kMaxNumberOfBroadcasts);
  f.boolean("cwm", w.params.cwm_indicator);
  f.finish();
  w.params.part = w.part;
  return w;
}

SpoofProfile parse_profile(const json& j, const std::string& path) {
  if (j.is_string()) {
    auto p = spoof_profile_preset(j.get<std::string>());
    if (!p) fail(path, "unknown spoof profile preset \"" + j.get<std::string>() + "\"");
    return *p;
  }
  Fields f(j, path);
  SpoofProfile p = SpoofProfile::sufficient();
  if (const auto* base = f.find("preset")) {
    auto preset = spoof_profile_preset(as_string(*base, f.path("preset")));
    if (!preset) fail(f.path("preset"), "unknown spoof profile preset");
    p = *preset;
  }
  p.name = "custom";
  f.string("name", p.name);
  f.integer("si_periodicity_frames", p.si_periodicity_frames, 1, 4096);
  f.integer("repetition_period", p.repetition_period, 0, 1 << 20);
  f.integer("number_of_broadcasts", p.number_of_broadcasts, 0, 1 << 20);
  f.boolean("concurrent_warnings", p.concurrent_warnings);
  f.boolean("message_id_permutations", p.message_id_permutations);
  f.boolean("serial_permutations", p.serial_permutations);
  f.integer("max_segment", p.max_segment, 0, 1024);
  f.finish();
  try {
    validate(p);
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return p;
}

AttackPlan parse_attack(const json& j, const std::string& path) {
  Fields f(j, path);
  AttackPlan a;
  const auto vpath = f.path("variant");
  const auto name = as_string(f.required("variant"), vpath);
  const auto v = parse_attack_variant(name);
  if (!v) fail(vpath, "unknown attack variant \"" + name + "\"");
  a.variant = *v;
  f.number("rogue_gain_boost_db", a.rogue_gain_boost_db);
  if (const auto* p = f.find("spoof_profile")) a.spoof_profile = parse_profile(*p, f.path("spoof_profile"));
  f.integer("start_tick", a.start_tick, 0, kTickMax);
  if (const auto* s = f.find("stop_tick")) a.stop_tick = as_int(*s, f.path("stop_tick"), 0, kTickMax);
  if (const auto* vs = f.find("victims")) {
    require_array(*vs, f.path("victims"));
    for (std::size_t i = 0; i < vs->size(); ++i) {
      a.victims.push_back(as_string((*vs)[i], at_index(f.path("victims"), i)));
    }
  }
  if (const auto* ts = f.find("targets")) {
    for (auto t : parse_u32_list(*ts, f.path("targets"))) {
      if (t > 255) fail(f.path("targets"), "cell id out of range");
      a.targets.push_back(static_cast<std::uint8_t>(t));
    }
  }
  f.integer("mitm_connection_lifetime_ms", a.mitm_connection_lifetime_ms, 1, kTickMax);
  f.integer("spoof_message_identifier", a.spoof_message_identifier, 0, 0xFFFF);
  f.integer("spoof_serial_number", a.spoof_serial_number, 0, 0xFFFF);
  f.string("spoof_text", a.spoof_text);
  f.finish();
  try {
    validate(a);
  } catch (const Error& e) {
    fail(path, e.what());
  }
  return a;
}

ScenarioEvent parse_event(const json& j, const std::string& path) {
  Fields f(j, path);
  ScenarioEvent e;
  e.at_tick = as_int(f.required("at_tick"), f.path("at_tick"), 0, kTickMax);
  static constexpr std::array<std::pair<std::string_view, ScenarioEventKind>, 4> names{
      {{"airplane_toggle", ScenarioEventKind::AirplaneToggle},
       {"reboot", ScenarioEventKind::Reboot},
       {"coverage_escape", ScenarioEventKind::CoverageEscape},
       {"stop_warning", ScenarioEventKind::StopWarning}}};
  e.kind = as_enum(f.required("kind"), f.path("kind"), names);
  if (e.kind == ScenarioEventKind::StopWarning) {
    e.message_identifier =
        static_cast<std::uint16_t>(as_int(f.required("message_identifier"), f.path("message_identifier"), 0, 0xFFFF));
    e.serial_number =
        static_cast<std::uint16_t>(as_int(f.required("serial_number"), f.path("serial_number"), 0, 0xFFFF));
  } else {
    e.ue = as_string(f.required("ue"), f.path("ue"));
  }
  f.finish();
  return e;
}

}  // namespace

ScenarioConfig parse_config(const json& doc) {
  Fields f(doc, "");
  ScenarioConfig c;
  f.string("name", c.name);
  if (const auto* s = f.find("seed")) c.seed = as_u64(*s, "seed");
  if (const auto* m = f.find("mode")) {
    static constexpr std::array<std::pair<std::string_view, SuccessMode>, 2> names{
        {{"Deterministic", SuccessMode::Deterministic}, {"Stochastic", SuccessMode::Stochastic}}};
    c.mode = as_enum(*m, "mode", names);
  }
  f.integer("duration_ticks", c.duration_ticks, 1, kTickMax);
  f.integer("test_identifier", c.test_identifier, 0, 0xFFFF);

  if (const auto* d = f.find("drx")) {
    Fields df(*d, "drx");
    df.integer("cycle_length_ticks", c.drx.cycle_length_ticks, 1, kTickMax);
    df.integer("si_modification_period_ticks", c.drx.si_modification_period_ticks, 1, kTickMax);
    df.finish();
  }
  if (const auto* t = f.find("timings")) {
    Fields tf(*t, "timings");
    tf.integer("t_rec_supi_ms", c.timings.t_rec_supi_ms, 0, kTickMax);
    tf.integer("t_rach_ran_ms", c.timings.t_rach_ran_ms, 0, kTickMax);
    tf.integer("attach_retry_interval_ms", c.timings.attach_retry_interval_ms, 1, kTickMax);
    tf.integer("attach_overhead_ms", c.timings.attach_overhead_ms, 6, kTickMax);
    tf.integer("mib_recheck_interval_ms", c.timings.mib_recheck_interval_ms, 1, kTickMax);
    tf.integer("cell_search_retry_ms", c.timings.cell_search_retry_ms, 1, kTickMax);
    tf.boolean("auto_recovery", c.timings.auto_recovery);
    tf.finish();
  }
  if (const auto* t = f.find("thresholds")) {
    Fields tf(*t, "thresholds");
    tf.number("barring_full_db", c.barring_rule.full_db);
    tf.number("barring_partial_db", c.barring_rule.partial_db);
    tf.number("barring_partial_rate", c.barring_rule.partial_rate);
    tf.number("attachment_db", c.attachment_rule.full_db);
    tf.finish();
    c.attachment_rule.partial_db = c.attachment_rule.full_db;
    if (c.barring_rule.partial_db > c.barring_rule.full_db) fail("thresholds", "partial band above full threshold");
    if (c.barring_rule.partial_rate < 0 || c.barring_rule.partial_rate > 1) {
      fail("thresholds.barring_partial_rate", "must lie in [0, 1]");
    }
  }
  if (const auto* p = f.find("policy")) {
    Fields pf(*p, "policy");
    pf.boolean("plmn_signs", c.policy.plmn_signs);
    pf.boolean("ue_verifies", c.policy.ue_verifies);
    pf.boolean("key_compatible", c.policy.key_compatible);
    pf.boolean("enriched_reports", c.enriched_reports);
    pf.finish();
  }
  if (const auto* k = f.find("keys")) {
    Fields kf(*k, "keys");
    kf.string("network_key_id", c.keys.network_key_id);
    kf.string("network_key_seed", c.keys.network_key_seed);
    kf.string("foreign_key_seed", c.keys.foreign_key_seed);
    kf.string("attacker_key_seed", c.keys.attacker_key_seed);
    kf.finish();
  }

  if (const auto* cells = f.find("cells")) {
    require_array(*cells, "cells");
    for (std::size_t i = 0; i < cells->size(); ++i) c.cells.push_back(parse_cell((*cells)[i], at_index("cells", i)));
  } else {
    c.cells = default_cells();
  }
  if (const auto* gnbs = f.find("gnbs")) {
    require_array(*gnbs, "gnbs");
    for (std::size_t i = 0; i < gnbs->size(); ++i) {
      Fields gf((*gnbs)[i], at_index("gnbs", i));
      GnbConfig g;
      g.gnb_id = static_cast<std::uint32_t>(as_int(gf.required("gnb_id"), gf.path("gnb_id"), 0, UINT32_MAX));
      gf.integer("si_periodicity_frames", g.si_periodicity_frames, 1, 512);
      gf.finish();
      c.gnbs.push_back(g);
    }
  } else {
    for (const auto& cell : c.cells) {
      if (std::none_of(c.gnbs.begin(), c.gnbs.end(), [&](const GnbConfig& g) { return g.gnb_id == cell.gnb_id; })) {
        c.gnbs.push_back({cell.gnb_id, 16});
      }
    }
  }
  if (const auto* amfs = f.find("amfs")) {
    require_array(*amfs, "amfs");
    for (std::size_t i = 0; i < amfs->size(); ++i) {
      Fields af((*amfs)[i], at_index("amfs", i));
      AmfConfig a;
      a.name = as_string(af.required("name"), af.path("name"));
      a.gnbs = parse_u32_list(af.required("gnbs"), af.path("gnbs"));
      af.finish();
      c.amfs.push_back(std::move(a));
    }
  } else {
    AmfConfig a{"amf-1", {}};
    for (const auto& g : c.gnbs) a.gnbs.push_back(g.gnb_id);
    c.amfs.push_back(std::move(a));
  }
  if (const auto* ues = f.find("ues")) {
    require_array(*ues, "ues");
    for (std::size_t i = 0; i < ues->size(); ++i) c.ues.push_back(parse_ue((*ues)[i], at_index("ues", i), c.policy.ue_verifies));
  } else {
    c.ues.push_back({"imsi-001010000000001", 0x00C0FFEE, RrcState::Idle, 0, c.policy.ue_verifies, 0, 5});
  }
  if (const auto* ws = f.find("warnings")) {
    require_array(*ws, "warnings");
    for (std::size_t i = 0; i < ws->size(); ++i) c.warnings.push_back(parse_warning((*ws)[i], at_index("warnings", i)));
  }
  if (const auto* a = f.find("attack"); a && !a->is_null()) c.attack = parse_attack(*a, "attack");
  if (const auto* es = f.find("events")) {
    require_array(*es, "events");
    for (std::size_t i = 0; i < es->size(); ++i) c.events.push_back(parse_event((*es)[i], at_index("events", i)));
  }
  f.finish();
  validate(c);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidConfig, path.string() + ": cannot open file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidConfig, path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

void validate(const ScenarioConfig& c) {
  if (c.duration_ticks <= 0) fail("duration_ticks", "must be positive");
  try {
    validate(c.drx);
  } catch (const Error& e) {
    fail("drx", e.what());
  }
  if (c.cells.empty()) fail("cells", "at least one cell is required");
  std::set<std::uint8_t> cell_ids;
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    const auto& cell = c.cells[i];
    if (!cell_ids.insert(cell.cell_id).second) fail(at_index("cells", i) + ".cell_id", "duplicate cell id");
    if (!cell.legitimate) fail(at_index("cells", i) + ".legitimate", "rogue cells come from the attack section");
    if (std::none_of(c.gnbs.begin(), c.gnbs.end(), [&](const GnbConfig& g) { return g.gnb_id == cell.gnb_id; })) {
      fail(at_index("cells", i) + ".gnb_id", "no such gNB");
    }
  }
  std::set<std::uint32_t> gnb_ids;
  for (std::size_t i = 0; i < c.gnbs.size(); ++i) {
    if (!gnb_ids.insert(c.gnbs[i].gnb_id).second) fail(at_index("gnbs", i) + ".gnb_id", "duplicate gNB id");
  }
  for (std::size_t i = 0; i < c.amfs.size(); ++i) {
    for (std::size_t k = 0; k < c.amfs[i].gnbs.size(); ++k) {
      if (!gnb_ids.contains(c.amfs[i].gnbs[k])) fail(at_index(at_index("amfs", i) + ".gnbs", k), "no such gNB");
    }
  }
  if (c.amfs.empty()) fail("amfs", "at least one AMF is required");
  std::set<std::string> supis;
  for (std::size_t i = 0; i < c.ues.size(); ++i) {
    if (c.ues[i].supi.empty()) fail(at_index("ues", i) + ".supi", "must not be empty");
    if (!supis.insert(c.ues[i].supi).second) fail(at_index("ues", i) + ".supi", "duplicate SUPI");
  }
  for (std::size_t i = 0; i < c.warnings.size(); ++i) {
    const auto path = at_index("warnings", i);
    try {
      (void)build_warning_sib(c.warnings[i].message, c.warnings[i].part, c.test_identifier);
    } catch (const Error& e) {
      fail(path, e.what());
    }
  }
  if (c.attack) {
    for (std::size_t i = 0; i < c.attack->victims.size(); ++i) {
      if (!supis.contains(c.attack->victims[i])) fail(at_index("attack.victims", i), "unknown UE");
    }
    for (std::size_t i = 0; i < c.attack->targets.size(); ++i) {
      if (!cell_ids.contains(c.attack->targets[i])) fail(at_index("attack.targets", i), "unknown cell");
    }
    try {
      encode_gsm7(c.attack->spoof_text);
      (void)classify_message_identifier(c.attack->spoof_message_identifier, c.test_identifier);
    } catch (const Error& e) {
      fail("attack", e.what());
    }
  }
  for (std::size_t i = 0; i < c.events.size(); ++i) {
    if (c.events[i].kind != ScenarioEventKind::StopWarning && !supis.contains(c.events[i].ue)) {
      fail(at_index("events", i) + ".ue", "unknown UE");
    }
  }
}

}  // namespace pws
