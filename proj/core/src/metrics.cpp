#include "pws/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "pws/error.hpp"

namespace pws {

namespace {

void require_non_negative(Tick a, Tick b, Tick c) {
  if (a < 0 || b < 0 || c < 0) throw Error(Errc::OutOfRange, "duration components must be non-negative");
}

const OrderedJson& field(const TraceEvent& e, const char* key) {
  auto it = e.payload.find(key);
  if (it == e.payload.end()) {
    throw Error(Errc::MalformedTrace, "event \"" + e.kind + "\" at tick " + std::to_string(e.tick) +
                                          " lacks payload field \"" + key + "\"");
  }
  return *it;
}

std::string str_field(const TraceEvent& e, const char* key) {
  const auto& v = field(e, key);
  if (!v.is_string()) throw Error(Errc::MalformedTrace, "payload field \"" + std::string(key) + "\" is not a string");
  return v.get<std::string>();
}

bool bool_field(const TraceEvent& e, const char* key) {
  const auto& v = field(e, key);
  if (!v.is_boolean()) throw Error(Errc::MalformedTrace, "payload field \"" + std::string(key) + "\" is not a boolean");
  return v.get<bool>();
}

struct UeTimeline {
  std::optional<Tick> window_start;
  std::optional<Tick> last_reject;
  std::optional<Tick> last_disconnect;
  std::optional<Tick> first_barred;
  std::optional<Tick> barring_end;
  std::vector<Tick> recoveries;
  std::vector<Tick> reconnects;
  int rejects = 0;
  std::set<std::pair<std::string, std::string>> legit_displayed;
};

std::optional<Tick> first_at_or_after(const std::vector<Tick>& ticks, Tick from) {
  for (auto t : ticks) {
    if (t >= from) return t;
  }
  return std::nullopt;
}

}  // namespace

Tick d_supp_mitm(Tick d_spoof_ms, Tick t_rec_ms, Tick t_rach_ms) {
  require_non_negative(d_spoof_ms, t_rec_ms, t_rach_ms);
  return d_spoof_ms + t_rec_ms + t_rach_ms;
}

Tick d_supp_attach(Tick d_spoof_attach_ms, Tick t_rec_ms, Tick t_rach_ms) {
  require_non_negative(d_spoof_attach_ms, t_rec_ms, t_rach_ms);
  return d_spoof_attach_ms + t_rec_ms + t_rach_ms;
}

Tick d_supp_barr(Tick t_barr_ms, Tick t_rec_ms, Tick t_rach_ms) {
  require_non_negative(t_barr_ms, t_rec_ms, t_rach_ms);
  return t_barr_ms + t_rec_ms + t_rach_ms;
}

Metrics measure_durations(const Trace& trace) {
  Metrics m;
  std::vector<std::string> ue_order;
  std::vector<std::string> victims;
  std::map<std::string, UeTimeline> ues;
  std::set<std::pair<std::string, std::string>> completed;
  std::map<std::string, bool> ims_final;
  bool ended = false;

  Tick last_tick = 0;
  for (const auto& e : trace.events()) {
    if (e.tick < last_tick) throw Error(Errc::MalformedTrace, "ticks decrease at " + std::to_string(e.tick));
    last_tick = e.tick;
    const std::string& k = e.kind;
    if (k == "ue_power_on") {
      if (!ues.contains(e.actor)) ue_order.push_back(e.actor);
      ues[e.actor];
    } else if (k == "attack_start") {
      m.variant = str_field(e, "variant");
      for (const auto& v : field(e, "victims")) victims.push_back(v.get<std::string>());
    } else if (k == "radio") {
      auto& u = ues[e.actor];
      if (bool_field(e, "window_start") && !u.window_start) u.window_start = e.tick;
      if (str_field(e, "message") == "AttachReject") {
        ++u.rejects;
        u.last_reject = e.tick;
      }
    } else if (k == "disconnect") {
      ues[e.actor].last_disconnect = e.tick;
    } else if (k == "access_decision") {
      const auto decision = str_field(e, "decision");
      if (decision == "Barred" || decision == "BarredNoIntraFreqReselection") {
        auto& u = ues[e.actor];
        if (!u.first_barred) u.first_barred = e.tick;
        if (str_field(e, "source") == "rogue") m.attack_succeeded = true;
      }
    } else if (k == "barring_end") {
      auto& u = ues[e.actor];
      if (!u.barring_end) u.barring_end = e.tick;
    } else if (k == "recovery") {
      ues[e.actor].recoveries.push_back(e.tick);
    } else if (k == "reconnected") {
      ues[e.actor].reconnects.push_back(e.tick);
    } else if (k == "lure") {
      m.attack_succeeded = true;
    } else if (k == "warning_rx") {
      const auto origin = str_field(e, "origin");
      const auto outcome = str_field(e, "outcome");
      if (outcome == "Discarded") {
        ++m.discarded_count;
      } else if (origin == "forged") {
        ++(outcome == "Displayed" ? m.spoofed_displayed_count : m.spoofed_rejected_count);
      } else {
        ++(outcome == "Displayed" ? m.legitimate_displayed_count : m.legitimate_rejected_count);
        if (outcome == "Displayed") {
          ues[e.actor].legit_displayed.emplace(str_field(e, "message_identifier"), str_field(e, "serial_number"));
        }
      }
    } else if (k == "amf_trace") {
      if (str_field(e, "outcome") == "Completed") {
        ++m.amf_completed_count;
        completed.emplace(str_field(e, "message_identifier"), str_field(e, "serial_number"));
      }
    } else if (k == "spoof_detected") {
      ++m.detected_spoof_count;
    } else if (k == "run_end") {
      ended = true;
      for (const auto& u : field(e, "ues")) {
        ims_final[u.at("supi").get<std::string>()] = u.at("ims_emergency_available").get<bool>();
      }
    }
  }
  if (!ended) throw Error(Errc::MalformedTrace, "trace has no run_end record");

  for (const auto& supi : ue_order) {
    const auto& u = ues[supi];
    for (const auto& w : completed) {
      if (!u.legit_displayed.contains(w)) ++m.suppressed_count;
    }
  }

  const bool barring = m.variant && *m.variant == "Barring";
  const bool mitm = m.variant && (*m.variant == "SpoofMitM" || *m.variant == "SuppressDoSMitM");
  for (const auto& supi : victims) {
    const auto& u = ues[supi];
    VictimDurations d;
    d.supi = supi;
    d.attach_rejects = u.rejects;
    std::optional<Tick> start;
    std::optional<Tick> supp_end;
    if (barring) {
      start = u.first_barred;
      supp_end = u.barring_end;
      if (start && supp_end) d.t_barr_ms = *supp_end - *start;
    } else {
      start = u.window_start;
      d.window_start = u.window_start;
      d.window_end = mitm ? u.last_disconnect : u.last_reject;
      supp_end = u.last_disconnect;
      if (start && d.window_end) d.d_spoof_ms = *d.window_end - *start;
    }
    if (start && supp_end) {
      if (auto rec = first_at_or_after(u.recoveries, *supp_end)) {
        d.t_rec_ms = *rec - *supp_end;
        if (auto conn = first_at_or_after(u.reconnects, *rec)) {
          d.t_rach_ms = *conn - *rec;
          d.d_supp_ms = *conn - *start;
        }
      }
    }
    m.victims.push_back(std::move(d));
  }

  auto focus = std::find_if(m.victims.begin(), m.victims.end(),
                            [](const VictimDurations& d) { return d.d_spoof_ms || d.t_barr_ms; });
  if (focus == m.victims.end() && !m.victims.empty()) focus = m.victims.begin();
  if (focus != m.victims.end()) {
    m.d_spoof_ms = focus->d_spoof_ms;
    m.t_barr_ms = focus->t_barr_ms;
    m.t_rec_ms = focus->t_rec_ms;
    m.t_rach_ms = focus->t_rach_ms;
    m.d_supp_ms = focus->d_supp_ms;
    if (ims_final.contains(focus->supi)) m.ims_emergency_available_final = ims_final[focus->supi];
  } else if (!ue_order.empty() && ims_final.contains(ue_order.front())) {
    m.ims_emergency_available_final = ims_final[ue_order.front()];
  }
  return m;
}

OrderedJson to_json(const Metrics& m) {
  auto opt = [](const std::optional<Tick>& v) { return v ? OrderedJson(*v) : OrderedJson(nullptr); };
  OrderedJson j;
  j["variant"] = m.variant ? OrderedJson(*m.variant) : OrderedJson(nullptr);
  j["d_spoof_ms"] = opt(m.d_spoof_ms);
  j["d_supp_ms"] = opt(m.d_supp_ms);
  j["t_barr_ms"] = opt(m.t_barr_ms);
  j["t_rec_ms"] = opt(m.t_rec_ms);
  j["t_rach_ms"] = opt(m.t_rach_ms);
  j["spoofed_displayed_count"] = m.spoofed_displayed_count;
  j["spoofed_rejected_count"] = m.spoofed_rejected_count;
  j["legitimate_displayed_count"] = m.legitimate_displayed_count;
  j["legitimate_rejected_count"] = m.legitimate_rejected_count;
  j["discarded_count"] = m.discarded_count;
  j["suppressed_count"] = m.suppressed_count;
  j["amf_completed_count"] = m.amf_completed_count;
  j["detected_spoof_count"] = m.detected_spoof_count;
  j["attack_succeeded"] = m.attack_succeeded;
  j["ims_emergency_available_final"] = m.ims_emergency_available_final;
  OrderedJson victims = OrderedJson::array();
  for (const auto& d : m.victims) {
    OrderedJson v;
    v["supi"] = d.supi;
    v["window_start"] = opt(d.window_start);
    v["window_end"] = opt(d.window_end);
    v["d_spoof_ms"] = opt(d.d_spoof_ms);
    v["t_barr_ms"] = opt(d.t_barr_ms);
    v["t_rec_ms"] = opt(d.t_rec_ms);
    v["t_rach_ms"] = opt(d.t_rach_ms);
    v["d_supp_ms"] = opt(d.d_supp_ms);
    v["attach_rejects"] = d.attach_rejects;
    victims.push_back(std::move(v));
  }
  j["victims"] = std::move(victims);
  return j;
}

}  // namespace pws
