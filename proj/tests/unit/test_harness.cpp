#include <gtest/gtest.h>

#include <set>
#include <string>

#include "pws/config.hpp"
#include "pws/error.hpp"
#include "pws/experiments.hpp"
#include "pws/metrics.hpp"
#include "pws/simulation.hpp"

using namespace pws;

namespace {

ScenarioConfig scenario(const std::string& name) {
  return load_config(std::string(PWS_SCENARIO_DIR) + "/" + name + ".json");
}

std::string config_error(const char* text) {
  try {
    parse_config(nlohmann::json::parse(text));
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidConfig);
    return e.what();
  }
  ADD_FAILURE() << "no error for " << text;
  return {};
}

std::vector<const TraceEvent*> events_of(const Trace& t, const std::string& actor, const std::string& kind) {
  std::vector<const TraceEvent*> out;
  for (const auto* e : t.of_kind(kind)) {
    if (e->actor == actor) out.push_back(e);
  }
  return out;
}

const std::string kVictim = "imsi-001010000000001";

}  // namespace

TEST(ClosedForms, Sums) {
  EXPECT_EQ(d_supp_mitm(55000, 10000, 2000), 67000);
  EXPECT_EQ(d_supp_mitm(0, 0, 0), 0);
  EXPECT_EQ(d_supp_mitm(58000, 0, 0), 58000);
  EXPECT_EQ(d_supp_attach(43000, 10000, 2000), 55000);
  EXPECT_EQ(d_supp_attach(0, 0, 0), 0);
  EXPECT_EQ(d_supp_attach(40000, 5000, 1000), 46000);
  EXPECT_EQ(d_supp_barr(120000, 10000, 2000), 132000);
  EXPECT_EQ(d_supp_barr(0, 0, 0), 0);
  EXPECT_EQ(d_supp_barr(987654321, 0, 0), 987654321);
  EXPECT_THROW(d_supp_barr(-1, 0, 0), Error);
}

TEST(Config, ErrorsNameFieldPath) {
  EXPECT_NE(config_error(R"({"duration_ticks": 0})").find("duration_ticks"), std::string::npos);
  EXPECT_NE(config_error(R"({"ues": [{"supi": "a"}, {"supi": "a"}]})").find("ues"), std::string::npos);
  EXPECT_NE(config_error(R"({"ues": [{"supi": "a", "tmsi": "0xZZ"}]})").find("ues[0].tmsi"), std::string::npos);
  EXPECT_NE(config_error(R"({"attack": {"variant": "Jamming"}})").find("attack.variant"), std::string::npos);
  EXPECT_NE(config_error(R"({"attack": {"variant": "SpoofMitM"}})").find("attack"), std::string::npos);
  EXPECT_NE(config_error(R"({"bogus": 1})").find("bogus"), std::string::npos);
  EXPECT_NE(config_error(R"({"cells": [{"cell_id": 1}, {"cell_id": 1}]})").find("cells"), std::string::npos);
}

TEST(Config, DefaultsFillLabNetwork) {
  const auto c = parse_config(nlohmann::json::object());
  EXPECT_EQ(c.cells.size(), 2u);
  EXPECT_EQ(c.gnbs.size(), 1u);
  EXPECT_EQ(c.amfs.size(), 1u);
  EXPECT_EQ(c.ues.size(), 1u);
  EXPECT_EQ(c.timings.t_rec_supi_ms, 10000);
  EXPECT_EQ(c.timings.t_rach_ran_ms, 2000);
  EXPECT_EQ(c.timings.mib_recheck_interval_ms, 300000);
}

TEST(Config, UeVerificationFollowsPolicyUnlessSet) {
  const auto c = parse_config(nlohmann::json::parse(
      R"({"policy": {"plmn_signs": true, "ue_verifies": true},
          "ues": [{"supi": "a"}, {"supi": "b", "verifies_warnings": false}]})"));
  EXPECT_TRUE(c.ues[0].verifies_warnings);
  EXPECT_FALSE(c.ues[1].verifies_warnings);
  EXPECT_TRUE(parse_config(nlohmann::json::parse(R"({"policy": {"ue_verifies": true}})")).ues[0].verifies_warnings);
}

TEST(Run, BaselineEveryUeDisplaysOnce) {
  const auto r = run(scenario("baseline"));
  EXPECT_EQ(r.metrics.legitimate_displayed_count, 3);
  EXPECT_EQ(r.metrics.suppressed_count, 0);
  EXPECT_EQ(r.metrics.amf_completed_count, 1);
  EXPECT_FALSE(r.metrics.d_spoof_ms);
  EXPECT_FALSE(r.metrics.d_supp_ms);
  EXPECT_FALSE(r.metrics.t_barr_ms);
}

TEST(Run, Deterministic) {
  for (const char* name : {"baseline", "spoof_mitm", "barring"}) {
    const auto cfg = scenario(name);
    EXPECT_EQ(run(cfg).trace.to_jsonl(), run(cfg).trace.to_jsonl()) << name;
  }
}

TEST(Run, TraceRoundTripsThroughJsonl) {
  const auto r = run(scenario("suppress_nonmitm"));
  const auto text = r.trace.to_jsonl();
  const auto back = Trace::parse_jsonl(text);
  EXPECT_EQ(back.to_jsonl(), text);
  const auto m = measure_durations(back);
  EXPECT_EQ(m.d_spoof_ms, r.metrics.d_spoof_ms);
  EXPECT_EQ(m.d_supp_ms, r.metrics.d_supp_ms);
}

TEST(Trace, MalformedInputs) {
  Trace t;
  t.record(5, "a", "x");
  EXPECT_THROW(t.record(4, "a", "x"), Error);
  EXPECT_THROW(Trace::parse_jsonl(std::string_view("not json\n")), Error);
  EXPECT_THROW(Trace::parse_jsonl(std::string_view(R"({"tick":1,"actor":"a"})" "\n")), Error);
  EXPECT_THROW(
      Trace::parse_jsonl(std::string_view(R"({"tick":2,"actor":"a","kind":"k","payload":{}})"
                                          "\n"
                                          R"({"tick":1,"actor":"a","kind":"k","payload":{}})"
                                          "\n")),
      Error);
  try {
    measure_durations(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MalformedTrace);
  }
  Trace bad;
  bad.record(0, "rogue", "attack_start", {{"victims", OrderedJson::array()}});
  EXPECT_THROW(measure_durations(bad), Error);
}

TEST(Run, MeasuredSuppressionMatchesClosedForm) {
  for (const char* name : {"spoof_nonmitm", "suppress_nonmitm", "spoof_mitm", "suppress_mitm", "barring"}) {
    const auto m = run(scenario(name)).metrics;
    ASSERT_TRUE(m.d_supp_ms && m.t_rec_ms && m.t_rach_ms) << name;
    if (m.variant == "Barring") {
      EXPECT_EQ(*m.d_supp_ms, d_supp_barr(*m.t_barr_ms, *m.t_rec_ms, *m.t_rach_ms)) << name;
    } else if (m.variant == "SpoofMitM" || m.variant == "SuppressDoSMitM") {
      EXPECT_EQ(*m.d_supp_ms, d_supp_mitm(*m.d_spoof_ms, *m.t_rec_ms, *m.t_rach_ms)) << name;
    } else {
      EXPECT_EQ(*m.d_supp_ms, d_supp_attach(*m.d_spoof_ms, *m.t_rec_ms, *m.t_rach_ms)) << name;
    }
  }
}

TEST(Run, MitmWindowDominatesAttach) {
  const auto mitm = run(scenario("spoof_mitm")).metrics;
  const auto attach = run(scenario("spoof_nonmitm")).metrics;
  EXPECT_GT(*mitm.d_spoof_ms, *attach.d_spoof_ms);
  EXPECT_GT(*mitm.d_supp_ms, *attach.d_supp_ms);
}

TEST(Run, BarringNeedsNoSignalling) {
  const auto r = run(scenario("barring"));
  EXPECT_TRUE(events_of(r.trace, kVictim, "radio").empty());
  EXPECT_TRUE(events_of(r.trace, kVictim, "lure").empty());
  EXPECT_TRUE(r.metrics.attack_succeeded);
}

TEST(Run, SuppressionCompleteness) {
  for (const char* name : {"suppress_nonmitm", "suppress_mitm", "barring"}) {
    const auto r = run(scenario(name));
    for (const auto* e : events_of(r.trace, kVictim, "warning_rx")) {
      EXPECT_NE(e->payload.at("origin"), "network") << name << " tick " << e->tick;
    }
    EXPECT_GE(r.metrics.suppressed_count, 1) << name;
    EXPECT_GE(r.metrics.amf_completed_count, 1) << name;
  }
}

TEST(Run, SpoofedWarningsOnlyInsideWindow) {
  const auto r = run(scenario("spoof_nonmitm"));
  ASSERT_EQ(r.metrics.victims.size(), 1u);
  const auto& v = r.metrics.victims[0];
  ASSERT_TRUE(v.window_start && v.window_end);
  int forged = 0;
  for (const auto* e : r.trace.of_kind("warning_rx")) {
    if (e->payload.at("origin") != "forged") continue;
    ++forged;
    EXPECT_EQ(e->actor, kVictim);
    EXPECT_GE(e->tick, *v.window_start);
    EXPECT_LE(e->tick, *v.window_end);
  }
  EXPECT_GE(forged, 1);
  EXPECT_EQ(v.attach_rejects, 5);
}

TEST(Run, EmergencyCallsUnavailableDuringAttack) {
  auto mitm = scenario("spoof_mitm");
  mitm.duration_ticks = 40000;
  EXPECT_FALSE(run(mitm).metrics.ims_emergency_available_final);

  auto barr = scenario("barring");
  barr.duration_ticks = 60000;
  EXPECT_FALSE(run(barr).metrics.ims_emergency_available_final);

  EXPECT_TRUE(run(scenario("barring")).metrics.ims_emergency_available_final);
}

TEST(Run, CoverageEscapeEndsBarring) {
  auto cfg = scenario("barring");
  ScenarioEvent ev;
  ev.at_tick = 50000;
  ev.kind = ScenarioEventKind::CoverageEscape;
  ev.ue = kVictim;
  cfg.events.push_back(ev);
  const auto m = run(cfg).metrics;
  ASSERT_TRUE(m.t_barr_ms);
  EXPECT_EQ(*m.t_barr_ms, 45000);
}

TEST(Run, EnrichedReportsFlagSpoofs) {
  auto cfg = scenario("spoof_mitm");
  cfg.enriched_reports = true;
  cfg.duration_ticks = 40000;
  EXPECT_GE(run(cfg).metrics.detected_spoof_count, 1);
  auto base = scenario("baseline");
  base.enriched_reports = true;
  EXPECT_EQ(run(base).metrics.detected_spoof_count, 0);
}

TEST(Experiments, TrialsIndependentOfThreads) {
  const auto cfg = scenario("barring_trial");
  const auto a = run_trials(cfg, 200, 1);
  const auto b = run_trials(cfg, 200, 4);
  EXPECT_EQ(a.successes, b.successes);
  EXPECT_EQ(a.trials, 200);
}

TEST(Experiments, MatrixAgrees) {
  for (const auto& row : verification_matrix()) {
    EXPECT_EQ(row.analytic, row.empirical) << row.policy.plmn_signs << row.policy.ue_verifies;
  }
}
