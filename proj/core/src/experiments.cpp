#include "pws/experiments.hpp"

#include <algorithm>
#include <thread>

#include "pws/error.hpp"

namespace pws {

namespace {

constexpr const char* kVictim = "imsi-001010000000101";
constexpr const char* kBystander = "imsi-001010000000202";

WarningSubmission etws_warning(Tick at) {
  WarningSubmission w;
  w.at_tick = at;
  w.message.message_identifier = kEtwsIdentifier;
  w.message.serial_number = 0x3001;
  w.message.warning_type = kEtwsWarningTypeEarthquakeTsunami;
  w.message.text = "This is a ETWS test message";
  return w;
}

ScenarioConfig base_scenario(const VerificationPolicy& policy) {
  ScenarioConfig c;
  c.policy = policy;
  c.cells = default_cells();
  c.gnbs.push_back({c.cells.front().gnb_id, 16});
  c.amfs.push_back({"amf-1", {c.cells.front().gnb_id}});
  c.ues.push_back({kVictim, 0x0000010A, RrcState::Idle, 0, policy.ue_verifies, 0, 5});
  c.ues.push_back({kBystander, 0x000002F5, RrcState::Idle, 0, policy.ue_verifies, 0, 5});
  return c;
}

}  // namespace

std::array<VerificationPolicy, 4> matrix_policies() {
  return {VerificationPolicy{false, false, true}, VerificationPolicy{false, true, true},
          VerificationPolicy{true, false, true}, VerificationPolicy{true, true, true}};
}

ScenarioConfig matrix_spoof_scenario(const VerificationPolicy& policy) {
  auto c = base_scenario(policy);
  c.name = "matrix-spoof";
  c.duration_ticks = 120000;
  c.warnings.push_back(etws_warning(20000));
  AttackPlan a;
  a.variant = AttackVariant::SpoofNonMitM;
  a.rogue_gain_boost_db = 30;
  a.spoof_profile = SpoofProfile::sufficient();
  a.start_tick = 10000;
  a.victims = {kVictim};
  c.attack = a;
  validate(c);
  return c;
}

ScenarioConfig matrix_barring_scenario(const VerificationPolicy& policy) {
  auto c = base_scenario(policy);
  c.name = "matrix-barring";
  c.duration_ticks = 150000;
  c.ues[0].power_on_tick = 5000;
  c.warnings.push_back(etws_warning(20000));
  AttackPlan a;
  a.variant = AttackVariant::Barring;
  a.rogue_gain_boost_db = 10;
  a.start_tick = 1000;
  a.stop_tick = 125000;
  a.victims = {kVictim};
  c.attack = a;
  validate(c);
  return c;
}

OutcomeRow EmpiricalRow::outcome() const {
  return {victim_displayed_forged,
          victim_missed_legitimate_under_attachment || victim_missed_legitimate_under_barring,
          bystander_rejected_legitimate};
}

EmpiricalRow observe_matrix_row(const VerificationPolicy& policy) {
  EmpiricalRow row;
  auto legit_seen = [](const Trace& trace, const std::string& supi, const char* outcome) {
    for (const auto* e : trace.of_kind("warning_rx")) {
      if (e->actor == supi && e->payload.at("origin") == "network" && e->payload.at("outcome") == outcome) return true;
    }
    return false;
  };
  {
    const auto res = run(matrix_spoof_scenario(policy));
    for (const auto* e : res.trace.of_kind("warning_rx")) {
      if (e->actor == kVictim && e->payload.at("origin") == "forged" && e->payload.at("outcome") == "Displayed") {
        row.victim_displayed_forged = true;
      }
    }
    row.victim_missed_legitimate_under_attachment =
        res.metrics.amf_completed_count > 0 && !legit_seen(res.trace, kVictim, "Displayed");
    row.bystander_rejected_legitimate = legit_seen(res.trace, kBystander, "Rejected");
  }
  {
    const auto res = run(matrix_barring_scenario(policy));
    row.victim_missed_legitimate_under_barring = res.metrics.attack_succeeded &&
                                                 res.metrics.amf_completed_count > 0 &&
                                                 !legit_seen(res.trace, kVictim, "Displayed");
  }
  return row;
}

std::vector<MatrixRow> verification_matrix() {
  std::vector<MatrixRow> rows;
  for (const auto& p : matrix_policies()) {
    MatrixRow r;
    r.policy = p;
    r.analytic = evaluate_matrix(p);
    r.evidence = observe_matrix_row(p);
    r.empirical = r.evidence.outcome();
    rows.push_back(r);
  }
  return rows;
}

TrialSummary run_trials(const ScenarioConfig& config, int n, unsigned threads) {
  if (n < 0) throw Error(Errc::OutOfRange, "trial count must be non-negative");
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max(n, 1))));
  std::vector<char> success(static_cast<std::size_t>(n), 0);
  auto work = [&](unsigned worker) {
    for (int i = static_cast<int>(worker); i < n; i += static_cast<int>(threads)) {
      ScenarioConfig c = config;
      c.seed = mix_seed(config.seed + static_cast<std::uint64_t>(i));
      success[static_cast<std::size_t>(i)] = run(c).metrics.attack_succeeded ? 1 : 0;
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& t : pool) t.join();
  }
  TrialSummary s;
  s.trials = n;
  s.successes = static_cast<int>(std::count(success.begin(), success.end(), 1));
  return s;
}

}  // namespace pws
