#pragma once

// Multi-run experiments: the empirical verification matrix and seeded
// success-rate trials.

#include <array>
#include <cstdint>
#include <vector>

#include "pws/config.hpp"
#include "pws/security.hpp"
#include "pws/simulation.hpp"

namespace pws {

/// (signs, verifies) in table order: (F,F), (F,T), (T,F), (T,T).
std::array<VerificationPolicy, 4> matrix_policies();

/// Non-MitM spoofing against a victim while a bystander on the legitimate
/// cell receives a genuine ETWS warning.
ScenarioConfig matrix_spoof_scenario(const VerificationPolicy& policy);

/// Barring against a victim that powers on after the rogue appears; the
/// bystander is already camped.
ScenarioConfig matrix_barring_scenario(const VerificationPolicy& policy);

struct EmpiricalRow {
  bool victim_displayed_forged = false;
  bool victim_missed_legitimate_under_attachment = false;
  bool victim_missed_legitimate_under_barring = false;
  bool bystander_rejected_legitimate = false;

  OutcomeRow outcome() const;
};

struct MatrixRow {
  VerificationPolicy policy;
  OutcomeRow analytic;
  OutcomeRow empirical;
  EmpiricalRow evidence;
};

EmpiricalRow observe_matrix_row(const VerificationPolicy& policy);

std::vector<MatrixRow> verification_matrix();

struct TrialSummary {
  int trials = 0;
  int successes = 0;
  double rate() const { return trials == 0 ? 0.0 : static_cast<double>(successes) / trials; }
};

/// Runs `n` copies of `config` with seeds mix_seed(config.seed + i) and
/// counts runs whose metrics report attack success. Results do not depend
/// on `threads`.
TrialSummary run_trials(const ScenarioConfig& config, int n, unsigned threads = 1);

}  // namespace pws
