#pragma once

// Deterministic discrete-event run of one scenario.

#include "pws/config.hpp"
#include "pws/metrics.hpp"
#include "pws/trace.hpp"

namespace pws {

struct RunResult {
  Trace trace;
  Metrics metrics;
};

/// Pure function of the config (seed included). Events are ordered by
/// (tick, phase, entity, insertion): control, then network, adversary and
/// UE activity within a tick.
RunResult run(const ScenarioConfig& config);

}  // namespace pws
