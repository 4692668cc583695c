#pragma once

// Attack durations and delivery counts, derived from a run trace alone.

#include <optional>
#include <string>
#include <vector>

#include "pws/trace.hpp"

namespace pws {

/// d_spoof + t_rec + t_rach for a MitM attack.
Tick d_supp_mitm(Tick d_spoof_ms, Tick t_rec_ms, Tick t_rach_ms);
/// Same sum with the non-MitM spoofing window.
Tick d_supp_attach(Tick d_spoof_attach_ms, Tick t_rec_ms, Tick t_rach_ms);
/// t_barr + t_rec + t_rach for the barring attack.
Tick d_supp_barr(Tick t_barr_ms, Tick t_rec_ms, Tick t_rach_ms);

struct VictimDurations {
  std::string supi;
  std::optional<Tick> window_start;   // first RRC message toward the rogue
  std::optional<Tick> window_end;     // last Attach Reject or last disconnection
  std::optional<Tick> d_spoof_ms;
  std::optional<Tick> t_barr_ms;
  std::optional<Tick> t_rec_ms;
  std::optional<Tick> t_rach_ms;
  std::optional<Tick> d_supp_ms;      // measured: attack start to reconnection
  int attach_rejects = 0;
};

struct Metrics {
  std::optional<std::string> variant;
  std::optional<Tick> d_spoof_ms;
  std::optional<Tick> d_supp_ms;
  std::optional<Tick> t_barr_ms;
  std::optional<Tick> t_rec_ms;
  std::optional<Tick> t_rach_ms;
  int spoofed_displayed_count = 0;
  int spoofed_rejected_count = 0;
  int legitimate_displayed_count = 0;
  int legitimate_rejected_count = 0;  // false rejections
  int discarded_count = 0;
  int suppressed_count = 0;           // (UE, completed warning) pairs never displayed
  int amf_completed_count = 0;
  int detected_spoof_count = 0;
  bool attack_succeeded = false;
  bool ims_emergency_available_final = true;
  std::vector<VictimDurations> victims;
};

/// Durations follow the first victim. Throws Errc::MalformedTrace when
/// required payload fields are missing.
Metrics measure_durations(const Trace& trace);

OrderedJson to_json(const Metrics& metrics);

}  // namespace pws
