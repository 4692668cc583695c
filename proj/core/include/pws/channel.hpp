#pragma once

// Abstract radio environment: cell broadcast configuration, gain comparison,
// UE-side access control, and the attacker's signal-dominance rule.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pws/rng.hpp"

namespace pws {

enum class CellBarred { Barred, NotBarred };
enum class IntraFreqReselection { Allowed, NotAllowed };
enum class CellReservation { Reserved, NotReserved };

struct Mib {
  CellBarred cell_barred = CellBarred::NotBarred;
  IntraFreqReselection intra_freq_reselection = IntraFreqReselection::Allowed;

  bool operator==(const Mib&) const = default;
};

struct Sib1 {
  CellReservation cell_reserved_for_operator_use = CellReservation::NotReserved;
  bool ims_emergency_support = true;

  bool operator==(const Sib1&) const = default;
};

struct Sib2 {
  int cell_reselection_priority = 0;  // 0..7

  bool operator==(const Sib2&) const = default;
};

inline constexpr double kMinGainDb = -120.0;
inline constexpr double kMaxGainDb = 0.0;

struct CellConfig {
  std::uint8_t cell_id = 0;
  std::uint32_t gnb_id = 0;
  std::string plmn = "00101";
  std::uint32_t tac = 100;
  int n_id_cell = 0;
  std::string frequency_band = "n78";
  double gain_db = -60.0;
  bool legitimate = true;
  Mib mib;
  Sib1 sib1;
  Sib2 sib2;

  bool operator==(const CellConfig&) const = default;
};

/// Throws Errc::OutOfRange for gain or priority outside their domains.
void validate(const CellConfig& cell);

enum class AccessDecision { Allowed, AllowedSelectionOnly, Barred, BarredNoIntraFreqReselection };

std::string_view to_string(AccessDecision d);
std::string_view to_string(CellBarred v);
std::string_view to_string(IntraFreqReselection v);
std::string_view to_string(CellReservation v);

inline bool is_barred(AccessDecision d) {
  return d == AccessDecision::Barred || d == AccessDecision::BarredNoIntraFreqReselection;
}

enum class SuccessMode { Deterministic, Stochastic };

/// Gain-dominance rule for an attacker transmission. Deterministically the
/// attack lands iff delta >= full_db. In stochastic mode it also lands with
/// probability partial_rate when partial_db <= delta < full_db.
struct SuccessRule {
  double full_db = 10.0;
  double partial_db = 5.0;
  double partial_rate = 0.9;

  static SuccessRule barring() { return {10.0, 5.0, 0.9}; }
  /// Malicious attachment needs a larger margin; no partial-success data
  /// exists for it, so the partial band is empty.
  static SuccessRule attachment() { return {30.0, 30.0, 1.0}; }
};

/// |g - g_prime|. Both gains must lie in [-120, 0] dB (Errc::OutOfRange).
double gain_delta(double g, double g_prime);

/// Samples `rng` only inside the partial band in stochastic mode.
bool attack_success(double delta, SuccessMode mode, Rng& rng, const SuccessRule& rule = SuccessRule::barring());

/// Access identities accepted: 0, 1, 2, 11..15 (Errc::UnknownAccessIdentity).
AccessDecision barring_decision(const Mib& mib, const Sib1& sib1, int access_identity);

bool is_known_access_identity(int access_identity) noexcept;

/// Strict weak order used by rank_cells: gain desc, reselection priority
/// desc, cell_id asc.
bool ranks_before(const CellConfig& a, const CellConfig& b) noexcept;

/// Sorted copy of `visible`. Throws Errc::EmptySet for an empty input.
std::vector<CellConfig> rank_cells(std::span<const CellConfig> visible);

/// Lab network: PLMN 00101, gNB 0x1234A, TAC 100, cells 0x01
/// and 0x02 with N_ID_cell 500/501.
std::vector<CellConfig> default_cells();

}  // namespace pws
