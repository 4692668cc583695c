#include "pws/channel.hpp"

#include <algorithm>
#include <cmath>

#include "pws/error.hpp"

namespace pws {

void validate(const CellConfig& cell) {
  if (!(cell.gain_db >= kMinGainDb && cell.gain_db <= kMaxGainDb)) {
    throw Error(Errc::OutOfRange, "gain_db must be within [-120, 0]");
  }
  if (cell.sib2.cell_reselection_priority < 0 || cell.sib2.cell_reselection_priority > 7) {
    throw Error(Errc::OutOfRange, "cell_reselection_priority must be within [0, 7]");
  }
  if (cell.plmn.size() < 5 || cell.plmn.size() > 6 ||
      !std::all_of(cell.plmn.begin(), cell.plmn.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(Errc::OutOfRange, "plmn must be 5 or 6 digits");
  }
}

std::string_view to_string(AccessDecision d) {
  switch (d) {
    case AccessDecision::Allowed: return "Allowed";
    case AccessDecision::AllowedSelectionOnly: return "AllowedSelectionOnly";
    case AccessDecision::Barred: return "Barred";
    case AccessDecision::BarredNoIntraFreqReselection: return "BarredNoIntraFreqReselection";
  }
  return "Unknown";
}

std::string_view to_string(CellBarred v) { return v == CellBarred::Barred ? "barred" : "notBarred"; }
std::string_view to_string(IntraFreqReselection v) {
  return v == IntraFreqReselection::Allowed ? "allowed" : "notAllowed";
}
std::string_view to_string(CellReservation v) {
  return v == CellReservation::Reserved ? "reserved" : "notReserved";
}

double gain_delta(double g, double g_prime) {
  auto in_range = [](double x) { return x >= kMinGainDb && x <= kMaxGainDb; };
  if (!in_range(g) || !in_range(g_prime)) {
    throw Error(Errc::OutOfRange, "cell gains must be within [-120, 0] dB");
  }
  return std::fabs(g - g_prime);
}

bool attack_success(double delta, SuccessMode mode, Rng& rng, const SuccessRule& rule) {
  if (delta >= rule.full_db) return true;
  if (mode == SuccessMode::Deterministic) return false;
  if (delta >= rule.partial_db) return rng.bernoulli(rule.partial_rate);
  return false;
}

bool is_known_access_identity(int id) noexcept {
  switch (id) {
    case 0: case 1: case 2: case 11: case 12: case 13: case 14: case 15:
      return true;
    default:
      return false;
  }
}

AccessDecision barring_decision(const Mib& mib, const Sib1& sib1, int access_identity) {
  if (!is_known_access_identity(access_identity)) {
    throw Error(Errc::UnknownAccessIdentity, "unknown access identity " + std::to_string(access_identity));
  }
  if (mib.cell_barred == CellBarred::Barred) {
    return mib.intra_freq_reselection == IntraFreqReselection::NotAllowed
               ? AccessDecision::BarredNoIntraFreqReselection
               : AccessDecision::Barred;
  }
  if (sib1.cell_reserved_for_operator_use == CellReservation::Reserved) {
    // 11 (PLMN use) and 15 (PLMN staff) may still select the cell.
    return (access_identity == 11 || access_identity == 15) ? AccessDecision::AllowedSelectionOnly
                                                             : AccessDecision::Barred;
  }
  return AccessDecision::Allowed;
}

bool ranks_before(const CellConfig& a, const CellConfig& b) noexcept {
  if (a.gain_db != b.gain_db) return a.gain_db > b.gain_db;
  if (a.sib2.cell_reselection_priority != b.sib2.cell_reselection_priority) {
    return a.sib2.cell_reselection_priority > b.sib2.cell_reselection_priority;
  }
  return a.cell_id < b.cell_id;
}

std::vector<CellConfig> rank_cells(std::span<const CellConfig> visible) {
  if (visible.empty()) throw Error(Errc::EmptySet, "no visible cells to rank");
  std::vector<CellConfig> out(visible.begin(), visible.end());
  std::stable_sort(out.begin(), out.end(), ranks_before);
  return out;
}

std::vector<CellConfig> default_cells() {
  CellConfig a;
  a.cell_id = 0x01;
  a.gnb_id = 0x1234A;
  a.n_id_cell = 500;
  a.gain_db = -60.0;
  a.sib2.cell_reselection_priority = 5;
  CellConfig b = a;
  b.cell_id = 0x02;
  b.n_id_cell = 501;
  b.gain_db = -70.0;
  return {a, b};
}

}  // namespace pws
