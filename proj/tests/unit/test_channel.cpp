#include <gtest/gtest.h>

#include "pws/channel.hpp"
#include "pws/error.hpp"

using namespace pws;

TEST(GainDelta, AbsoluteDifference) {
  EXPECT_DOUBLE_EQ(gain_delta(-50.0, -60.0), 10.0);
  EXPECT_DOUBLE_EQ(gain_delta(-60.0, -50.0), 10.0);
  EXPECT_DOUBLE_EQ(gain_delta(0.0, -120.0), 120.0);
  EXPECT_THROW(gain_delta(1.0, -60.0), Error);
  EXPECT_THROW(gain_delta(-60.0, -120.5), Error);
}

TEST(AttackSuccess, DeterministicThreshold) {
  Rng rng(1);
  EXPECT_TRUE(attack_success(10.0, SuccessMode::Deterministic, rng));
  EXPECT_FALSE(attack_success(9.99, SuccessMode::Deterministic, rng));
  EXPECT_FALSE(attack_success(5.0, SuccessMode::Deterministic, rng));
  EXPECT_TRUE(attack_success(30.0, SuccessMode::Deterministic, rng, SuccessRule::attachment()));
  EXPECT_FALSE(attack_success(29.0, SuccessMode::Deterministic, rng, SuccessRule::attachment()));
}

TEST(AttackSuccess, StochasticBandsOnly) {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    EXPECT_FALSE(attack_success(4.99, SuccessMode::Stochastic, rng));
    EXPECT_TRUE(attack_success(10.0, SuccessMode::Stochastic, rng));
  }
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += attack_success(5.0, SuccessMode::Stochastic, rng) ? 1 : 0;
  EXPECT_NEAR(hits / 10000.0, 0.9, 0.02);
}

TEST(AttackSuccess, NoRngDrawOutsidePartialBand) {
  Rng a(3);
  Rng b(3);
  attack_success(12.0, SuccessMode::Stochastic, a);
  attack_success(1.0, SuccessMode::Stochastic, a);
  EXPECT_EQ(a.next(), b.next());
}

TEST(BarringDecision, Table) {
  Mib open;
  Sib1 plain;
  EXPECT_EQ(barring_decision(open, plain, 0), AccessDecision::Allowed);

  Mib barred{CellBarred::Barred, IntraFreqReselection::Allowed};
  EXPECT_EQ(barring_decision(barred, plain, 0), AccessDecision::Barred);
  Mib barred_band{CellBarred::Barred, IntraFreqReselection::NotAllowed};
  EXPECT_EQ(barring_decision(barred_band, plain, 0), AccessDecision::BarredNoIntraFreqReselection);

  Sib1 reserved{CellReservation::Reserved, true};
  EXPECT_EQ(barring_decision(open, reserved, 0), AccessDecision::Barred);
  EXPECT_EQ(barring_decision(open, reserved, 11), AccessDecision::AllowedSelectionOnly);
  EXPECT_EQ(barring_decision(open, reserved, 15), AccessDecision::AllowedSelectionOnly);
  EXPECT_EQ(barring_decision(open, reserved, 1), AccessDecision::Barred);
}

TEST(BarringDecision, AccessIdentities) {
  for (int ai : {0, 1, 2, 11, 12, 13, 14, 15}) EXPECT_TRUE(is_known_access_identity(ai)) << ai;
  for (int ai : {-1, 3, 7, 10, 16}) EXPECT_FALSE(is_known_access_identity(ai)) << ai;
  try {
    barring_decision(Mib{}, Sib1{}, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownAccessIdentity);
  }
}

TEST(RankCells, OrderAndErrors) {
  auto cells = default_cells();
  ASSERT_EQ(cells.size(), 2u);
  cells[0].gain_db = -70.0;
  cells[1].gain_db = -50.0;
  auto ranked = rank_cells(cells);
  EXPECT_EQ(ranked[0].cell_id, 2);

  cells[0].gain_db = cells[1].gain_db;
  cells[0].sib2.cell_reselection_priority = 5;
  ranked = rank_cells(cells);
  EXPECT_EQ(ranked[0].cell_id, 1);

  cells[0].sib2.cell_reselection_priority = cells[1].sib2.cell_reselection_priority;
  ranked = rank_cells(cells);
  EXPECT_EQ(ranked[0].cell_id, 1);

  EXPECT_THROW(rank_cells({}), Error);
}

TEST(CellConfig, Validation) {
  CellConfig c;
  EXPECT_NO_THROW(validate(c));
  c.gain_db = 3.0;
  EXPECT_THROW(validate(c), Error);
  c.gain_db = -60.0;
  c.sib2.cell_reselection_priority = 8;
  EXPECT_THROW(validate(c), Error);
}

TEST(DefaultCells, LabNetwork) {
  const auto cells = default_cells();
  EXPECT_EQ(cells[0].plmn, "00101");
  EXPECT_EQ(cells[0].gnb_id, 0x1234Au);
  EXPECT_EQ(cells[0].tac, 100u);
  EXPECT_EQ(cells[0].n_id_cell, 500);
  EXPECT_EQ(cells[1].n_id_cell, 501);
}
