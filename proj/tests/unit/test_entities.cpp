#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "pws/entities.hpp"
#include "pws/error.hpp"

using namespace pws;

namespace {

UeState idle_ue(std::uint32_t tmsi = 0x10A) {
  UeState ue;
  ue.supi = "imsi-001010000000001";
  ue.tmsi = tmsi;
  ue.power_cycle();
  ue.camp(1);
  return ue;
}

WarningSib etws_sib(std::uint16_t serial = 0x3000) {
  WarningMessage m;
  m.message_identifier = 0x1102;
  m.serial_number = serial;
  m.warning_type = 0x0580;
  m.text = "Tsunami warning";
  return build_warning_sib(m, NotificationPart::Primary);
}

WriteReplaceWarningRequest request(std::uint16_t id, std::uint16_t serial, bool cwm = false, int broadcasts = 3) {
  WriteReplaceWarningRequest r;
  r.message_identifier = id;
  r.serial_number = serial;
  r.cwm_indicator = cwm;
  r.number_of_broadcasts = broadcasts;
  WarningMessage m;
  m.message_identifier = id;
  m.serial_number = serial;
  m.warning_type = 0x0580;
  m.text = "x";
  r.warning_sib = build_warning_sib(m, NotificationPart::Primary);
  return r;
}

Gnb lab_gnb() { return Gnb(0x1234A, default_cells()); }

}  // namespace

TEST(RrcStateMachine, AllowedEdges) {
  using S = RrcState;
  EXPECT_TRUE(transition_allowed(S::Idle, S::Connected));
  EXPECT_TRUE(transition_allowed(S::Connected, S::Idle));
  EXPECT_TRUE(transition_allowed(S::Inactive, S::Idle));
  EXPECT_TRUE(transition_allowed(S::Connected, S::Inactive));
  EXPECT_TRUE(transition_allowed(S::Deregistered, S::Idle));
  for (auto s : {S::Idle, S::Inactive, S::Connected, S::Deregistered}) {
    EXPECT_TRUE(transition_allowed(s, S::Deregistered));
  }
  EXPECT_FALSE(transition_allowed(S::Idle, S::Inactive));
  EXPECT_FALSE(transition_allowed(S::Inactive, S::Connected));
  EXPECT_FALSE(transition_allowed(S::Deregistered, S::Connected));
}

TEST(RrcStateMachine, UeTransitions) {
  UeState ue;
  EXPECT_EQ(ue.rrc_state(), RrcState::Deregistered);
  EXPECT_THROW(ue.connect(1), Error);
  ue.power_cycle();
  EXPECT_EQ(ue.rrc_state(), RrcState::Idle);
  EXPECT_FALSE(ue.camped_cell());
  ue.camp(1);
  ue.connect(1);
  EXPECT_EQ(ue.serving_cell(), 1);
  EXPECT_THROW(ue.resume_to_idle(), Error);
  ue.handover(2);
  EXPECT_EQ(ue.serving_cell(), 2);
  ue.suspend();
  EXPECT_EQ(ue.rrc_state(), RrcState::Inactive);
  EXPECT_FALSE(ue.serving_cell());
  ue.resume_to_idle();
  EXPECT_EQ(ue.rrc_state(), RrcState::Idle);
  ue.deregister();
  EXPECT_THROW(ue.camp(1), Error);
}

TEST(RrcStateMachine, RandomWalkStaysOnAllowedEdges) {
  std::mt19937_64 gen(5);
  UeState ue;
  for (int i = 0; i < 5000; ++i) {
    const auto before = ue.rrc_state();
    try {
      switch (gen() % 7) {
        case 0: ue.camp(1); break;
        case 1: ue.connect(1); break;
        case 2: ue.handover(2); break;
        case 3: ue.release_to_idle(); break;
        case 4: ue.suspend(); break;
        case 5: ue.resume_to_idle(); break;
        default: gen() % 2 ? ue.deregister() : ue.power_cycle(); break;
      }
    } catch (const Error& e) {
      ASSERT_EQ(e.code(), Errc::IllegalTransition);
      ASSERT_EQ(ue.rrc_state(), before);
      continue;
    }
    const auto after = ue.rrc_state();
    ASSERT_TRUE(after == before || transition_allowed(before, after));
    ASSERT_EQ(ue.serving_cell().has_value(), after == RrcState::Connected);
  }
}

TEST(Paging, OccasionsPartitionCycle) {
  DrxConfig drx;
  for (std::uint32_t tmsi : {0u, 0x10Au, 0x2F5u, 1279u, 1280u, 99999u}) {
    const auto ue = idle_ue(tmsi);
    int hits = 0;
    for (Tick t = 5 * drx.cycle_length_ticks; t < 6 * drx.cycle_length_ticks; ++t) {
      if (is_paging_check(ue, t, drx)) {
        ++hits;
        EXPECT_EQ(t % drx.cycle_length_ticks, ue_paging_occasion(tmsi, drx));
      }
    }
    EXPECT_EQ(hits, 1) << tmsi;
  }
}

TEST(Paging, NextCheck) {
  DrxConfig drx;
  auto ue = idle_ue(0x10A);
  EXPECT_EQ(next_paging_check(ue, 0, drx), 0x10A);
  EXPECT_EQ(next_paging_check(ue, 0x10A, drx), 0x10A + 1280);
  ue.connect(1);
  EXPECT_EQ(next_paging_check(ue, 0, drx), 5120);
  EXPECT_EQ(next_paging_check(ue, 5120, drx), 10240);
  ue.deregister();
  EXPECT_FALSE(next_paging_check(ue, 0, drx));
}

TEST(UeTick, ReadsOnlyOnPwsIndication) {
  DrxConfig drx;
  const auto ue = idle_ue(0x10A);
  CellView view;
  view.scheduled.push_back(etws_sib());
  auto r = ue_tick(ue, 0x10A, view, drx);
  EXPECT_FALSE(r.paging);
  EXPECT_TRUE(r.read.empty());

  view.paging_for_idle = build_pws_paging(true);
  r = ue_tick(ue, 0x10A + 1, view, drx);
  EXPECT_TRUE(r.read.empty());
  r = ue_tick(ue, 0x10A, view, drx);
  ASSERT_TRUE(r.paging);
  EXPECT_EQ(r.paging->p_rnti(), 0xFFFE);
  EXPECT_EQ(r.read, std::vector<std::size_t>{0});
}

TEST(UeTick, SkipsAlreadyDisplayed) {
  DrxConfig drx;
  auto ue = idle_ue(0);
  CellView view;
  view.paging_for_idle = build_pws_paging(true);
  view.scheduled = {etws_sib(0x3000), etws_sib(0x3001)};
  ue_receive_warning(ue, view.scheduled[0], 0, {});
  EXPECT_EQ(ue_tick(ue, 1280, view, drx).read, std::vector<std::size_t>{1});
}

TEST(ReceiveWarning, Outcomes) {
  auto ue = idle_ue();
  EXPECT_EQ(ue_receive_warning(ue, etws_sib(), 10, {}), WarningOutcome::Displayed);
  EXPECT_TRUE(ue.has_displayed(0x1102, 0x3000));

  WarningMessage t;
  t.message_identifier = kDefaultTestIdentifier;
  t.serial_number = 1;
  t.warning_type = 0;
  t.text = "test";
  EXPECT_EQ(ue_receive_warning(ue, build_warning_sib(t, NotificationPart::Primary), 20, {}),
            WarningOutcome::Discarded);

  WarningMessage c;
  c.message_identifier = 0x1112;
  c.serial_number = 7;
  c.text = "cmas";
  EXPECT_EQ(ue_receive_warning(ue, build_warning_sib(c, NotificationPart::Primary), 30, {}),
            WarningOutcome::Displayed);

  ue.verifies_warnings = true;
  auto unsigned_sib = etws_sib(0x3005);
  EXPECT_EQ(ue_receive_warning(ue, unsigned_sib, 40, {}), WarningOutcome::Rejected);
  ASSERT_EQ(ue.received_warnings.size(), 4u);
  EXPECT_FALSE(ue.received_warnings[1].displayed);
  EXPECT_FALSE(ue.received_warnings[3].displayed);
}

TEST(AttachReject, FifthRejectDeregisters) {
  auto ue = idle_ue();
  ue.connect(1);
  ue.ims_emergency_available = true;
  for (int i = 1; i < 5; ++i) {
    const auto o = ue_handle_attach_reject(ue, i * 1000, 8000);
    EXPECT_FALSE(o.deregistered);
    EXPECT_EQ(o.retry_at, i * 1000 + 8000);
  }
  const auto o = ue_handle_attach_reject(ue, 9000, 8000);
  EXPECT_TRUE(o.deregistered);
  EXPECT_FALSE(o.retry_at);
  EXPECT_EQ(ue.rrc_state(), RrcState::Deregistered);
  EXPECT_FALSE(ue.ims_emergency_available);

  ue.mib_cache[1] = {Mib{CellBarred::Barred, IntraFreqReselection::NotAllowed}, 0};
  ue_recover(ue, RecoveryEvent::AirplaneToggle);
  EXPECT_EQ(ue.rrc_state(), RrcState::Idle);
  EXPECT_EQ(ue.attach_attempts, 0);
  EXPECT_TRUE(ue.mib_cache.empty());
}

TEST(MibCache, StoreIgnoreRefresh) {
  auto ue = idle_ue();
  const Mib barred{CellBarred::Barred, IntraFreqReselection::NotAllowed};
  const Mib open{};
  EXPECT_EQ(ue_store_mib(ue, 1, barred, 1000, 300000), MibStoreResult::Stored);
  EXPECT_EQ(ue_store_mib(ue, 1, open, 11000, 300000), MibStoreResult::Ignored);
  EXPECT_EQ(cached_mib(ue, 1, 11000, 300000), barred);
  EXPECT_EQ(ue_store_mib(ue, 1, open, 300999, 300000), MibStoreResult::Ignored);
  EXPECT_FALSE(cached_mib(ue, 1, 301000, 300000));
  EXPECT_EQ(ue_store_mib(ue, 1, open, 301000, 300000), MibStoreResult::Refreshed);
  EXPECT_EQ(cached_mib(ue, 1, 301000, 300000), open);
  EXPECT_EQ(ue_store_mib(ue, 2, open, 301000, 300000), MibStoreResult::Stored);
}

TEST(WriteReplace, DuplicateBroadcastOnceTwoResponses) {
  auto gnb = lab_gnb();
  const auto req = request(0x1102, 0x3000);
  const auto a = gnb.write_replace(req, 0);
  const auto b = gnb.write_replace(req, 100);
  EXPECT_FALSE(a.response.duplicate);
  EXPECT_TRUE(b.response.duplicate);
  EXPECT_EQ(a.started.size(), 2u);
  EXPECT_TRUE(b.started.empty());
  EXPECT_EQ(gnb.active_on(1).size(), 1u);
  EXPECT_EQ(gnb.active_on(2).size(), 1u);
}

TEST(WriteReplace, CwmConcurrentVersusReplace) {
  auto gnb = lab_gnb();
  gnb.write_replace(request(0x1102, 0x3000), 0);
  gnb.write_replace(request(0x1112, 0x3001, true), 0);
  EXPECT_EQ(gnb.active_on(1).size(), 2u);
  const auto r = gnb.write_replace(request(0x1113, 0x3002, false), 0);
  EXPECT_EQ(r.replaced.size(), 4u);
  ASSERT_EQ(gnb.active_on(1).size(), 1u);
  EXPECT_EQ(gnb.active_on(1)[0]->request.message_identifier, 0x1113);
}

TEST(WriteReplace, PagingUsesPrnti) {
  auto gnb = lab_gnb();
  const auto r = gnb.write_replace(request(0x1102, 0x3000), 0);
  ASSERT_EQ(r.paging.size(), 2u);
  for (const auto& [cell, p] : r.paging) {
    EXPECT_EQ(p.p_rnti(), 65534);
    EXPECT_TRUE(p.short_message_pws_indication());
  }
}

TEST(WriteReplace, BroadcastBudget) {
  auto gnb = lab_gnb();
  const auto r = gnb.write_replace(request(0x1102, 0x3000, false, 4), 0);
  int emitted = 0;
  for (int i = 0; i < 10; ++i) emitted += gnb.consume_broadcast(r.started[0]) ? 1 : 0;
  EXPECT_EQ(emitted, 4);
  EXPECT_FALSE(gnb.find_schedule(r.started[0])->active());
  EXPECT_FALSE(gnb.consume_broadcast(999));
}

TEST(WriteReplace, StopWarning) {
  auto gnb = lab_gnb();
  gnb.write_replace(request(0x1102, 0x3000), 0);
  EXPECT_TRUE(gnb.stop_warning(0x1102, 0x3000));
  EXPECT_FALSE(gnb.stop_warning(0x1102, 0x3000));
  EXPECT_TRUE(gnb.active_on(1).empty());
}

TEST(WriteReplace, RangeValidation) {
  auto req = request(0x1102, 0x3000);
  req.number_of_broadcasts = 0;
  EXPECT_THROW(validate(req), Error);
  req.number_of_broadcasts = kMaxNumberOfBroadcasts + 1;
  EXPECT_THROW(validate(req), Error);
  req.number_of_broadcasts = kMaxNumberOfBroadcasts;
  req.repetition_period_s = kMaxRepetitionPeriod + 1;
  EXPECT_THROW(validate(req), Error);
}

TEST(Amf, ConfirmAndConclude) {
  std::vector<Gnb> gnbs{lab_gnb()};
  Amf amf("amf-1", {0x1234A});
  auto req = request(0x1102, 0x3000);
  req.warning_area_list = {100, 999};
  const auto fwd = amf.forward(req, gnbs);
  EXPECT_EQ(fwd.confirm.unknown_tacs, std::vector<std::uint32_t>{999});
  EXPECT_EQ(fwd.targets, std::vector<std::size_t>{0});

  req.warning_area_list.clear();
  EXPECT_EQ(amf.forward(req, gnbs).targets.size(), 1u);

  const auto resp = gnbs[0].write_replace(req, 0).response;
  const auto rec = amf.conclude(req, std::span<const WriteReplaceResponse>(&resp, 1));
  EXPECT_EQ(rec.outcome, TraceOutcome::Completed);
  EXPECT_EQ(rec.broadcast_completed_areas, std::vector<std::uint32_t>{100});
  EXPECT_EQ(amf.conclude(req, {}).outcome, TraceOutcome::Failed);
}

TEST(Cbcf, SubmitSignsWhenKeyed) {
  std::vector<Gnb> gnbs{lab_gnb()};
  Cbcf plain({Amf("amf-1", {0x1234A})}, std::nullopt);
  Cbcf keyed({Amf("amf-1", {0x1234A})}, KeyPair::from_seed("plmn", "seed"));
  WarningMessage m;
  m.message_identifier = 0x1112;
  m.serial_number = 1;
  m.text = "alert";
  const std::vector<std::uint32_t> area{100};
  EXPECT_FALSE(cbe_submit(plain, m, area, {}).warning_sib.signature);
  const auto req = cbe_submit(keyed, m, area, {});
  ASSERT_TRUE(req.warning_sib.signature);
  EXPECT_TRUE(verify_sib(keyed.signing_key()->public_key(), req.warning_sib, *req.warning_sib.signature));
  EXPECT_THROW(cbe_submit(plain, m, {}, {}), Error);
  EXPECT_EQ(plain.select_amfs(req, gnbs), std::vector<std::size_t>{0});
}
