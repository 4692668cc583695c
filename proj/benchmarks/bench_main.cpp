#include <benchmark/benchmark.h>

#include <string>

#include "pws/codec.hpp"
#include "pws/config.hpp"
#include "pws/experiments.hpp"
#include "pws/security.hpp"
#include "pws/simulation.hpp"

namespace {

pws::ScenarioConfig scenario(const std::string& name) {
  return pws::load_config(std::string(PWS_SCENARIO_DIR) + "/" + name + ".json");
}

pws::WarningMessage message(std::size_t length) {
  pws::WarningMessage m;
  m.message_identifier = pws::kCmasPresidential;
  m.serial_number = 0x3000;
  m.text.assign(length, 'A');
  return m;
}

void BM_Gsm7Encode(benchmark::State& state) {
  const std::string text(static_cast<std::size_t>(state.range(0)), 'x');
  for (auto _ : state) benchmark::DoNotOptimize(pws::encode_gsm7(text));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Gsm7Encode)->Arg(27)->Arg(1024);

void BM_SibRoundTrip(benchmark::State& state) {
  const auto m = message(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    const auto sib = pws::build_warning_sib(m, pws::NotificationPart::Primary);
    benchmark::DoNotOptimize(pws::parse_warning_sib(pws::serialize_record(sib)));
  }
}
BENCHMARK(BM_SibRoundTrip)->Arg(27)->Arg(1024);

void BM_SignVerify(benchmark::State& state) {
  const auto key = pws::KeyPair::from_seed("plmn", "bench");
  const auto sib = pws::build_warning_sib(message(90), pws::NotificationPart::Primary);
  for (auto _ : state) {
    const auto sig = pws::sign_sib(key, sib);
    benchmark::DoNotOptimize(pws::verify_sib(key.public_key(), sib, sig));
  }
}
BENCHMARK(BM_SignVerify);

void BM_RunScenario(benchmark::State& state, const char* name) {
  const auto cfg = scenario(name);
  for (auto _ : state) benchmark::DoNotOptimize(pws::run(cfg));
}
BENCHMARK_CAPTURE(BM_RunScenario, baseline, "baseline")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunScenario, spoof_mitm, "spoof_mitm")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_RunScenario, barring, "barring")->Unit(benchmark::kMillisecond);

void BM_BarringTrials(benchmark::State& state) {
  const auto cfg = scenario("barring_trial");
  for (auto _ : state) benchmark::DoNotOptimize(pws::run_trials(cfg, 2000, 1));
}
BENCHMARK(BM_BarringTrials)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
