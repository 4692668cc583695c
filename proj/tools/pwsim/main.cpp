// pwsim: command-line front end for the PWS attack simulator.
//
//   pwsim run --scenario scenarios/barring.json [--seed N] [--trace out.jsonl]
//   pwsim matrix
//   pwsim codec encode --id 0x1102 --serial 0x3000 --warning-type 0x0580 --text "..."
//   pwsim codec decode [HEX]          (reads stdin when HEX is omitted)
//   pwsim trials --scenario scenarios/barring_trial.json --n 2000
//
// Exit status: 0 success, 1 runtime failure, 2 configuration or usage error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pws/codec.hpp"
#include "pws/config.hpp"
#include "pws/error.hpp"
#include "pws/experiments.hpp"
#include "pws/simulation.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

std::uint16_t parse_u16(const std::string& s) {
  std::size_t pos = 0;
  const unsigned long v = std::stoul(s, &pos, 0);
  if (pos != s.size() || v > 0xFFFF) throw pws::Error(pws::Errc::InvalidConfig, "not a 16-bit value: " + s);
  return static_cast<std::uint16_t>(v);
}

int cmd_run(const std::string& scenario, std::optional<std::uint64_t> seed, const std::string& trace_path) {
  auto config = pws::load_config(scenario);
  if (seed) config.seed = *seed;
  const auto result = pws::run(config);
  if (!trace_path.empty()) {
    std::ofstream out(trace_path, std::ios::binary);
    if (!out) throw pws::Error(pws::Errc::InvalidConfig, "cannot write " + trace_path);
    result.trace.write_jsonl(out);
  }
  std::cout << pws::to_json(result.metrics).dump(2) << '\n';
  return 0;
}

const char* yes_no(bool b) { return b ? "Yes" : "No"; }

int cmd_matrix(bool as_json) {
  const auto rows = pws::verification_matrix();
  bool agree = true;
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  if (!as_json) {
    std::cout << "Security support  Verification  | Spoofing  Suppression  False rejection | empirical\n";
  }
  for (const auto& r : rows) {
    const bool same = r.analytic == r.empirical;
    agree = agree && same;
    if (as_json) {
      nlohmann::ordered_json row;
      row["plmn_signs"] = r.policy.plmn_signs;
      row["ue_verifies"] = r.policy.ue_verifies;
      row["analytic"] = {{"spoofing", r.analytic.spoofing_possible},
                         {"suppression", r.analytic.suppression_possible},
                         {"false_rejection", r.analytic.false_rejection_possible}};
      row["empirical"] = {{"spoofing", r.empirical.spoofing_possible},
                          {"suppression", r.empirical.suppression_possible},
                          {"false_rejection", r.empirical.false_rejection_possible}};
      row["agree"] = same;
      j.push_back(row);
      continue;
    }
    std::printf("%-17s %-13s | %-9s %-12s %-15s | %s %s %s  %s\n", yes_no(r.policy.plmn_signs),
                yes_no(r.policy.ue_verifies), yes_no(r.analytic.spoofing_possible),
                yes_no(r.analytic.suppression_possible), yes_no(r.analytic.false_rejection_possible),
                yes_no(r.empirical.spoofing_possible), yes_no(r.empirical.suppression_possible),
                yes_no(r.empirical.false_rejection_possible), same ? "ok" : "MISMATCH");
  }
  if (as_json) std::cout << j.dump(2) << '\n';
  return agree ? 0 : kExitRuntime;
}

nlohmann::ordered_json describe(const pws::WarningSib& sib) {
  nlohmann::ordered_json j;
  j["sib"] = static_cast<int>(sib.sib_kind);
  j["kind"] = pws::to_string(pws::classify_message_identifier(sib.message.message_identifier));
  j["message_identifier"] = sib.message.message_identifier;
  j["serial_number"] = sib.message.serial_number;
  j["warning_type"] = sib.message.warning_type ? nlohmann::ordered_json(*sib.message.warning_type)
                                               : nlohmann::ordered_json(nullptr);
  j["data_coding_scheme"] = sib.message.data_coding_scheme;
  j["septets"] = sib.septet_count;
  j["pages"] = sib.pages.size();
  j["text"] = sib.message.text;
  j["signed"] = sib.signature.has_value();
  return j;
}

int cmd_encode(const std::string& id, const std::string& serial, const std::string& warning_type,
               const std::string& text, bool secondary, int local_id) {
  pws::WarningMessage m;
  m.local_identifier = local_id;
  m.message_identifier = parse_u16(id);
  m.serial_number = parse_u16(serial);
  if (!warning_type.empty()) m.warning_type = parse_u16(warning_type);
  m.text = text;
  const auto sib =
      pws::build_warning_sib(m, secondary ? pws::NotificationPart::Secondary : pws::NotificationPart::Primary);
  std::cout << pws::to_hex(pws::serialize_record(sib)) << '\n';
  return 0;
}

int cmd_decode(std::string hex) {
  if (hex.empty()) hex.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  const auto bytes = pws::from_hex(hex);
  const auto sib = pws::parse_warning_sib(bytes);
  std::cout << describe(sib).dump(2) << '\n';
  return 0;
}

int cmd_trials(const std::string& scenario, int n, unsigned threads, std::optional<std::uint64_t> seed) {
  auto config = pws::load_config(scenario);
  if (seed) config.seed = *seed;
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = pws::run_trials(config, n, threads);
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  nlohmann::ordered_json j;
  j["scenario"] = config.name;
  j["trials"] = s.trials;
  j["successes"] = s.successes;
  j["rate"] = s.rate();
  j["elapsed_s"] = elapsed;
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic simulator of attacks on the 5G Public Warning System"};
  app.require_subcommand(1);

  std::string scenario;
  std::string trace_path;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run one scenario and print its metrics");
  run->add_option("--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--trace", trace_path, "Write the JSON Lines trace here");

  bool matrix_json = false;
  auto* matrix = app.add_subcommand("matrix", "Print the analytic and empirical verification matrix");
  matrix->add_flag("--json", matrix_json, "Emit JSON instead of a table");

  auto* codec = app.add_subcommand("codec", "Encode or decode warning SIB records (hex)");
  codec->require_subcommand(1);
  std::string id = "0x1102";
  std::string serial = "0x3000";
  std::string warning_type;
  std::string text;
  bool secondary = false;
  int local_id = 0;
  auto* encode = codec->add_subcommand("encode", "Build a warning SIB and print its record");
  encode->add_option("--id", id, "Message identifier");
  encode->add_option("--serial", serial, "Serial number");
  encode->add_option("--warning-type", warning_type, "ETWS warning type (primary notifications)");
  encode->add_option("--text", text, "Warning text (GSM 7-bit default alphabet subset)")->required();
  encode->add_option("--local-id", local_id, "Local identifier");
  encode->add_flag("--secondary", secondary, "Build a secondary notification");
  std::string hex;
  auto* decode = codec->add_subcommand("decode", "Parse a record given as hex");
  decode->add_option("hex", hex, "Record bytes; read from stdin when omitted");

  int n = 2000;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto* trials = app.add_subcommand("trials", "Estimate attack success rate over seeded trials");
  trials->add_option("--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  trials->add_option("--n", n, "Number of trials")->check(CLI::NonNegativeNumber);
  trials->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  trials->add_option("--seed", seed, "Override the base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(scenario, seed, trace_path);
    if (*matrix) return cmd_matrix(matrix_json);
    if (*encode) return cmd_encode(id, serial, warning_type, text, secondary, local_id);
    if (*decode) return cmd_decode(hex);
    if (*trials) return cmd_trials(scenario, n, threads, seed);
  } catch (const pws::Error& e) {
    std::cerr << "pwsim: " << pws::to_string(e.code()) << ": " << e.what() << '\n';
    return e.code() == pws::Errc::InvalidConfig ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "pwsim: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
