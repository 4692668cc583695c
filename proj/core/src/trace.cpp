#include "pws/trace.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "pws/error.hpp"

namespace pws {

void Trace::record(Tick tick, std::string actor, std::string kind, OrderedJson payload) {
  if (!events_.empty() && tick < events_.back().tick) {
    throw Error(Errc::MalformedTrace, "trace tick " + std::to_string(tick) + " precedes " +
                                          std::to_string(events_.back().tick));
  }
  events_.push_back({tick, std::move(actor), std::move(kind), std::move(payload)});
}

std::vector<const TraceEvent*> Trace::of_kind(std::string_view kind) const {
  std::vector<const TraceEvent*> out;
  for (const auto& e : events_) {
    if (e.kind == kind) out.push_back(&e);
  }
  return out;
}

OrderedJson to_json(const TraceEvent& event) {
  OrderedJson j;
  j["tick"] = event.tick;
  j["actor"] = event.actor;
  j["kind"] = event.kind;
  j["payload"] = event.payload;
  return j;
}

std::string Trace::to_jsonl() const {
  std::ostringstream out;
  write_jsonl(out);
  return out.str();
}

void Trace::write_jsonl(std::ostream& out) const {
  for (const auto& e : events_) out << to_json(e).dump() << '\n';
}

Trace Trace::parse_jsonl(std::istream& in) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    OrderedJson j;
    try {
      j = OrderedJson::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::MalformedTrace, "line " + std::to_string(line_no) + ": " + e.what(), line_no);
    }
    if (!j.is_object() || !j.contains("tick") || !j["tick"].is_number_integer() || !j.contains("actor") ||
        !j["actor"].is_string() || !j.contains("kind") || !j["kind"].is_string()) {
      throw Error(Errc::MalformedTrace, "line " + std::to_string(line_no) + ": missing tick/actor/kind", line_no);
    }
    OrderedJson payload = j.contains("payload") ? j["payload"] : OrderedJson::object();
    trace.record(j["tick"].get<Tick>(), j["actor"].get<std::string>(), j["kind"].get<std::string>(),
                 std::move(payload));
  }
  return trace;
}

Trace Trace::parse_jsonl(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_jsonl(in);
}

}  // namespace pws
