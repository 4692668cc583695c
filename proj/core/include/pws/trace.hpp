#pragma once

// Structured run trace, written as JSON Lines with a fixed field order so
// that equal runs produce byte-identical files.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pws/entities.hpp"

namespace pws {

using OrderedJson = nlohmann::ordered_json;

struct TraceEvent {
  Tick tick = 0;
  std::string actor;
  std::string kind;
  OrderedJson payload = OrderedJson::object();

  bool operator==(const TraceEvent&) const = default;
};

class Trace {
 public:
  /// Throws Errc::MalformedTrace if `tick` precedes the last recorded tick.
  void record(Tick tick, std::string actor, std::string kind, OrderedJson payload = OrderedJson::object());

  const std::vector<TraceEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }

  std::vector<const TraceEvent*> of_kind(std::string_view kind) const;

  std::string to_jsonl() const;
  void write_jsonl(std::ostream& out) const;

  /// Throws Errc::MalformedTrace on bad JSON, missing fields or decreasing
  /// ticks.
  static Trace parse_jsonl(std::istream& in);
  static Trace parse_jsonl(std::string_view text);

 private:
  std::vector<TraceEvent> events_;
};

OrderedJson to_json(const TraceEvent& event);

}  // namespace pws
