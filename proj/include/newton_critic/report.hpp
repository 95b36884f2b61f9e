#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "newton_critic/critical.hpp"
#include "newton_critic/degeneracy.hpp"
#include "newton_critic/probe.hpp"
#include "newton_critic/resolution.hpp"

namespace nc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "newton-critic/1";

// {"exact": "5/2", "decimal": 2.5}; infinity is {"exact": "inf", "decimal": null}
Json rational_json(const Rational& q);
Json rational_json(const ExtRational& q);
Rational rational_from_json(const Json& j);

Json to_json(const Certification& c);
Json to_json(const ExponentPair& e);
Json to_json(const NewtonDiagram& d);
Json to_json(const Classification& c);
Json to_json(const TraceEvent& e);
Json to_json(const CriticalReport& r, bool with_trace);
Json to_json(const RegionNode& n);
Json to_json(const RegionTree& t);
Json to_json(const VerifyReport& r);
Json to_json(const ProbeReport& r);
Json to_json(const BlowupReport& r);

TraceEvent trace_event_from_json(const Json& j);

struct Report {
  std::string command;
  Json input = Json::object();
  Json result;  // null when the command failed before producing anything
  Json certification;
  double elapsed_ms = 0;
  int exit_code = 0;
  struct Failure {
    std::string code;
    std::string message;
    std::optional<std::size_t> offset;
    bool operator==(const Failure&) const = default;
  };
  std::optional<Failure> error;

  Json to_json() const;
  static Report from_json(const Json& j);
  bool operator==(const Report& other) const;
};

}  // namespace nc
