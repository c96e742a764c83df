#pragma once

// Trace files: JSON Lines. Line 1 is a header object carrying the objective,
// the full configuration (seed included), the termination reason and the
// evaluation count; every following line is one iteration record. Doubles are
// written in shortest round-trip form and +inf objective values as null, so
// reading a written trace gives back the identical Trace.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ddsm/engine.hpp"

namespace ddsm {

inline constexpr const char* kTraceFormat = "ddsm-trace";
inline constexpr int kTraceVersion = 1;

namespace detail {

using nlohmann::json;

inline json value_to_json(ExtendedReal v) { return is_finite_value(v) ? json(v) : json(nullptr); }

inline ExtendedReal value_from_json(const json& j) {
  if (j.is_null()) return kPlusInfinity;
  return j.get<double>();
}

inline json config_to_json(const AlgoConfig& c) {
  return json{{"x0", c.x0},
              {"alpha0", c.alpha0},
              {"beta1", c.beta1},
              {"beta2", c.beta2},
              {"gamma", c.gamma},
              {"revealing_radius", c.revealing_radius ? json(*c.revealing_radius) : json(nullptr)},
              {"revealing_count", c.revealing_count},
              {"search_schedule", c.search_schedule},
              {"poll_directions", c.poll_directions},
              {"forcing", c.forcing},
              {"seed", c.seed},
              {"max_iterations", c.max_iterations},
              {"alpha_min", c.alpha_min}};
}

inline AlgoConfig config_from_json(const json& j) {
  AlgoConfig c;
  c.x0 = j.at("x0").get<Point>();
  c.alpha0 = j.at("alpha0").get<double>();
  c.beta1 = j.at("beta1").get<double>();
  c.beta2 = j.at("beta2").get<double>();
  c.gamma = j.at("gamma").get<double>();
  if (const auto& r = j.at("revealing_radius"); !r.is_null()) c.revealing_radius = r.get<double>();
  c.revealing_count = j.at("revealing_count").get<std::size_t>();
  c.search_schedule = j.at("search_schedule").get<std::string>();
  c.poll_directions = j.at("poll_directions").get<std::string>();
  c.forcing = j.at("forcing").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.max_iterations = j.at("max_iterations").get<std::size_t>();
  c.alpha_min = j.at("alpha_min").get<double>();
  return c;
}

inline json record_to_json(const IterationRecord& r) {
  json outcomes = json::array();
  for (const auto& o : r.outcomes) {
    json trials = json::array();
    for (const auto& t : o.trials)
      trials.push_back(json{{"point", t.point}, {"value", value_to_json(t.value)}, {"in_domain", t.in_domain}});
    outcomes.push_back(json{{"step", std::string(to_string(o.kind))},
                            {"trials", std::move(trials)},
                            {"winner", o.winner ? json(*o.winner) : json(nullptr)},
                            {"success", o.success}});
  }
  return json{{"k", r.k},
              {"x", r.x},
              {"alpha", r.alpha},
              {"f_x", r.f_x},
              {"outcomes", std::move(outcomes)},
              {"success", r.success},
              {"x_next", r.x_next},
              {"alpha_next", r.alpha_next},
              {"f_next", r.f_next}};
}

inline IterationRecord record_from_json(const json& j) {
  IterationRecord r;
  r.k = j.at("k").get<std::size_t>();
  r.x = j.at("x").get<Point>();
  r.alpha = j.at("alpha").get<double>();
  r.f_x = j.at("f_x").get<double>();
  for (const auto& o : j.at("outcomes")) {
    StepOutcome out;
    const auto kind = parse_step_kind(o.at("step").get<std::string>());
    if (!kind) throw TraceFormatError("unknown step kind '" + o.at("step").get<std::string>() + "'");
    out.kind = *kind;
    for (const auto& t : o.at("trials"))
      out.trials.push_back(
          TrialPoint{t.at("point").get<Point>(), value_from_json(t.at("value")), t.at("in_domain").get<bool>()});
    if (const auto& w = o.at("winner"); !w.is_null()) out.winner = w.get<std::size_t>();
    out.success = o.at("success").get<bool>();
    r.outcomes.push_back(std::move(out));
  }
  r.success = j.at("success").get<bool>();
  r.x_next = j.at("x_next").get<Point>();
  r.alpha_next = j.at("alpha_next").get<double>();
  r.f_next = j.at("f_next").get<double>();
  return r;
}

}  // namespace detail

inline void write_trace(std::ostream& os, const Trace& trace) {
  using detail::json;
  const json header{{"format", kTraceFormat},
                    {"version", kTraceVersion},
                    {"objective", trace.objective_name},
                    {"config", detail::config_to_json(trace.config)},
                    {"termination", std::string(to_string(trace.termination))},
                    {"evaluations", trace.evaluations},
                    {"records", trace.records.size()}};
  os << header.dump() << '\n';
  for (const auto& r : trace.records) os << detail::record_to_json(r).dump() << '\n';
}

inline Trace read_trace(std::istream& is) {
  using detail::json;
  std::string line;
  std::size_t line_no = 0;
  try {
    if (!std::getline(is, line)) throw TraceFormatError("empty trace");
    ++line_no;
    const json header = json::parse(line);
    if (header.at("format") != kTraceFormat) throw TraceFormatError("not a ddsm trace");
    if (header.at("version") != kTraceVersion) throw TraceFormatError("unsupported trace version");

    Trace trace;
    trace.objective_name = header.at("objective").get<std::string>();
    trace.config = detail::config_from_json(header.at("config"));
    const auto term = parse_termination(header.at("termination").get<std::string>());
    if (!term) throw TraceFormatError("unknown termination reason");
    trace.termination = *term;
    trace.evaluations = header.at("evaluations").get<std::size_t>();
    const auto expected = header.at("records").get<std::size_t>();

    while (std::getline(is, line)) {
      ++line_no;
      if (line.empty()) continue;
      trace.records.push_back(detail::record_from_json(json::parse(line)));
    }
    if (trace.records.size() != expected)
      throw TraceFormatError("header announces " + std::to_string(expected) + " records, found " +
                             std::to_string(trace.records.size()));
    return trace;
  } catch (const json::exception& e) {
    throw TraceFormatError("line " + std::to_string(line_no) + ": " + e.what());
  }
}

inline std::string trace_to_string(const Trace& trace) {
  std::ostringstream os;
  write_trace(os, trace);
  return os.str();
}

inline Trace trace_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_trace(is);
}

}  // namespace ddsm
