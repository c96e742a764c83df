#pragma once

// Experiment config files.
//
//   # comment
//   [objective]
//   name = counterexample
//
//   [algorithm]
//   x0 = 1.25                 # comma-separated for n > 1
//   alpha0 = 0.25
//   beta1 = 0.5
//   beta2 = 0.5
//   gamma = 1
//   revealing_radius = 2      # optional; absent disables the Revealing Poll
//   revealing_count = 1       # optional, default 1
//   search_schedule = counterexample
//   poll_directions = pm1
//   forcing = zero
//   seed = 42                 # optional, default 0
//   max_iterations = 52
//   alpha_min = 0             # optional, default 0
//
//   [output]
//   trace_path = out.jsonl    # optional
//   format = jsonl            # optional, default jsonl
//
// Parsing is strict: unknown sections or keys, duplicates and malformed
// numbers are errors. Numbers are plain decimal literals.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>

#include "ddsm/engine.hpp"
#include "ddsm/objective.hpp"

namespace ddsm {

struct ExperimentConfig {
  std::string objective;
  AlgoConfig algorithm;
  std::optional<std::string> trace_path;
  std::string format = "jsonl";
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_decimal(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

inline std::optional<std::uint64_t> parse_unsigned(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

}  // namespace detail

inline ExperimentConfig parse_experiment_config(std::istream& in, const std::string& source = "<config>") {
  static const std::map<std::string, std::set<std::string>, std::less<>> schema{
      {"objective", {"name"}},
      {"algorithm",
       {"x0", "alpha0", "beta1", "beta2", "gamma", "revealing_radius", "revealing_count", "search_schedule",
        "poll_directions", "forcing", "seed", "max_iterations", "alpha_min"}},
      {"output", {"trace_path", "format"}},
  };
  auto where = [&](std::size_t line) { return source + ":" + std::to_string(line); };

  std::map<std::string, detail::Entry> entries;  // keyed by "section.key"
  std::string section;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where(line_no), "", "malformed section header");
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (!schema.contains(section)) throw ConfigError(where(line_no), "", "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where(line_no), "", "expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string value(detail::trim(line.substr(eq + 1)));
    if (section.empty()) throw ConfigError(where(line_no), key, "key outside of any section");
    if (!schema.find(section)->second.contains(key))
      throw ConfigError(where(line_no), key, "unknown key in section [" + section + "]");
    if (value.empty()) throw ConfigError(where(line_no), key, "empty value");
    auto [it, inserted] = entries.emplace(section + "." + key, detail::Entry{value, line_no});
    if (!inserted) throw ConfigError(where(line_no), key, "duplicate key");
  }

  auto find = [&](const std::string& qualified) -> const detail::Entry* {
    const auto it = entries.find(qualified);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto field_name = [](const std::string& qualified) { return qualified.substr(qualified.find('.') + 1); };
  auto require = [&](const std::string& qualified) -> const detail::Entry& {
    if (const auto* e = find(qualified)) return *e;
    throw ConfigError(source, field_name(qualified), "missing required key");
  };
  auto real = [&](const std::string& qualified) {
    const auto& e = require(qualified);
    const auto v = detail::parse_decimal(e.value);
    if (!v) throw ConfigError(where(e.line), field_name(qualified), "not a decimal number: '" + e.value + "'");
    return *v;
  };
  auto count = [&](const std::string& qualified) {
    const auto& e = require(qualified);
    const auto v = detail::parse_unsigned(e.value);
    if (!v) throw ConfigError(where(e.line), field_name(qualified), "not a non-negative integer: '" + e.value + "'");
    return *v;
  };

  ExperimentConfig cfg;
  cfg.objective = require("objective.name").value;

  AlgoConfig& a = cfg.algorithm;
  {
    const auto& e = require("algorithm.x0");
    a.x0.clear();
    std::string_view rest = e.value;
    for (;;) {
      const auto comma = rest.find(',');
      const auto v = detail::parse_decimal(rest.substr(0, comma));
      if (!v) throw ConfigError(where(e.line), "x0", "not a list of decimal numbers: '" + e.value + "'");
      a.x0.push_back(*v);
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  a.alpha0 = real("algorithm.alpha0");
  a.beta1 = real("algorithm.beta1");
  a.beta2 = real("algorithm.beta2");
  a.gamma = real("algorithm.gamma");
  if (find("algorithm.revealing_radius")) a.revealing_radius = real("algorithm.revealing_radius");
  if (find("algorithm.revealing_count")) a.revealing_count = count("algorithm.revealing_count");
  a.search_schedule = require("algorithm.search_schedule").value;
  a.poll_directions = require("algorithm.poll_directions").value;
  a.forcing = require("algorithm.forcing").value;
  if (find("algorithm.seed")) a.seed = count("algorithm.seed");
  a.max_iterations = count("algorithm.max_iterations");
  if (find("algorithm.alpha_min")) a.alpha_min = real("algorithm.alpha_min");

  if (const auto* e = find("output.trace_path")) cfg.trace_path = e->value;
  if (const auto* e = find("output.format")) {
    if (e->value != "jsonl") throw ConfigError(where(e->line), "format", "unsupported format '" + e->value + "'");
    cfg.format = e->value;
  }

  // Semantic checks, reported at the line of the offending field.
  try {
    registry_lookup(cfg.objective);
  } catch (const LookupError& err) {
    throw ConfigError(where(require("objective.name").line), "name", err.what());
  }
  try {
    a.validate();
  } catch (const ConfigError& err) {
    const auto* e = find("algorithm." + err.field());
    const std::string what = err.what();
    const std::string msg = err.field().empty() ? what : what.substr(err.field().size() + 2);
    throw ConfigError(e ? where(e->line) : source, err.field(), msg);
  }
  return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "", "cannot open config file");
  return parse_experiment_config(in, path);
}

}  // namespace ddsm
