#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "twistor/catalog.hpp"
#include "twistor/sampling.hpp"
#include "twistor/twistor.hpp"

namespace twistor {

using nlohmann::json;

inline constexpr const char* kEngineVersion = "0.1.0";

struct SamplingConfig {
  int points = 25;
  int sphere = 50;
  double h = kFirstStep;  // first-derivative step; curvature uses 10 h
  std::uint64_t seed = 42;

  double curvature_step() const { return 10.0 * h; }
  double margin() const { return 5.0 * curvature_step(); }
};

struct Scenario {
  std::string name;
  std::string manifold_id;
  json manifold_params = json::object();
  std::string dplus, dminus;
  json f_spec;
  std::vector<std::string> checks;
  SamplingConfig sampling;

  // Strict parser: unknown fields anywhere are rejected.
  static Scenario from_json(const json& j);
  static Scenario from_file(const std::string& path);
  json to_json() const;
};

AlgebraIso resolve_f(const json& f_spec);
Manifold resolve_manifold(const std::string& id, const json& params);

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  json witness;  // {point, sphere, pair}
  double threshold = 0.0;
  bool pass = false;
  bool at_least = false;     // pass means residual >= threshold
  std::string error;         // nonempty when the check aborted
  json diagnostics;          // extra numeric payload, kept out of the check row

  json to_json() const;
};

struct ScenarioReport {
  Scenario scenario;
  std::vector<CheckResult> checks;
  std::optional<Verdict> verdict;
  json verdict_inputs;
  double runtime_seconds = 0.0;

  bool all_pass() const;
  bool inconclusive() const;
  json to_json() const;
};

ScenarioReport run_scenario(const Scenario& sc);

// Builtin (golden) scenarios.
std::vector<std::string> builtin_names();
bool is_builtin(const std::string& name);
Scenario builtin_scenario(const std::string& name);
// Expected verdict branch for a builtin, plus any anchor assertions;
// returns true when the report matches, with an explanation otherwise.
bool golden_ok(const std::string& name, const ScenarioReport& report,
               std::string* why);

}  // namespace twistor
