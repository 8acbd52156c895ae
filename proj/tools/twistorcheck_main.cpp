#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "twistor/scenario.hpp"

namespace {

using twistor::json;

int exit_code_for(const twistor::ScenarioReport& rep) {
  if (rep.inconclusive()) return 3;
  return rep.all_pass() ? 0 : 1;
}

void print_summary(const twistor::ScenarioReport& rep) {
  std::cout << rep.scenario.name << "\n";
  for (const auto& c : rep.checks) {
    std::cout << "  " << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
    if (!c.error.empty()) {
      std::cout << "  error: " << c.error;
    } else {
      std::cout << "  residual " << std::scientific << std::setprecision(3)
                << c.max_residual << (c.at_least ? " >= " : " <= ")
                << c.threshold << std::defaultfloat;
    }
    std::cout << "\n";
  }
  if (rep.verdict) {
    std::cout << "  verdict: " << rep.verdict->branch_name() << " (measured "
              << rep.verdict->measured_name() << ", "
              << (rep.verdict->agree ? "agree" : "DISAGREE") << ")\n";
  }
}

void apply_overrides(twistor::Scenario& sc, int samples, int sphere,
                     double step, long long seed) {
  if (samples > 0) sc.sampling.points = samples;
  if (sphere > 0) sc.sampling.sphere = sphere;
  if (step > 0) sc.sampling.h = step;
  if (seed >= 0) sc.sampling.seed = static_cast<std::uint64_t>(seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical checks for generalized quaternionic structures "
               "and their twistor integrability"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "list builtin scenarios");

  std::string describe_name;
  auto* describe = app.add_subcommand("describe", "print a builtin scenario");
  describe->add_option("name", describe_name)->required();

  std::string run_target, run_out;
  int run_samples = -1, run_sphere = -1;
  double run_step = -1.0;
  long long run_seed = -1;
  auto* run = app.add_subcommand("run", "run one scenario");
  run->add_option("--scenario", run_target, "builtin name or JSON file")
      ->required();
  run->add_option("--samples", run_samples, "chart sample points");
  run->add_option("--sphere-samples", run_sphere, "sphere lattice size");
  run->add_option("--step", run_step, "finite-difference step");
  run->add_option("--seed", run_seed, "sampling seed");
  run->add_option("--out", run_out, "write the JSON report here");

  std::string suite_out;
  int suite_samples = -1, suite_sphere = -1;
  double suite_step = -1.0;
  long long suite_seed = -1;
  auto* suite = app.add_subcommand("suite", "run all golden scenarios");
  suite->add_option("--out", suite_out, "write the combined JSON report here");
  suite->add_option("--samples", suite_samples, "chart sample points");
  suite->add_option("--sphere-samples", suite_sphere, "sphere lattice size");
  suite->add_option("--step", suite_step, "finite-difference step");
  suite->add_option("--seed", suite_seed, "sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& n : twistor::builtin_names()) std::cout << n << "\n";
      return 0;
    }

    if (describe->parsed()) {
      if (!twistor::is_builtin(describe_name)) {
        std::cerr << "unknown builtin '" << describe_name << "'\n";
        return 2;
      }
      std::cout << twistor::builtin_scenario(describe_name).to_json().dump(2)
                << "\n";
      return 0;
    }

    if (run->parsed()) {
      twistor::Scenario sc = twistor::is_builtin(run_target)
                                 ? twistor::builtin_scenario(run_target)
                                 : twistor::Scenario::from_file(run_target);
      apply_overrides(sc, run_samples, run_sphere, run_step, run_seed);
      const twistor::ScenarioReport rep = twistor::run_scenario(sc);
      print_summary(rep);
      if (!run_out.empty()) {
        std::ofstream out(run_out);
        out << rep.to_json().dump(2) << "\n";
      }
      return exit_code_for(rep);
    }

    if (suite->parsed()) {
      json combined;
      combined["engine_version"] = twistor::kEngineVersion;
      combined["reports"] = json::array();
      bool all_ok = true;
      bool any_inconclusive = false;
      for (const auto& name : twistor::builtin_names()) {
        try {
          twistor::Scenario sc = twistor::builtin_scenario(name);
          apply_overrides(sc, suite_samples, suite_sphere, suite_step,
                          suite_seed);
          const twistor::ScenarioReport rep = twistor::run_scenario(sc);
          std::string why;
          const bool ok = twistor::golden_ok(name, rep, &why);
          all_ok &= ok;
          any_inconclusive |= rep.inconclusive();
          std::cout << (ok ? "PASS  " : "FAIL  ") << name;
          if (!ok) std::cout << "  (" << why << ")";
          std::cout << "\n";
          combined["reports"].push_back(rep.to_json());
        } catch (const twistor::Error& e) {
          all_ok = false;
          std::cout << "FAIL  " << name << "  (error: " << e.what() << ")\n";
        }
      }
      if (!suite_out.empty()) {
        std::ofstream out(suite_out);
        out << combined.dump(2) << "\n";
      }
      if (all_ok) return 0;
      return any_inconclusive ? 3 : 1;
    }
  } catch (const twistor::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const twistor::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
