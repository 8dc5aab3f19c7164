#include "wheelrotor/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "wheelrotor/errors.hpp"
#include "wheelrotor/metrics.hpp"
#include "wheelrotor/mixcheck.hpp"
#include "wheelrotor/scenario.hpp"
#include "wheelrotor/simulator.hpp"

namespace wheelrotor {

namespace {

VehicleConfig load_config_or_default(const std::string& path) {
  return load_params(path.empty() ? default_config_path() : std::filesystem::path(path));
}

std::filesystem::path resolve_scenario(const std::string& arg) {
  std::filesystem::path p(arg);
  if (std::filesystem::exists(p)) return p;
  const auto& names = shipped_scenario_names();
  if (std::find(names.begin(), names.end(), arg) != names.end()) return shipped_scenario_path(arg);
  return p;
}

int report_error(const Error& e, std::ostream& err) {
  err << "error: " << e.what() << '\n';
  if (dynamic_cast<const ValidationError*>(&e)) return kExitInvalidInputFile;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const InvalidInput*>(&e)) return kExitInvalidArgument;
  return kExitSimulationAborted;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid aerial-ground bicopter simulator and metrics tool", "wheelrotor_cli"};
  app.require_subcommand(1);

  std::string scenario_path, config_path, out_path, log_path;
  std::uint64_t samples = 10000, seed = 1;
  unsigned workers = 1;
  std::optional<double> pa, pg, ambient, ground, aerial;
  bool as_json = false;

  auto* sim = app.add_subcommand("sim", "Run a scenario and write the CSV log");
  sim->add_option("--scenario", scenario_path, "Scenario JSON file or shipped scenario name")->required();
  sim->add_option("--config", config_path, "Vehicle config JSON (default: config/default.json)");
  sim->add_option("--out", out_path, "Output CSV path")->required();

  auto* mix = app.add_subcommand("mixcheck", "Mixer forward/inverse round-trip check");
  mix->add_option("--samples", samples, "Number of random samples")->check(CLI::PositiveNumber);
  mix->add_option("--seed", seed, "RNG seed");
  mix->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  mix->add_option("--config", config_path, "Vehicle config JSON");

  auto* met = app.add_subcommand("metrics", "Power efficiency and noise arithmetic");
  auto* log_opt = met->add_option("--log", log_path, "Integrate energy over a CSV log");
  met->add_option("--config", config_path, "Vehicle config JSON (power model fallback)");
  met->add_option("--pa", pa, "Aerial power, W");
  met->add_option("--pg", pg, "Ground power, W");
  met->add_option("--ambient", ambient, "Ambient noise level, dB");
  met->add_option("--ground", ground, "Ground-mode noise level, dB");
  met->add_option("--aerial", aerial, "Aerial-mode noise level, dB");
  met->add_flag("--json", as_json, "Print JSON instead of text");

  auto* val = app.add_subcommand("validate", "Validate a vehicle config file");
  val->add_option("--config", config_path, "Vehicle config JSON")->required();

  if (args.empty()) {
    err << app.help();
    return kExitUsage;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*sim) {
      const auto cfg = load_config_or_default(config_path);
      const auto sc = load_scenario(resolve_scenario(scenario_path));
      const auto log = run_scenario(sc, cfg);
      export_csv(log, out_path);
      out << fmt::format("scenario: {}\nrows: {}\n", sc.name, log.rows.size());
      if (log.terminated) {
        err << "simulation terminated: " << log.terminal_event << '\n';
        return kExitSimulationAborted;
      }
      out << "status: completed\n";
      return kExitOk;
    }

    if (*mix) {
      const auto cfg = load_config_or_default(config_path);
      const auto r = run_mixcheck(cfg.params, samples, seed, workers);
      const bool pass = r.max_rel_error < kMixcheckTolerance;
      out << fmt::format(
          "samples: {}\nseed: {}\nmax round-trip relative error: {:.3e}\nworst sample: {}\n"
          "saturated samples: {}\nresult: {}\n",
          r.samples, r.seed, r.max_rel_error, r.worst_sample, r.saturated, pass ? "PASS" : "FAIL");
      return pass ? kExitOk : kExitCheckFailed;
    }

    if (*met) {
      const bool have_power = pa || pg;
      const bool have_noise = ambient || ground || aerial;
      if (!*log_opt && !have_power && !have_noise) {
        err << "error: metrics needs --log, --pa/--pg or --ambient/--ground/--aerial\n\n"
            << met->help();
        return kExitUsage;
      }
      if (have_power && !(pa && pg)) {
        err << "error: --pa and --pg must be given together\n";
        return kExitUsage;
      }
      if (have_noise && !(ambient && ground && aerial)) {
        err << "error: --ambient, --ground and --aerial must be given together\n";
        return kExitUsage;
      }
      nlohmann::json doc = nlohmann::json::object();
      if (*log_opt) {
        const auto cfg = load_config_or_default(config_path);
        const auto report = integrate_energy(read_csv(log_path), cfg.power);
        if (as_json) doc["energy"] = to_json(report);
        else out << to_text(report);
      }
      if (have_power) {
        const double eff = power_efficiency(*pa, *pg);
        if (as_json) doc["efficiency_pct"] = eff;
        else out << "efficiency: " << format_percent(eff) << '\n';
      }
      if (have_noise) {
        const auto noise = noise_percentages(*ambient, *ground, *aerial);
        if (as_json) doc["noise"] = to_json(noise);
        else out << to_text(noise);
      }
      if (as_json) out << doc.dump(2) << '\n';
      return kExitOk;
    }

    if (*val) {
      load_params(config_path);
      out << "config OK: " << config_path << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    return report_error(e, err);
  }
  return kExitUsage;
}

}  // namespace wheelrotor
