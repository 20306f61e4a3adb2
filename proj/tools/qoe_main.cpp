// Command-line front end: one subcommand per experiment, each accepting a
// JSON config plus flag overrides. Precedence: built-in defaults, then the
// config file, then explicit flags.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qoe/experiments.hpp"
#include "qoe/version.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  int n = 0;
  int n_init = 0;
  int passes = 0;
  int pool_size = 0;
  double t_max = -1.0;
  double t_step = -1.0;
  int n_configs = 0;
  int n_samples = -1;
  int n_e = -1;
  double reversal_time = -1.0;
  std::vector<double> delta_grid;
  std::vector<double> temperature_grid;
  std::vector<double> snapshot_times;
  double boltzmann_t = -1.0;
  std::string spectrum_cache_dir;
};

void add_common_options(CLI::App* cmd, CliOverrides& ov) {
  cmd->add_option("--config", ov.config_path,
                  "JSON config file (a run manifest also works)");
  cmd->add_option("--seed", ov.seed, "master seed");
  cmd->add_option("--out", ov.out, "output directory");
  cmd->add_option("--n", ov.n, "site count");
  cmd->add_option("--n-init", ov.n_init, "confined-state site count");
  cmd->add_option("--passes", ov.passes, "connection passes");
  cmd->add_option("--pool-size", ov.pool_size, "nearest-neighbor pool size");
  cmd->add_option("--t-max", ov.t_max, "time horizon (tau units)");
  cmd->add_option("--t-step", ov.t_step, "time step (tau units)");
  cmd->add_option("--n-configs", ov.n_configs, "configurations to run");
  cmd->add_option("--n-samples", ov.n_samples, "samples / trajectories");
  cmd->add_option("--n-e", ov.n_e, "eigenvectors in random superpositions");
  cmd->add_option("--reversal-time", ov.reversal_time,
                  "blip reversal horizon (tau units)");
  cmd->add_option("--delta-grid", ov.delta_grid,
                  "perturbation strengths for the blip sweep")
      ->delimiter(',');
  cmd->add_option("--temperature-grid", ov.temperature_grid,
                  "temperatures for the thermal sweep")
      ->delimiter(',');
  cmd->add_option("--snapshot-times", ov.snapshot_times,
                  "probability snapshot times (tau units)")
      ->delimiter(',');
  cmd->add_option("--boltzmann-t", ov.boltzmann_t,
                  "also emit the Boltzmann occupation at this temperature");
  cmd->add_option("--spectrum-cache", ov.spectrum_cache_dir,
                  "directory for cached eigendecompositions");
}

// Fold the file config (if any) and the flags the user actually passed into
// one validated config.
qoe::ExperimentConfig resolve_config(const CLI::App* cmd,
                                     const CliOverrides& ov,
                                     qoe::Experiment experiment) {
  qoe::ExperimentConfig cfg;
  if (!ov.config_path.empty())
    cfg = qoe::config_from_json_file(ov.config_path);
  // The subcommand decides what runs; a config file for a different
  // experiment is almost certainly a mistake, so reject it instead of
  // silently reinterpreting its parameters.
  if (!ov.config_path.empty() && cfg.experiment != experiment)
    throw std::runtime_error(
        "config file is for experiment \"" +
        qoe::experiment_name(cfg.experiment) + "\" but subcommand is \"" +
        qoe::experiment_name(experiment) + "\"");
  cfg.experiment = experiment;

  if (cmd->count("--seed")) cfg.master_seed = ov.seed;
  if (cmd->count("--out")) cfg.output_dir = ov.out;
  if (cmd->count("--n")) cfg.n = ov.n;
  if (cmd->count("--n-init")) cfg.n_init = ov.n_init;
  if (cmd->count("--passes")) cfg.passes = ov.passes;
  if (cmd->count("--pool-size")) cfg.pool_size = ov.pool_size;
  if (cmd->count("--t-max")) cfg.t_max = ov.t_max;
  if (cmd->count("--t-step")) cfg.t_step = ov.t_step;
  if (cmd->count("--n-configs")) cfg.n_configs = ov.n_configs;
  if (cmd->count("--n-samples")) cfg.n_samples = ov.n_samples;
  if (cmd->count("--n-e")) cfg.n_e = ov.n_e;
  if (cmd->count("--reversal-time")) cfg.reversal_time = ov.reversal_time;
  if (cmd->count("--delta-grid")) cfg.delta_grid = ov.delta_grid;
  if (cmd->count("--temperature-grid"))
    cfg.temperature_grid = ov.temperature_grid;
  if (cmd->count("--snapshot-times")) cfg.snapshot_times = ov.snapshot_times;
  if (cmd->count("--boltzmann-t")) cfg.boltzmann_t = ov.boltzmann_t;
  if (cmd->count("--spectrum-cache"))
    cfg.spectrum_cache_dir = ov.spectrum_cache_dir;

  qoe::validate(cfg);
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator-entropy experiments on disordered networks"};
  app.set_version_flag("--version", qoe::kVersion);
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    qoe::Experiment experiment;
    CLI::App* cmd = nullptr;
    CliOverrides ov;
  };
  Sub subs[] = {
      {"expand", "free expansion of a confined state",
       qoe::Experiment::kExpand},
      {"multiconfig", "expansion across independent configurations",
       qoe::Experiment::kMulticonfig},
      {"ninit-sweep", "expansion for n_init in {4..128} on one configuration",
       qoe::Experiment::kNinitSweep},
      {"rasee-stats", "random energy-superposition sample statistics",
       qoe::Experiment::kRaseeStats},
      {"rasee-dynamics", "time evolution of random energy superpositions",
       qoe::Experiment::kRaseeDynamics},
      {"blip", "time-reversed localization and delta perturbation sweep",
       qoe::Experiment::kBlip},
      {"thermal", "canonical-ensemble entropies over a temperature grid",
       qoe::Experiment::kThermal},
  };
  for (auto& sub : subs) {
    sub.cmd = app.add_subcommand(sub.name, sub.help);
    add_common_options(sub.cmd, sub.ov);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& sub : subs) {
      if (sub.cmd->parsed()) {
        const qoe::ExperimentConfig cfg =
            resolve_config(sub.cmd, sub.ov, sub.experiment);
        const int rc = qoe::run_experiment(cfg);
        if (rc == 0)
          std::cout << "wrote " << cfg.output_dir << "/manifest.json\n";
        return rc;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
