#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qoe/entropy.hpp"
#include "qoe/network.hpp"
#include "qoe/spectral.hpp"
#include "qoe/states.hpp"

namespace qoe {

enum class Experiment {
  kExpand,
  kMulticonfig,
  kNinitSweep,
  kRaseeStats,
  kRaseeDynamics,
  kBlip,
  kThermal,
};

std::string experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

struct ExperimentConfig {
  Experiment experiment = Experiment::kExpand;
  int n = 1024;
  int n_init = 64;
  int passes = 9;
  int pool_size = 50;
  double t_max = 20.0;
  double t_step = 0.05;
  int n_configs = 10;
  // 0 means "not set": rasee_stats resolves it to 300 samples per tier,
  // rasee_dynamics to 10 trajectories.
  int n_samples = 0;
  // 0 means "use n" (all eigenvectors).
  int n_e = 0;
  double reversal_time = 10.0;
  std::vector<double> delta_grid;        // empty -> 0, 0.01, ..., 0.5
  std::vector<double> temperature_grid;  // empty -> 21-point log grid 1e-2..1e3
  std::vector<double> snapshot_times;    // empty -> {0, 0.5, 2, 10} (tau units)
  // When > 0, the expansion run also writes the Boltzmann occupation at this
  // temperature alongside the state's energy distribution.
  double boltzmann_t = 0.0;
  std::uint64_t master_seed = 20260819;
  std::string output_dir = "out";
  // When nonempty, eigendecompositions are cached here keyed by the graph
  // content hash, so repeated runs on one configuration skip the eigensolve.
  std::string spectrum_cache_dir;
};

// Strict JSON parse: unknown keys are an error, as is any invariant
// violation (t_step <= 0, deltas outside [0,1], nonpositive counts...).
// Accepts either a bare config object or a run manifest (the config is then
// read from its "config" member), so a finished run's manifest can be fed
// straight back in to reproduce it.
ExperimentConfig config_from_json(const std::string& json_text);
ExperimentConfig config_from_json_file(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);

void validate(const ExperimentConfig& cfg);

// One time-series sample. e_s is the scaled-energy expectation; s_vn is the
// pure-state von Neumann entropy (identically 0 up to norm drift) except in
// the thermal experiment, which has its own table.
struct EntropyRecord {
  double t = 0.0;
  double s_x = 0.0;
  double s_e = 0.0;
  double s_vn = 0.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double e_s = 0.0;
};

struct ExpandResult {
  std::vector<EntropyRecord> series;
  double late_time_s_x_mean = 0.0;  // mean of s_x over the second half
  double s_e = 0.0;
  double e_s = 0.0;
};

struct MulticonfigResult {
  std::vector<std::vector<EntropyRecord>> series;  // one per configuration
  std::vector<double> s_e;
  std::vector<double> e_s;  // initial scaled-energy expectation per config
  std::vector<double> late_time_s_x_mean;
};

struct NinitSweepResult {
  std::vector<int> n_init_values;
  std::vector<std::vector<EntropyRecord>> series;
  std::vector<double> s_x0;
  std::vector<double> e_s;
  std::vector<double> late_time_s_x_mean;
};

struct RaseeSample {
  int n_e = 0;
  int sample = 0;
  double s_x = 0.0;
  double mean_x = 0.0;
  double mean_y = 0.0;
  double e_s = 0.0;
};

struct RaseeStatsResult {
  std::vector<int> tiers;
  std::vector<RaseeSample> samples;
  std::vector<double> mean_s_x;    // per tier
  std::vector<double> stderr_s_x;  // per tier
  std::vector<double> mean_e_s;    // per tier
};

struct RaseeDynamicsResult {
  std::vector<std::vector<EntropyRecord>> trajectories;
};

struct BlipResult {
  std::vector<double> deltas;
  std::vector<double> s_x_at_reversal;  // evaluated exactly at t = reversal
  std::vector<std::vector<EntropyRecord>> series;  // one per delta
};

struct ThermalRow {
  double temperature = 0.0;
  double s_x = 0.0;
  double s_vn = 0.0;
  double e_s = 0.0;
  // |s_vn(rho) - smi(occupation)|, a consistency residual kept for tests.
  double svn_occupation_gap = 0.0;
};

struct ThermalResult {
  std::vector<ThermalRow> rows;
};

ExpandResult run_expand(const ExperimentConfig& cfg);
MulticonfigResult run_multiconfig(const ExperimentConfig& cfg);
NinitSweepResult run_ninit_sweep(const ExperimentConfig& cfg);
RaseeStatsResult run_rasee_stats(const ExperimentConfig& cfg);
RaseeDynamicsResult run_rasee_dynamics(const ExperimentConfig& cfg);
BlipResult run_blip(const ExperimentConfig& cfg);
ThermalResult run_thermal(const ExperimentConfig& cfg);

// CLI dispatch: runs cfg.experiment, returns 0 on success. Errors are
// reported on stderr with the failing path or parameter named.
int run_experiment(const ExperimentConfig& cfg);

// Seed plumbing, exposed so tests can reproduce any sub-stream.
// Configuration index 0 reuses the master seed itself, which is what makes a
// one-config multiconfig run bit-identical to run_expand.
std::uint64_t config_seed(std::uint64_t master_seed, int config_index);

} // namespace qoe
