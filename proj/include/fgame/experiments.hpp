#pragma once

#include <string>
#include <vector>

#include "fgame/config.hpp"
#include "fgame/equilibrium.hpp"
#include "fgame/simulator.hpp"

namespace fgame {

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::string effective;  // resolved key = value lines

  bool ok() const { return errors.empty(); }
};

// Range/type checks over the known key set; the shipped defaults pass, mu < 2*beta
// warns, negative alpha errors, unknown keys error with file:line anchors.
ValidationReport validate_config(const Config& cfg);

GameParams game_params_from(const Config& cfg);
PowerGrid power_grid_from(const Config& cfg);
ChannelGrid channel_grid_from(const Config& cfg);
CreditParams credit_params_from(const Config& cfg);
SimConfig sim_config_from(const Config& cfg);

// The ten seeded small instances behind the equilibrium experiment and the
// consistency criterion.
std::vector<TwoNodeScenario> equilibrium_instances(int count, double eps,
                                                   const Rng& rng);

struct ExperimentSpec {
  std::string experiment;
  Config config;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int workers = 1;
  bool full_scale = false;
};

const std::vector<std::string>& known_experiments();

// Runs one experiment recipe; writes <experiment>-<seed>.csv plus a manifest
// into out_dir. Exit status: 0 ok, 1 runtime/config failure, 2 usage.
int run_experiment(const ExperimentSpec& spec);

// CLI entry point (flags: --config --experiment --seed --workers --out
// --full-scale --validate); same exit-code contract.
int cli_main(int argc, const char* const* argv);

}  // namespace fgame
