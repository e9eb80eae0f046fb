#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "fgame/channel.hpp"
#include "fgame/game.hpp"
#include "fgame/observation.hpp"
#include "fgame/region.hpp"
#include "fgame/rng.hpp"
#include "fgame/strategy.hpp"

namespace fgame {

// ---------------------------------------------------------------------------
// Two-node closed loop (one repeated pairwise game).

struct PairScenario {
  const PowerGrid* power = nullptr;
  const ChannelGrid* gains = nullptr;
  const GameParams* game = nullptr;
  const GameTables* tables = nullptr;
  const StateDistribution* rho = nullptr;
  const SignalStructure* theta = nullptr;
  MonitoringParams monitoring;
  int packets = 100;
  // Quantization-loss mode: states drawn continuous, signals from the nearest
  // grid point, utilities from the continuous gains.
  bool continuous_states = false;
};

struct StageRecord {
  int t = 0;
  int s1 = 0, s2 = 0;
  int k1 = 1, k2 = 1;  // realized 1-based actions
  double u1 = 0.0, u2 = 0.0;
  double fwd_prob1 = 0.0, fwd_prob2 = 0.0;  // 1 - pi[a^min]
  double epow1 = 0.0, epow2 = 0.0;          // E_pi[p + p']
  int obs_f_12 = 0;  // Forward count node 1 observed about node 2
  int obs_f_21 = 0;
};

// One stage of the closed loop. The deviation hook, when set, can reshape
// node 1's stage decision after it is produced (one-shot deviation studies).
class PairGame {
 public:
  using DeviationHook =
      std::function<void(int t, int signal, StageDecision& pi)>;

  PairGame(const PairScenario& sc, TransmissionStrategy& node1,
           TransmissionStrategy& node2);

  StageRecord step(int t, const Rng& frame_rng);
  void set_deviation_hook(DeviationHook hook) { hook_ = std::move(hook); }

 private:
  const PairScenario& sc_;
  TransmissionStrategy& node1_;
  TransmissionStrategy& node2_;
  DeviationHook hook_;
};

struct PairRunResult {
  long forwarded = 0;      // packet opportunities served (action != a^min)
  long opportunities = 0;  // 2 * K * frames
  double utility_sum = 0.0;   // sum over stages of u1 + u2
  double radiated_sum = 0.0;  // sum over stages of E_pi[p+p'], both nodes
  double credit_min = std::numeric_limits<double>::infinity();
  double credit_max = -std::numeric_limits<double>::infinity();
  std::vector<double> frame_forwarded;  // per frame, fraction in [0,1]

  double forwarding_rate() const {
    return opportunities ? double(forwarded) / opportunities : 0.0;
  }
};

PairRunResult run_pairwise_game(const PairScenario& sc,
                                TransmissionStrategy& node1,
                                TransmissionStrategy& node2, int frames,
                                const Rng& pair_rng);

// ---------------------------------------------------------------------------
// Network experiments.

struct Topology {
  std::vector<std::array<double, 2>> pos;
  double range = 0.0;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> dist;
  int attempts = 0;

  double mean_degree(int n) const { return n ? 2.0 * pairs.size() / n : 0.0; }
};

// Uniform i.i.d. positions, whole draw resampled until every node has a
// neighbor; throws after max_attempts rejections.
Topology generate_topology(int n, double area_w, double area_h, double range,
                           int max_attempts, Rng& rng);

enum class StrategyKind { Sara, Gtft, Icarus, AlwaysDefect, FullCooperation };
enum class ChannelMeanMode { Unit, PathLoss };

StrategyKind strategy_kind_from_string(const std::string& s);
std::string to_string(StrategyKind k);

struct SimConfig {
  int n_nodes = 50;
  double area_w = 1000.0, area_h = 1000.0;
  double range = 150.0;
  int frames = 20;
  double packet_rate = 2.0;     // packets per second
  double frame_seconds = 50.0;  // stage duration
  double selfish_fraction = 0.5;
  double selfish_initial_rate = 0.1;
  StrategyKind strategy = StrategyKind::Sara;
  CreditParams credit;
  GameParams game;
  PowerGrid power = PowerGrid::defaults();
  ChannelGrid gains = ChannelGrid::defaults();
  double epsilon = 0.0;
  DropRule drop_rule = DropRule::MinAction;
  PathLossParams path_loss;
  ChannelMeanMode mean_mode = ChannelMeanMode::Unit;
  SignalKind csi = SignalKind::Local;
  int topology_draws = 50;
  int max_topology_attempts = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
  double lambda = 0.5;
  int policy_restarts = 1;
  int policy_buckets = 8;  // distance buckets in path-loss mode
  IcarusParams icarus;
  double gtft_generosity = 0.1;
  int gtft_window = 5;
  double anp_a = 1.0;  // consumed-power model p_total = a (p+p') + b
  double anp_b = 1.0;

  int packets_per_frame() const {
    return int(packet_rate * frame_seconds + 0.5);
  }
  void validate() const;
};

struct Metrics {
  double forwarding_rate = 0.0;
  long forwarded = 0;
  long opportunities = 0;
  double anp_watts = 0.0;
  double anp_dbm = 0.0;
  double mean_pair_utility = 0.0;  // per node per stage
  double mean_degree = 0.0;
  double topology_acceptance = 0.0;
  double credit_min = std::numeric_limits<double>::infinity();
  double credit_max = -std::numeric_limits<double>::infinity();
  std::vector<double> frame_forwarding;  // per frame index, across draws
  long pair_games = 0;
  double radiated_mean_per_frame = 0.0;  // network E_pi[p+p'] sum per frame
};

// Mean over realizations of sum_i { a [p_i + p'_i] pi_i + b }.
std::pair<double, double> anp(double radiated_mean_per_frame, int n_nodes,
                              double a_coeff, double b_coeff);

// Trains the per-pair SARA policies (one bucket in unit-mean mode, distance
// buckets under path loss) and the CSI-ignorant fixed pair for the baselines.
class PolicyBank {
 public:
  PolicyBank(const SimConfig& cfg, const GameTables& tables,
             const SignalStructure& theta, const Rng& rng);

  const std::vector<int>& policy1(double distance) const;
  const std::vector<int>& policy2(double distance) const;
  StateDistribution pair_distribution(double distance) const;
  std::pair<int, int> fixed_pair() const { return fixed_pair_; }

 private:
  int bucket(double distance) const;

  ChannelGrid gains_;
  ChannelMeanMode mode_;
  PathLossParams path_loss_;
  double range_;
  int buckets_;
  std::vector<std::vector<int>> f1_, f2_;
  std::pair<int, int> fixed_pair_;
};

Metrics run_simulation(const SimConfig& cfg);

// ---------------------------------------------------------------------------
// Quantization-loss study (two-node closed loop, continuous channels).

struct QuantizationConfig {
  GameParams game;
  PowerGrid power = PowerGrid::defaults();
  double gain_lo = 0.04, gain_hi = 10.0;
  std::array<double, 4> means{1, 1, 1, 1};
  SignalKind csi = SignalKind::Local;
  double lambda = 0.5;
  CreditParams credit;
  std::vector<int> h_values{4, 10, 16};
  int h_reference = 24;
  int frames = 2000;
  int seeds = 8;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct QuantizationRow {
  int h = 0;
  double social_welfare = 0.0;
  double loss = 0.0;  // relative to the reference policy
};

std::vector<QuantizationRow> quantization_loss_experiment(
    const QuantizationConfig& cfg);

}  // namespace fgame
