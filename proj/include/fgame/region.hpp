#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fgame/channel.hpp"
#include "fgame/game.hpp"
#include "fgame/observation.hpp"
#include "fgame/rng.hpp"

namespace fgame {

// Per-signal distribution over the L^2 lexicographically ordered actions,
// P_{A_i|S_i,V}. The auxiliary-lottery axis V is reserved but fixed to
// |V| = 1, the regime the solver exercises.
struct DecisionPolicy {
  int node = 1;
  int signal_count = 1;
  int action_count = 1;
  int v_count = 1;
  std::vector<double> table;  // [signal][action], row-major

  double* row(int s) { return table.data() + std::size_t(s) * action_count; }
  const double* row(int s) const {
    return table.data() + std::size_t(s) * action_count;
  }
  // If the row is a vertex, returns its 1-based action index.
  std::optional<int> pure_action(int s) const;
  bool is_pure() const;
  // Requires a pure policy; f[s] = 1-based action index.
  std::vector<int> decision_function() const;

  static DecisionPolicy pure(int node, int signal_count,
                             const std::vector<int>& f, int action_count);
  static DecisionPolicy uniform(int node, int signal_count, int action_count);
  // All rows on (P_max, P_max) = action L^2 (Algorithm 1's default init).
  static DecisionPolicy full_power(int node, int signal_count, int action_count);
  static DecisionPolicy random_pure(int node, int signal_count, int action_count,
                                    Rng& rng);

  void validate() const;
};

// Q(a0, a1, a2) over A0 x A1 x A2.
struct JointDistribution {
  int state_count = 0;
  int action_count = 0;
  std::vector<double> q;  // [a0][a1-1][a2-1]

  double& at(int a0, int k1, int k2) {
    return q[(std::size_t(a0) * action_count + (k1 - 1)) * action_count +
             (k2 - 1)];
  }
  double at(int a0, int k1, int k2) const {
    return q[(std::size_t(a0) * action_count + (k1 - 1)) * action_count +
             (k2 - 1)];
  }
  void validate() const;
};

// Factorized stage correlation: Q = sum_{s1,s2} rho(a0) theta(s1,s2|a0) P1(a1|s1) P2(a2|s2).
JointDistribution build_joint(const StateDistribution& rho,
                              const SignalStructure& theta,
                              const DecisionPolicy& f1,
                              const DecisionPolicy& f2);

// (E_Q u1, E_Q u2) straight from a joint distribution.
std::pair<double, double> expected_utilities(const JointDistribution& q,
                                             const GameTables& tables);
// Same expectations via nested sums over (a0, s1, s2, a1, a2); no Q tensor.
std::pair<double, double> expected_utilities_nested(const StateDistribution& rho,
                                                    const SignalStructure& theta,
                                                    const DecisionPolicy& f1,
                                                    const DecisionPolicy& f2,
                                                    const GameTables& tables);

// W_lambda = lambda E u1 + (1 - lambda) E u2.
double weighted_utility(const JointDistribution& q, double lambda,
                        const GameTables& tables);

// Exact per-signal argmax of the conditional expected W_lambda; ties are
// broken uniformly with the caller's rng. Returns a pure policy.
DecisionPolicy best_response(double lambda, const DecisionPolicy& fixed_other,
                             int my_node, const StateDistribution& rho,
                             const SignalStructure& theta,
                             const GameTables& tables, Rng& rng);

struct FrontierPoint {
  double lambda = 0.5;
  double eu1 = 0.0;
  double eu2 = 0.0;
  double w = 0.0;
  bool converged = false;
  bool monotone = true;  // W iterate sequence never decreased
  int iters = 0;
  std::vector<double> w_history;
  DecisionPolicy f1, f2;
};

struct Algorithm1Options {
  double eta = 1e-9;
  int max_iters = 200;
};

// Sequential best-response dynamics, players alternating, stopping when the
// W_lambda change falls below eta.
FrontierPoint algorithm1(double lambda, const DecisionPolicy& f1_init,
                         const DecisionPolicy& f2_init,
                         const StateDistribution& rho,
                         const SignalStructure& theta, const GameTables& tables,
                         const Algorithm1Options& opts, Rng& rng);

struct RestartResult {
  FrontierPoint best;
  std::vector<double> restart_w;  // converged W of every restart
};

// Full-power init plus (restarts-1) random pure inits; keeps the best W.
RestartResult algorithm1_restarts(double lambda, const StateDistribution& rho,
                                  const SignalStructure& theta,
                                  const GameTables& tables,
                                  const Algorithm1Options& opts, int restarts,
                                  const Rng& rng);

struct OracleResult {
  double w = 0.0;
  double eu1 = 0.0;
  double eu2 = 0.0;
  std::vector<int> f1, f2;  // 1-based action per signal
};

// Exact max of W_lambda over pure decision-function pairs (a bilinear form
// over a product of simplices peaks at a vertex pair). Refuses instances with
// more than max_pairs pairs.
OracleResult brute_force_oracle(double lambda, const StateDistribution& rho,
                                const SignalStructure& theta,
                                const GameTables& tables,
                                double max_pairs = 1e6);

// One FrontierPoint per lambda; points are independent and fan out across
// workers, merged by index.
std::vector<FrontierPoint> pareto_sweep(const std::vector<double>& lambdas,
                                        const StateDistribution& rho,
                                        const SignalStructure& theta,
                                        const GameTables& tables,
                                        const Algorithm1Options& opts,
                                        int restarts, const Rng& rng,
                                        int workers);

std::vector<double> uniform_lambda_grid(int points);

}  // namespace fgame
