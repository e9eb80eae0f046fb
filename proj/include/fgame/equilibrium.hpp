#pragma once

#include <vector>

#include "fgame/channel.hpp"
#include "fgame/game.hpp"
#include "fgame/observation.hpp"
#include "fgame/rng.hpp"
#include "fgame/simulator.hpp"
#include "fgame/strategy.hpp"

namespace fgame {

struct UtilityGaps {
  double c1 = 0.0;  // node 1's one-shot gain from playing a^min itself
  double r1 = 0.0;  // node 1's loss when the peer plays a^min
  double c2 = 0.0;
  double r2 = 0.0;
};

// Expectations over rho and theta with a_i* = f_i*(s_i):
//   c_i = E[u_i(self at a^min, peer at a*)] - E[u_i(a1*, a2*)]
//   r_i = E[u_i(a1*, a2*)] - E[u_i(self at a*, peer at a^min)]
UtilityGaps utility_gaps(const StateDistribution& rho,
                         const SignalStructure& theta,
                         const std::vector<int>& f1, const std::vector<int>& f2,
                         const GameTables& tables);

// delta_min = max{ c1/((1-2eps) r1), c2/((1-2eps) r2), 0 }; a nonpositive r_i
// with positive c_i (or eps = 1/2 with positive c_i) yields +infinity.
double min_discount(const UtilityGaps& gaps, double eps);

struct EquilibriumReport {
  UtilityGaps gaps;
  double epsilon = 0.0;
  double delta_min = 0.0;  // may be +infinity
  bool feasible = false;   // delta_min < 1
};

EquilibriumReport analyze_equilibrium(const StateDistribution& rho,
                                      const SignalStructure& theta,
                                      const std::vector<int>& f1,
                                      const std::vector<int>& f2,
                                      const GameTables& tables, double eps);

// A fully specified two-node SARA setting, with f* trained by Algorithm 1.
struct TwoNodeScenario {
  PowerGrid power;
  ChannelGrid gains;
  GameParams game;
  CreditParams credit;
  double epsilon = 0.0;
  StateDistribution rho;
  SignalStructure theta;
  GameTables tables;
  std::vector<int> f1, f2;

  static TwoNodeScenario build(const PowerGrid& pg, const ChannelGrid& cg,
                               const GameParams& game, SignalKind csi,
                               const CreditParams& credit, double eps,
                               const std::array<double, 4>& means,
                               double lambda, const Rng& rng);

  EquilibriumReport equilibrium() const;
};

// Simulates the SARA closed loop with and without a one-shot deviation (mass d shifted from f*(s) to a^min at stage tau) and compares
// discounted utilities of the deviator, theta_t = (1-delta) delta^t, averaged
// over paired Monte-Carlo runs. Returns true when the deviation does NOT pay.
bool verify_one_shot_deviation(const TwoNodeScenario& sc, double delta, int tau,
                               double d, int horizon, int runs, const Rng& rng);

// Horizon with delta^horizon < tail, clamped to [8, 5000].
int deviation_horizon(double delta, double tail = 1e-6);

}  // namespace fgame
