#include "fgame/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fgame/region.hpp"

namespace fgame {

UtilityGaps utility_gaps(const StateDistribution& rho,
                         const SignalStructure& theta,
                         const std::vector<int>& f1, const std::vector<int>& f2,
                         const GameTables& tables) {
  int states = rho.state_count();
  int h = tables.gain_count;
  UtilityGaps g;
  double uk1 = 0, uk2 = 0;        // on-path utilities
  double self1 = 0, self2 = 0;    // the node itself at a^min
  double peer1 = 0, peer2 = 0;    // the peer at a^min
  for (int a0 = 0; a0 < states; ++a0) {
    double r = rho.rho(a0);
    if (r == 0.0) continue;
    int i2p = a0 % h;
    int i2 = (a0 / h) % h;
    int i1p = (a0 / (h * h)) % h;
    int i1 = a0 / (h * h * h);
    for (const auto& e : theta.rows[a0]) {
      double w = r * e.p;
      int a1 = f1.at(e.s1);
      int a2 = f2.at(e.s2);
      uk1 += w * tables.u1(i1, i2p, a1, a2);
      uk2 += w * tables.u2(i1p, i2, a1, a2);
      self1 += w * tables.u1(i1, i2p, 1, a2);
      peer2 += w * tables.u2(i1p, i2, 1, a2);
      peer1 += w * tables.u1(i1, i2p, a1, 1);
      self2 += w * tables.u2(i1p, i2, a1, 1);
    }
  }
  g.c1 = self1 - uk1;
  g.r1 = uk1 - peer1;
  g.c2 = self2 - uk2;
  g.r2 = uk2 - peer2;
  return g;
}

double min_discount(const UtilityGaps& gaps, double eps) {
  if (eps < 0.0 || eps > 0.5)
    throw std::invalid_argument("min_discount: eps outside [0, 0.5]");
  double inf = std::numeric_limits<double>::infinity();
  auto term = [&](double c, double r) {
    if (c <= 0.0) return 0.0;  // no myopic incentive to deviate
    double denom = (1.0 - 2.0 * eps) * r;
    if (denom <= 0.0) return inf;
    return c / denom;
  };
  return std::max({term(gaps.c1, gaps.r1), term(gaps.c2, gaps.r2), 0.0});
}

EquilibriumReport analyze_equilibrium(const StateDistribution& rho,
                                      const SignalStructure& theta,
                                      const std::vector<int>& f1,
                                      const std::vector<int>& f2,
                                      const GameTables& tables, double eps) {
  EquilibriumReport rep;
  rep.gaps = utility_gaps(rho, theta, f1, f2, tables);
  rep.epsilon = eps;
  rep.delta_min = min_discount(rep.gaps, eps);
  rep.feasible = rep.delta_min < 1.0;
  return rep;
}

TwoNodeScenario TwoNodeScenario::build(const PowerGrid& pg,
                                       const ChannelGrid& cg,
                                       const GameParams& game, SignalKind csi,
                                       const CreditParams& credit, double eps,
                                       const std::array<double, 4>& means,
                                       double lambda, const Rng& rng) {
  TwoNodeScenario sc;
  sc.power = pg;
  sc.gains = cg;
  sc.game = game;
  sc.credit = credit;
  sc.epsilon = eps;
  sc.rho = StateDistribution::quantized_rayleigh(cg, means);
  sc.theta = make_signal_structure(csi, cg);
  sc.tables = build_game_tables(pg, cg, game);
  Algorithm1Options opts;
  Rng lane = rng.child(0x75C3u);
  RestartResult res =
      algorithm1_restarts(lambda, sc.rho, sc.theta, sc.tables, opts, 5, lane);
  sc.f1 = res.best.f1.decision_function();
  sc.f2 = res.best.f2.decision_function();
  return sc;
}

EquilibriumReport TwoNodeScenario::equilibrium() const {
  return analyze_equilibrium(rho, theta, f1, f2, tables, epsilon);
}

int deviation_horizon(double delta, double tail) {
  if (delta <= 0.0) return 8;
  if (delta >= 1.0) return 5000;
  int h = int(std::ceil(std::log(tail) / std::log(delta)));
  return std::clamp(h, 8, 5000);
}

namespace {

double discounted_run(const TwoNodeScenario& sc, double delta, int tau, double d,
                      int horizon, const Rng& run_rng, bool deviate) {
  int acts = action_count(sc.power);
  SaraStrategy n1(sc.f1, sc.credit, sc.epsilon, acts);
  SaraStrategy n2(sc.f2, sc.credit, sc.epsilon, acts);
  PairScenario ps;
  ps.power = &sc.power;
  ps.gains = &sc.gains;
  ps.game = &sc.game;
  ps.tables = &sc.tables;
  ps.rho = &sc.rho;
  ps.theta = &sc.theta;
  ps.monitoring = {sc.epsilon, DropRule::MinAction};
  ps.packets = 100;
  PairGame game(ps, n1, n2);
  if (deviate) {
    game.set_deviation_hook([&](int t, int signal, StageDecision& pi) {
      if (t != tau) return;
      int k_star = sc.f1.at(signal);
      double shift = std::min(d, pi.pi[k_star - 1]);
      pi.pi[k_star - 1] -= shift;
      pi.pi[0] += shift;
    });
  }
  double total = 0.0;
  double weight = 1.0 - delta;  // theta_t = (1-delta) delta^t
  for (int t = 0; t <= horizon; ++t) {
    StageRecord rec = game.step(t, run_rng.child(t));
    total += weight * rec.u1;
    weight *= delta;
  }
  return total;
}

}  // namespace

bool verify_one_shot_deviation(const TwoNodeScenario& sc, double delta, int tau,
                               double d, int horizon, int runs, const Rng& rng) {
  if (delta < 0.0 || delta >= 1.0)
    throw std::invalid_argument("verify_one_shot_deviation: delta outside [0,1)");
  if (d < 0.0 || d > 1.0)
    throw std::invalid_argument("verify_one_shot_deviation: d outside [0,1]");
  if (tau < 0 || tau > horizon)
    throw std::invalid_argument("verify_one_shot_deviation: tau outside horizon");
  double gain = 0.0;
  for (int run = 0; run < runs; ++run) {
    Rng lane = rng.child(0xDE7Au, run);  // paired draws for both arms
    double base = discounted_run(sc, delta, tau, d, horizon, lane, false);
    double dev = discounted_run(sc, delta, tau, d, horizon, lane, true);
    gain += dev - base;
  }
  gain /= runs;
  return gain <= 1e-12;
}

}  // namespace fgame
