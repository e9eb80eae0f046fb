#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "fgame/equilibrium.hpp"
#include "fgame/experiments.hpp"
#include "fgame/simulator.hpp"
#include "fgame/strategy.hpp"

using namespace fgame;

namespace {

// Shared two-node fixture: binary powers, two gains, local CSI.
struct Fixture {
  PowerGrid pg{std::vector<double>{0.0, 10.0}};
  ChannelGrid cg{std::vector<double>{0.5, 2.0}};
  GameParams params;
  StateDistribution rho;
  SignalStructure theta;
  GameTables tables;
  std::vector<int> f1, f2;

  explicit Fixture(double alpha = 0.01) {
    params.alpha = alpha;
    rho = StateDistribution::quantized_rayleigh(cg, {1, 1, 1, 1});
    theta = make_signal_structure(SignalKind::Local, cg);
    tables = build_game_tables(pg, cg, params);
    Rng rng(4242);
    RestartResult res =
        algorithm1_restarts(0.5, rho, theta, tables, {}, 5, rng);
    f1 = res.best.f1.decision_function();
    f2 = res.best.f2.decision_function();
  }

  PairScenario scenario(double eps, int packets = 100) const {
    PairScenario sc;
    sc.power = &pg;
    sc.gains = &cg;
    sc.game = &params;
    sc.tables = &tables;
    sc.rho = &rho;
    sc.theta = &theta;
    sc.monitoring = {eps, DropRule::MinAction};
    sc.packets = packets;
    return sc;
  }
};

}  // namespace

TEST_CASE("reputation: corners and the eps-corrected count") {
  CHECK(update_reputation(100, 0, 0.0) == 1.0);
  CHECK(update_reputation(0, 100, 0.0) == 0.0);
  CHECK(update_reputation(70, 30, 0.1) == doctest::Approx(0.66).epsilon(1e-12));
  CHECK_THROWS(update_reputation(0, 0, 0.1));
}

TEST_CASE("credit law: cooperation is a fixed point, defection bleeds beta") {
  CreditParams cp;  // m0 35, beta 10, mu 20, nu 1
  StageDecision coop = unit_decision(10, 7);
  CHECK(update_credit(35.0, coop.pi, 7, cp) == doctest::Approx(35.0));
  StageDecision drop = min_decision(10);
  CHECK(update_credit(35.0, drop.pi, 7, cp) == doctest::Approx(25.0));
  CreditParams free_cp = cp;
  free_cp.beta = 0.0;
  CHECK(update_credit(35.0, drop.pi, 7, free_cp) == doctest::Approx(35.0));
  CHECK_THROWS(update_credit(35.0, drop.pi, 11, cp));
}

TEST_CASE("estimated peer distribution mixes pi* with pi_min") {
  StageDecision star = unit_decision(10, 7);
  StageDecision full = estimated_peer_distribution(1.0, star);
  CHECK(full.pi[6] == 1.0);
  StageDecision none = estimated_peer_distribution(0.0, star);
  CHECK(none.pi[0] == 1.0);
  StageDecision mixed = estimated_peer_distribution(0.66, star);
  CHECK(mixed.pi[0] == doctest::Approx(0.34));
  CHECK(mixed.pi[6] == doctest::Approx(0.66));
  mixed.validate();
  CHECK_THROWS(estimated_peer_distribution(1.5, star));
}

TEST_CASE("sara_decide: stage 0 and low credit cooperate, otherwise tit-for-tat") {
  CreditParams cp;
  std::vector<int> f = {3, 5};
  NodeLedger ledger;
  ledger.credit = 0.0;  // even broke, t=0 cooperates
  ledger.peer_reputation = 0.2;
  StageDecision d0 = sara_decide(0, 1, ledger, f, cp, 10);
  CHECK(d0.pi[4] == 1.0);

  ledger.credit = 35.0;  // >= mu: tit-for-tat branch
  StageDecision d1 = sara_decide(3, 0, ledger, f, cp, 10);
  CHECK(d1.pi[2] == doctest::Approx(0.2));
  CHECK(d1.pi[0] == doctest::Approx(0.8));

  ledger.credit = 10.0;  // < mu: cooperative branch
  StageDecision d2 = sara_decide(3, 0, ledger, f, cp, 10);
  CHECK(d2.pi[2] == 1.0);
}

TEST_CASE("two cooperative SARA nodes with eps=0 play f*(s) at every stage") {
  Fixture fx;
  int acts = action_count(fx.pg);
  SaraStrategy n1(fx.f1, CreditParams{}, 0.0, acts);
  SaraStrategy n2(fx.f2, CreditParams{}, 0.0, acts);
  PairScenario sc = fx.scenario(0.0);
  PairGame game(sc, n1, n2);
  Rng rng(55);
  for (int t = 0; t < 60; ++t) {
    StageRecord rec = game.step(t, rng.child(t));
    CHECK(rec.k1 == fx.f1[rec.s1]);
    CHECK(rec.k2 == fx.f2[rec.s2]);
  }
}

TEST_CASE("credit invariants: mu >= 2 beta keeps m in [0, m0 + beta]") {
  Fixture fx;
  int acts = action_count(fx.pg);
  for (int seed = 0; seed < 12; ++seed) {
    double eps = (seed % 3) * 0.2;
    bool selfish = seed % 2 == 1;
    SaraStrategy n1(fx.f1, CreditParams{}, eps, acts, selfish ? 0.1 : 1.0);
    SaraStrategy n2(fx.f2, CreditParams{}, eps, acts);
    PairScenario sc = fx.scenario(eps);
    PairRunResult res = run_pairwise_game(sc, n1, n2, 40, Rng(900 + seed));
    CHECK(res.credit_min >= 0.0);
    CHECK(res.credit_max <= CreditParams{}.m0 + CreditParams{}.beta + 1e-9);
  }
}

TEST_CASE("selfish SARA start: mixed first stage, cooperative lock afterwards") {
  Fixture fx;
  int acts = action_count(fx.pg);
  SaraStrategy selfish(fx.f1, CreditParams{}, 0.0, acts, 0.1);
  Rng rng(77);
  StageDecision d0 = selfish.decide(0, 0, rng);
  CHECK(d0.pi[0] == doctest::Approx(0.9));
  CHECK(d0.pi[fx.f1[0] - 1] == doctest::Approx(0.1));

  // Closed loop of two selfish SARA nodes: punished, then locked cooperative.
  SaraStrategy a(fx.f1, CreditParams{}, 0.0, acts, 0.1);
  SaraStrategy b(fx.f2, CreditParams{}, 0.0, acts, 0.1);
  PairScenario sc = fx.scenario(0.0);
  PairGame game(sc, a, b);
  Rng loop(78);
  int cooperative_tail = 0;
  for (int t = 0; t < 20; ++t) {
    StageRecord rec = game.step(t, loop.child(t));
    if (t >= 4) cooperative_tail += (rec.k1 == fx.f1[rec.s1]) && (rec.k2 == fx.f2[rec.s2]);
  }
  CHECK(cooperative_tail == 16);  // locked from stage 4 at the latest
}

TEST_CASE("gtft: generosity floor against a defector, full rate among cooperators") {
  Fixture fx;
  int acts = action_count(fx.pg);
  auto [c1, c2] = best_fixed_pair(fx.rho, fx.tables);

  GtftStrategy gtft(c1, 0.1, 5, acts);
  AlwaysDefectStrategy defect(acts);
  PairScenario sc = fx.scenario(0.0);
  PairGame game(sc, gtft, defect);
  Rng rng(81);
  double late_q = 0.0;
  for (int t = 0; t < 40; ++t) {
    StageRecord rec = game.step(t, rng.child(t));
    if (t >= 20) late_q += rec.fwd_prob1;
  }
  CHECK(late_q / 20.0 == doctest::Approx(0.1).epsilon(1e-9));

  GtftStrategy g1(c1, 0.1, 5, acts);
  GtftStrategy g2(c2, 0.1, 5, acts);
  PairRunResult res = run_pairwise_game(sc, g1, g2, 20, Rng(82));
  CHECK(res.forwarding_rate() == doctest::Approx(1.0));
}

TEST_CASE("icarus: forced cooperation under low credit, punish gate under noise") {
  Fixture fx;
  int acts = action_count(fx.pg);
  auto [c1, c2] = best_fixed_pair(fx.rho, fx.tables);
  PairScenario sc = fx.scenario(0.0);

  SUBCASE("selfish pair is pulled up by the credit constraint") {
    IcarusStrategy a(c1, IcarusParams{}, 100, acts, 0.1);
    IcarusStrategy b(c2, IcarusParams{}, 100, acts, 0.1);
    PairRunResult res = run_pairwise_game(sc, a, b, 20, Rng(83));
    CHECK(res.forwarding_rate() > 0.7);
    CHECK(res.forwarding_rate() < 0.95);
  }
  SUBCASE("cooperative pair at eps=0 stays cooperative") {
    IcarusStrategy a(c1, IcarusParams{}, 100, acts);
    IcarusStrategy b(c2, IcarusParams{}, 100, acts);
    PairRunResult res = run_pairwise_game(sc, a, b, 20, Rng(84));
    CHECK(res.forwarding_rate() == doctest::Approx(1.0));
  }
  SUBCASE("heavy misdetection triggers mutual punishment") {
    IcarusStrategy a(c1, IcarusParams{}, 100, acts);
    IcarusStrategy b(c2, IcarusParams{}, 100, acts);
    PairScenario noisy = fx.scenario(0.3);
    PairRunResult res = run_pairwise_game(noisy, a, b, 20, Rng(85));
    CHECK(res.forwarding_rate() < 0.4);
  }
}

TEST_CASE("best_fixed_pair matches a direct expectation scan") {
  Fixture fx;
  auto [k1, k2] = best_fixed_pair(fx.rho, fx.tables);
  int acts = action_count(fx.pg);
  double best = -1e300;
  std::pair<int, int> want{1, 1};
  for (int a = 1; a <= acts; ++a)
    for (int b = 1; b <= acts; ++b) {
      double sum = 0.0;
      for (int a0 = 0; a0 < fx.rho.state_count(); ++a0) {
        NetworkState st = state_from_index(fx.cg, a0);
        Action aa = action_from_index(fx.pg, a);
        Action ab = action_from_index(fx.pg, b);
        sum += fx.rho.rho(a0) * (utility(st, aa, ab, 1, fx.params) +
                                 utility(st, aa, ab, 2, fx.params));
      }
      if (sum > best + 1e-15) {
        best = sum;
        want = {a, b};
      }
    }
  CHECK(k1 == want.first);
  CHECK(k2 == want.second);
}

// ---------------------------------------------------------------------------
// equilibrium-analyzer

TEST_CASE("utility gaps: direct-summation oracle and the alpha=0 sign structure") {
  Fixture fx(0.0);  // alpha = 0
  UtilityGaps g = utility_gaps(fx.rho, fx.theta, fx.f1, fx.f2, fx.tables);

  // Independent summation straight from utility().
  double uk1 = 0, self1 = 0, peer1 = 0;
  Action a_min = action_from_index(fx.pg, 1);
  for (int a0 = 0; a0 < fx.rho.state_count(); ++a0) {
    NetworkState st = state_from_index(fx.cg, a0);
    for (const auto& e : fx.theta.rows[a0]) {
      double w = fx.rho.rho(a0) * e.p;
      Action a1 = action_from_index(fx.pg, fx.f1[e.s1]);
      Action a2 = action_from_index(fx.pg, fx.f2[e.s2]);
      uk1 += w * utility(st, a1, a2, 1, fx.params);
      self1 += w * utility(st, a_min, a2, 1, fx.params);
      peer1 += w * utility(st, a1, a_min, 1, fx.params);
    }
  }
  CHECK(g.c1 == doctest::Approx(self1 - uk1).epsilon(1e-10));
  CHECK(g.r1 == doctest::Approx(uk1 - peer1).epsilon(1e-10));

  // With alpha=0 and P_min=0, defecting only destroys phi: c_i = -E[phi] <= 0
  // and r_i = E[phi] >= 0.
  CHECK(g.c1 <= 1e-12);
  CHECK(g.r1 >= -1e-12);
  CHECK(g.c1 == doctest::Approx(-g.r1).epsilon(1e-9));
  CHECK(g.c2 == doctest::Approx(-g.r2).epsilon(1e-9));
}

TEST_CASE("utility gaps: symmetric instance gives c1=c2, r1=r2") {
  Fixture fx(0.01);
  UtilityGaps g = utility_gaps(fx.rho, fx.theta, fx.f1, fx.f2, fx.tables);
  CHECK(g.c1 == doctest::Approx(g.c2).epsilon(1e-9));
  CHECK(g.r1 == doctest::Approx(g.r2).epsilon(1e-9));
}

TEST_CASE("utility gaps degenerate to single-profile differences at H=1") {
  PowerGrid pg(std::vector<double>{0.5, 10.0});
  ChannelGrid cg(std::vector<double>{1.0});
  GameParams params;
  params.alpha = 0.01;
  params.spectral_eff = 3.0;
  StateDistribution rho = StateDistribution::quantized_rayleigh(cg, {1, 1, 1, 1});
  SignalStructure theta = make_signal_structure(SignalKind::None, cg);
  GameTables tables = build_game_tables(pg, cg, params);
  std::vector<int> f = {4};  // (P_max, P_max)
  UtilityGaps g = utility_gaps(rho, theta, f, f, tables);
  NetworkState st = make_state(cg, 0, 0, 0, 0);
  Action star = action_from_index(pg, 4);
  Action amin = action_from_index(pg, 1);
  CHECK(g.c1 == doctest::Approx(utility(st, amin, star, 1, params) -
                                utility(st, star, star, 1, params))
                    .epsilon(1e-12));
  CHECK(g.r1 == doctest::Approx(utility(st, star, star, 1, params) -
                                utility(st, star, amin, 1, params))
                    .epsilon(1e-12));
}

TEST_CASE("min discount: corners, eps blowup, and the 1/(1-2eps) doubling") {
  UtilityGaps peaceful{-0.1, 0.5, -0.2, 0.4};
  CHECK(min_discount(peaceful, 0.0) == 0.0);

  UtilityGaps tempted{0.05, 0.2, 0.04, 0.2};
  double d0 = min_discount(tempted, 0.0);
  CHECK(d0 == doctest::Approx(0.25));
  CHECK(min_discount(tempted, 0.25) == doctest::Approx(2 * d0));
  CHECK(std::isinf(min_discount(tempted, 0.5)));

  UtilityGaps broken{0.05, 0.0, 0.0, 0.1};  // positive c with nonpositive r
  CHECK(std::isinf(min_discount(broken, 0.0)));
  CHECK_THROWS(min_discount(tempted, 0.6));
}

TEST_CASE("min discount is monotone in c, r, and eps") {
  UtilityGaps base{0.05, 0.2, 0.03, 0.25};
  double d = min_discount(base, 0.1);
  for (double dc = 0.0; dc <= 0.04; dc += 0.01) {
    UtilityGaps g = base;
    g.c1 += dc;
    CHECK(min_discount(g, 0.1) >= d - 1e-12);
  }
  for (double dr = 0.0; dr <= 0.2; dr += 0.05) {
    UtilityGaps g = base;
    g.r1 += dr;
    CHECK(min_discount(g, 0.1) <= d + 1e-12);
  }
  double prev = 0.0;
  for (double eps = 0.0; eps < 0.49; eps += 0.05) {
    double v = min_discount(base, eps);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("equilibrium report: feasibility flag and csv-ready fields") {
  Rng rng(16);
  std::vector<TwoNodeScenario> instances = equilibrium_instances(5, 0.0, rng);
  for (const auto& sc : instances) {
    EquilibriumReport rep = sc.equilibrium();
    CHECK(rep.delta_min >= 0.0);
    CHECK(rep.feasible == (rep.delta_min < 1.0));
  }
}

TEST_CASE("one-shot deviation oracle: null deviation and myopic incentives") {
  Rng rng(17);
  // alpha=0.01, H=1 instance: delta_min is interior.
  std::vector<TwoNodeScenario> instances = equilibrium_instances(3, 0.0, rng);
  const TwoNodeScenario& sc = instances[2];
  EquilibriumReport rep = sc.equilibrium();
  REQUIRE(rep.gaps.c1 > 0.0);
  REQUIRE(rep.feasible);
  REQUIRE(rep.delta_min > 0.1);

  // d = 0 changes nothing.
  CHECK(verify_one_shot_deviation(sc, 0.5, 2, 0.0, 60, 4, rng.child(1)));
  // delta = 0 weights stage 0 only: the myopic gain c > 0 makes deviating
  // there profitable.
  CHECK_FALSE(verify_one_shot_deviation(sc, 0.0, 0, 1.0, 60, 4, rng.child(2)));
  // Above the threshold no sampled deviation pays; below, d=1 does.
  double above = std::min(0.95, rep.delta_min + 0.05);
  int horizon = deviation_horizon(above);
  for (int tau : {1, 2, 3})
    for (double d : {0.25, 0.5, 1.0})
      CHECK(verify_one_shot_deviation(sc, above, tau, d, horizon, 8,
                                      rng.child(3, tau, int(d * 100))));
  double below = rep.delta_min - 0.05;
  REQUIRE(below > 0.0);
  bool some_profit = false;
  for (int tau : {1, 2, 3})
    for (double d : {0.25, 0.5, 1.0})
      if (!verify_one_shot_deviation(sc, below, tau, d,
                                     deviation_horizon(below), 8,
                                     rng.child(4, tau, int(d * 100))))
        some_profit = true;
  CHECK(some_profit);
}
