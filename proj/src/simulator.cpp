#include "fgame/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "fgame/parallel.hpp"

namespace fgame {

namespace {

// Per-stage substream purposes; keeps deviated and baseline replays aligned.
enum StageStream : std::uint64_t {
  kState = 0,
  kSignals = 1,
  kDecide1 = 2,
  kDecide2 = 3,
  kAct1 = 4,
  kAct2 = 5,
  kMonitor12 = 6,
  kMonitor21 = 7,
};

int binomial(int n, double p, Rng& rng) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<int> dist(n, p);
  return dist(rng);
}

bool drop_by_rule(int action_k, int power_count, DropRule rule) {
  if (rule == DropRule::MinAction) return action_k == 1;
  return (action_k - 1) % power_count == 0;  // p' at P_min
}

}  // namespace

PairGame::PairGame(const PairScenario& sc, TransmissionStrategy& node1,
                   TransmissionStrategy& node2)
    : sc_(sc), node1_(node1), node2_(node2) {
  if (!sc.power || !sc.gains || !sc.game || !sc.tables || !sc.rho || !sc.theta)
    throw std::invalid_argument("PairGame: incomplete scenario");
  sc.monitoring.validate();
}

StageRecord PairGame::step(int t, const Rng& frame_rng) {
  StageRecord rec;
  rec.t = t;
  const int l = sc_.power->size();
  const int h = sc_.gains->size();

  // Stage state: quantized a0 index, plus the continuous gains when asked.
  std::array<double, 4> gains_cont{};
  int a0;
  {
    Rng r = frame_rng.child(kState);
    if (sc_.continuous_states) {
      gains_cont = sc_.rho->sample_continuous(r);
      a0 = state_index(h, sc_.gains->nearest(gains_cont[0]),
                       sc_.gains->nearest(gains_cont[1]),
                       sc_.gains->nearest(gains_cont[2]),
                       sc_.gains->nearest(gains_cont[3]));
    } else {
      a0 = sc_.rho->sample(r).index;
    }
  }
  {
    Rng r = frame_rng.child(kSignals);
    auto [s1, s2] = sc_.theta->sample(a0, r);
    rec.s1 = s1;
    rec.s2 = s2;
  }

  Rng r_d1 = frame_rng.child(kDecide1);
  Rng r_d2 = frame_rng.child(kDecide2);
  StageDecision pi1 = node1_.decide(t, rec.s1, r_d1);
  if (hook_) hook_(t, rec.s1, pi1);
  StageDecision pi2 = node2_.decide(t, rec.s2, r_d2);
  rec.fwd_prob1 = pi1.forward_probability();
  rec.fwd_prob2 = pi2.forward_probability();
  for (std::size_t a = 0; a < pi1.pi.size(); ++a) {
    rec.epow1 += pi1.pi[a] * sc_.tables->power_sum[a];
    rec.epow2 += pi2.pi[a] * sc_.tables->power_sum[a];
  }

  {
    Rng r = frame_rng.child(kAct1);
    rec.k1 = pi1.sample_action(r);
  }
  {
    Rng r = frame_rng.child(kAct2);
    rec.k2 = pi2.sample_action(r);
  }

  if (sc_.continuous_states) {
    int a1 = rec.k1 - 1, a2 = rec.k2 - 1;
    double p1 = sc_.power->levels[a1 / l], c1 = sc_.power->levels[a1 % l];
    double p2 = sc_.power->levels[a2 / l], c2 = sc_.power->levels[a2 % l];
    const GameParams& g = *sc_.game;
    rec.u1 = efficiency(p1 * gains_cont[0] * c2 * gains_cont[3] / g.sigma2, g) -
             g.alpha * (p1 + c1);
    rec.u2 = efficiency(p2 * gains_cont[2] * c1 * gains_cont[1] / g.sigma2, g) -
             g.alpha * (p2 + c2);
  } else {
    int i2p = a0 % h;
    int i2 = (a0 / h) % h;
    int i1p = (a0 / (h * h)) % h;
    int i1 = a0 / (h * h * h);
    rec.u1 = sc_.tables->u1(i1, i2p, rec.k1, rec.k2);
    rec.u2 = sc_.tables->u2(i1p, i2, rec.k1, rec.k2);
  }

  // K noisy per-packet observations of the peer's stage action.
  double eps = sc_.monitoring.epsilon;
  {
    Rng r = frame_rng.child(kMonitor12);
    bool drop2 = drop_by_rule(rec.k2, l, sc_.monitoring.rule);
    rec.obs_f_12 = binomial(sc_.packets, drop2 ? eps : 1.0 - eps, r);
  }
  {
    Rng r = frame_rng.child(kMonitor21);
    bool drop1 = drop_by_rule(rec.k1, l, sc_.monitoring.rule);
    rec.obs_f_21 = binomial(sc_.packets, drop1 ? eps : 1.0 - eps, r);
  }

  node1_.record({t, pi1.pi, rec.obs_f_12, sc_.packets - rec.obs_f_12,
                 sc_.packets});
  node2_.record({t, pi2.pi, rec.obs_f_21, sc_.packets - rec.obs_f_21,
                 sc_.packets});
  return rec;
}

PairRunResult run_pairwise_game(const PairScenario& sc,
                                TransmissionStrategy& node1,
                                TransmissionStrategy& node2, int frames,
                                const Rng& pair_rng) {
  PairGame game(sc, node1, node2);
  PairRunResult res;
  res.frame_forwarded.resize(frames, 0.0);
  auto track_credit = [&](const TransmissionStrategy& s) {
    if (const NodeLedger* led = s.ledger()) {
      res.credit_min = std::min(res.credit_min, led->credit);
      res.credit_max = std::max(res.credit_max, led->credit);
    }
  };
  track_credit(node1);
  track_credit(node2);
  for (int t = 0; t < frames; ++t) {
    StageRecord rec = game.step(t, pair_rng.child(t));
    long fwd = long(sc.packets) * ((rec.k1 != 1) + (rec.k2 != 1));
    res.forwarded += fwd;
    res.opportunities += 2L * sc.packets;
    res.frame_forwarded[t] = double(fwd) / (2.0 * sc.packets);
    res.utility_sum += rec.u1 + rec.u2;
    res.radiated_sum += rec.epow1 + rec.epow2;
    track_credit(node1);
    track_credit(node2);
  }
  return res;
}

Topology generate_topology(int n, double area_w, double area_h, double range,
                           int max_attempts, Rng& rng) {
  if (n < 1) throw std::invalid_argument("generate_topology: n < 1");
  Topology topo;
  topo.range = range;
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    topo.pos.clear();
    topo.pairs.clear();
    topo.dist.clear();
    for (int i = 0; i < n; ++i)
      topo.pos.push_back({rng.uniform01() * area_w, rng.uniform01() * area_h});
    std::vector<int> degree(n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double dx = topo.pos[i][0] - topo.pos[j][0];
        double dy = topo.pos[i][1] - topo.pos[j][1];
        double d = std::sqrt(dx * dx + dy * dy);
        if (d <= range) {
          topo.pairs.push_back({i, j});
          topo.dist.push_back(d);
          ++degree[i];
          ++degree[j];
        }
      }
    bool ok = true;
    for (int i = 0; i < n; ++i)
      if (degree[i] == 0) {
        ok = false;
        break;
      }
    if (ok) {
      topo.attempts = attempt;
      return topo;
    }
  }
  throw std::runtime_error(
      "generate_topology: no draw with every node connected within " +
      std::to_string(max_attempts) + " attempts; check n/range");
}

StrategyKind strategy_kind_from_string(const std::string& s) {
  if (s == "sara") return StrategyKind::Sara;
  if (s == "gtft") return StrategyKind::Gtft;
  if (s == "icarus") return StrategyKind::Icarus;
  if (s == "defect") return StrategyKind::AlwaysDefect;
  if (s == "coop") return StrategyKind::FullCooperation;
  throw std::invalid_argument("unknown strategy '" + s +
                              "' (sara|gtft|icarus|defect|coop)");
}

std::string to_string(StrategyKind k) {
  switch (k) {
    case StrategyKind::Sara: return "sara";
    case StrategyKind::Gtft: return "gtft";
    case StrategyKind::Icarus: return "icarus";
    case StrategyKind::AlwaysDefect: return "defect";
    case StrategyKind::FullCooperation: return "coop";
  }
  return "?";
}

void SimConfig::validate() const {
  game.validate();
  credit.validate();
  path_loss.validate();
  if (n_nodes < 2) throw std::invalid_argument("SimConfig: need >= 2 nodes");
  if (area_w <= 0 || area_h <= 0) throw std::invalid_argument("SimConfig: area");
  if (range < 0) throw std::invalid_argument("SimConfig: range < 0");
  if (frames < 1) throw std::invalid_argument("SimConfig: frames < 1");
  if (packets_per_frame() < 1)
    throw std::invalid_argument("SimConfig: packets per frame < 1");
  if (selfish_fraction < 0.0 || selfish_fraction > 1.0)
    throw std::invalid_argument("SimConfig: selfish fraction outside [0,1]");
  if (epsilon < 0.0 || epsilon > 0.5)
    throw std::invalid_argument("SimConfig: epsilon outside [0,0.5]");
  if (topology_draws < 1) throw std::invalid_argument("SimConfig: draws < 1");
  if (workers < 1) throw std::invalid_argument("SimConfig: workers < 1");
  if (policy_buckets < 1) throw std::invalid_argument("SimConfig: buckets < 1");
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("SimConfig: lambda outside [0,1]");
}

std::pair<double, double> anp(double radiated_mean_per_frame, int n_nodes,
                              double a_coeff, double b_coeff) {
  if (a_coeff < 0.0 || b_coeff < 0.0)
    throw std::invalid_argument("anp: coefficients must be nonnegative");
  double watts = a_coeff * radiated_mean_per_frame + b_coeff * n_nodes;
  double dbm = 10.0 * std::log10(watts * 1000.0);
  return {watts, dbm};
}

PolicyBank::PolicyBank(const SimConfig& cfg, const GameTables& tables,
                       const SignalStructure& theta, const Rng& rng)
    : gains_(cfg.gains),
      mode_(cfg.mean_mode),
      path_loss_(cfg.path_loss),
      range_(cfg.range),
      buckets_(cfg.mean_mode == ChannelMeanMode::Unit ? 1 : cfg.policy_buckets) {
  Algorithm1Options opts;
  f1_.resize(buckets_);
  f2_.resize(buckets_);
  for (int b = 0; b < buckets_; ++b) {
    double mean = 1.0;
    if (mode_ == ChannelMeanMode::PathLoss) {
      double center = (b + 0.5) * range_ / buckets_;
      mean = path_loss_mean(center, path_loss_);
    }
    StateDistribution rho = StateDistribution::quantized_rayleigh(
        gains_, {mean, mean, mean, mean});
    Rng lane = rng.child(0xB0C4E7u, b);
    RestartResult res = algorithm1_restarts(cfg.lambda, rho, theta, tables, opts,
                                            cfg.policy_restarts, lane);
    f1_[b] = res.best.f1.decision_function();
    f2_[b] = res.best.f2.decision_function();
  }
  StateDistribution unit_rho =
      StateDistribution::quantized_rayleigh(gains_, {1, 1, 1, 1});
  fixed_pair_ = best_fixed_pair(unit_rho, tables);
}

int PolicyBank::bucket(double distance) const {
  if (buckets_ == 1) return 0;
  int b = int(distance / (range_ / buckets_));
  return std::clamp(b, 0, buckets_ - 1);
}

const std::vector<int>& PolicyBank::policy1(double d) const {
  return f1_[bucket(d)];
}
const std::vector<int>& PolicyBank::policy2(double d) const {
  return f2_[bucket(d)];
}

StateDistribution PolicyBank::pair_distribution(double distance) const {
  double mean = 1.0;
  if (mode_ == ChannelMeanMode::PathLoss)
    mean = path_loss_mean(distance, path_loss_);
  return StateDistribution::quantized_rayleigh(gains_, {mean, mean, mean, mean});
}

namespace {

struct DrawAccum {
  long forwarded = 0;
  long opportunities = 0;
  double utility_sum = 0.0;
  long pair_stages = 0;
  double radiated_sum = 0.0;
  double credit_min = std::numeric_limits<double>::infinity();
  double credit_max = -std::numeric_limits<double>::infinity();
  std::vector<double> frame_forwarded;  // summed fractions
  long frame_pairs = 0;
  double degree = 0.0;
  int attempts = 0;
  long pair_games = 0;
};

std::unique_ptr<TransmissionStrategy> make_strategy(
    const SimConfig& cfg, const PolicyBank& bank, int side, double distance,
    bool selfish, int packets) {
  int acts = action_count(cfg.power);
  double rate = selfish ? cfg.selfish_initial_rate : 1.0;
  const std::vector<int>& f =
      side == 1 ? bank.policy1(distance) : bank.policy2(distance);
  int coop =
      side == 1 ? bank.fixed_pair().first : bank.fixed_pair().second;
  switch (cfg.strategy) {
    case StrategyKind::Sara:
      return std::make_unique<SaraStrategy>(f, cfg.credit, cfg.epsilon, acts,
                                            rate);
    case StrategyKind::Gtft:
      return std::make_unique<GtftStrategy>(coop, cfg.gtft_generosity,
                                            cfg.gtft_window, acts, rate);
    case StrategyKind::Icarus:
      return std::make_unique<IcarusStrategy>(coop, cfg.icarus, packets, acts,
                                              rate);
    case StrategyKind::AlwaysDefect:
      return std::make_unique<AlwaysDefectStrategy>(acts);
    case StrategyKind::FullCooperation:
      return std::make_unique<FixedPolicyStrategy>(f, acts);
  }
  throw std::logic_error("make_strategy: unreachable");
}

}  // namespace

Metrics run_simulation(const SimConfig& cfg) {
  cfg.validate();
  GameTables tables = build_game_tables(cfg.power, cfg.gains, cfg.game);
  SignalStructure theta = make_signal_structure(cfg.csi, cfg.gains);
  Rng master(cfg.seed);
  PolicyBank bank(cfg, tables, theta, master.child(0xBA17u));

  int frames = cfg.frames;
  int packets = cfg.packets_per_frame();
  std::vector<DrawAccum> accums(cfg.topology_draws);

  parallel_for(cfg.topology_draws, cfg.workers, [&](std::size_t draw) {
    Rng draw_rng = master.child(0xD7A3u, draw);
    Rng topo_rng = draw_rng.child(0);
    Topology topo = generate_topology(cfg.n_nodes, cfg.area_w, cfg.area_h,
                                      cfg.range, cfg.max_topology_attempts,
                                      topo_rng);
    DrawAccum& acc = accums[draw];
    acc.frame_forwarded.assign(frames, 0.0);
    acc.degree = topo.mean_degree(cfg.n_nodes);
    acc.attempts = topo.attempts;

    // Node-level selfish assignment by shuffle.
    std::vector<int> order(cfg.n_nodes);
    for (int i = 0; i < cfg.n_nodes; ++i) order[i] = i;
    Rng shuffle_rng = draw_rng.child(1);
    for (int i = cfg.n_nodes - 1; i > 0; --i) {
      int j = int(shuffle_rng.uniform_index(i + 1));
      std::swap(order[i], order[j]);
    }
    int selfish_count = int(std::lround(cfg.selfish_fraction * cfg.n_nodes));
    std::vector<char> selfish(cfg.n_nodes, 0);
    for (int i = 0; i < selfish_count; ++i) selfish[order[i]] = 1;

    for (std::size_t p = 0; p < topo.pairs.size(); ++p) {
      auto [i, j] = topo.pairs[p];
      double d = topo.dist[p];
      StateDistribution rho = bank.pair_distribution(d);
      PairScenario sc;
      sc.power = &cfg.power;
      sc.gains = &cfg.gains;
      sc.game = &cfg.game;
      sc.tables = &tables;
      sc.rho = &rho;
      sc.theta = &theta;
      sc.monitoring = {cfg.epsilon, cfg.drop_rule};
      sc.packets = packets;
      auto s1 = make_strategy(cfg, bank, 1, d, selfish[i], packets);
      auto s2 = make_strategy(cfg, bank, 2, d, selfish[j], packets);
      PairRunResult res =
          run_pairwise_game(sc, *s1, *s2, frames, draw_rng.child(2, p));
      acc.forwarded += res.forwarded;
      acc.opportunities += res.opportunities;
      acc.utility_sum += res.utility_sum;
      acc.pair_stages += frames;
      acc.radiated_sum += res.radiated_sum;
      acc.credit_min = std::min(acc.credit_min, res.credit_min);
      acc.credit_max = std::max(acc.credit_max, res.credit_max);
      for (int t = 0; t < frames; ++t)
        acc.frame_forwarded[t] += res.frame_forwarded[t];
      acc.frame_pairs += 1;
      acc.pair_games += 1;
    }
  });

  // Deterministic reduction in draw order.
  Metrics m;
  m.frame_forwarding.assign(frames, 0.0);
  double degree_sum = 0.0;
  long attempts_sum = 0;
  long pair_stages = 0;
  long frame_pairs = 0;
  for (const DrawAccum& acc : accums) {
    m.forwarded += acc.forwarded;
    m.opportunities += acc.opportunities;
    m.mean_pair_utility += acc.utility_sum;
    pair_stages += acc.pair_stages;
    m.radiated_mean_per_frame += acc.radiated_sum;
    m.credit_min = std::min(m.credit_min, acc.credit_min);
    m.credit_max = std::max(m.credit_max, acc.credit_max);
    for (int t = 0; t < frames; ++t)
      m.frame_forwarding[t] += acc.frame_forwarded[t];
    frame_pairs += acc.frame_pairs;
    degree_sum += acc.degree;
    attempts_sum += acc.attempts;
    m.pair_games += acc.pair_games;
  }
  m.forwarding_rate =
      m.opportunities ? double(m.forwarded) / m.opportunities : 0.0;
  m.mean_pair_utility =
      pair_stages ? m.mean_pair_utility / (2.0 * pair_stages) : 0.0;
  m.radiated_mean_per_frame /= double(cfg.topology_draws) * frames;
  auto [watts, dbm] = anp(m.radiated_mean_per_frame, cfg.n_nodes, cfg.anp_a,
                          cfg.anp_b);
  m.anp_watts = watts;
  m.anp_dbm = dbm;
  m.mean_degree = degree_sum / cfg.topology_draws;
  m.topology_acceptance = double(cfg.topology_draws) / attempts_sum;
  if (frame_pairs > 0)
    for (int t = 0; t < frames; ++t)
      m.frame_forwarding[t] /= double(frame_pairs);
  return m;
}

std::vector<QuantizationRow> quantization_loss_experiment(
    const QuantizationConfig& cfg) {
  cfg.game.validate();
  std::vector<int> hs = cfg.h_values;
  if (std::find(hs.begin(), hs.end(), cfg.h_reference) == hs.end())
    hs.push_back(cfg.h_reference);

  Rng master(cfg.seed);
  std::vector<double> welfare(hs.size(), 0.0);
  parallel_for(hs.size(), cfg.workers, [&](std::size_t idx) {
    int h = hs[idx];
    ChannelGrid grid = ChannelGrid::uniform(h, cfg.gain_lo, cfg.gain_hi);
    GameTables tables = build_game_tables(cfg.power, grid, cfg.game);
    SignalStructure theta = make_signal_structure(cfg.csi, grid);
    StateDistribution rho =
        StateDistribution::quantized_rayleigh(grid, cfg.means);
    Algorithm1Options opts;
    Rng train_rng = master.child(0x0AB7u, h);
    RestartResult trained =
        algorithm1_restarts(cfg.lambda, rho, theta, tables, opts, 3, train_rng);
    std::vector<int> f1 = trained.best.f1.decision_function();
    std::vector<int> f2 = trained.best.f2.decision_function();
    int acts = action_count(cfg.power);

    double total = 0.0;
    long stages = 0;
    for (int s = 0; s < cfg.seeds; ++s) {
      SaraStrategy n1(f1, cfg.credit, 0.0, acts);
      SaraStrategy n2(f2, cfg.credit, 0.0, acts);
      PairScenario sc;
      sc.power = &cfg.power;
      sc.gains = &grid;
      sc.game = &cfg.game;
      sc.tables = &tables;
      sc.rho = &rho;
      sc.theta = &theta;
      sc.monitoring = {0.0, DropRule::MinAction};
      sc.packets = 100;
      sc.continuous_states = true;
      // Common random numbers across H: the evaluation stream depends only on
      // the seed index, and continuous draws consume a fixed count per stage.
      Rng eval_rng = Rng(cfg.seed).child(0xE7A1u, s);
      PairRunResult res = run_pairwise_game(sc, n1, n2, cfg.frames, eval_rng);
      total += res.utility_sum;
      stages += cfg.frames;
    }
    welfare[idx] = total / stages;  // mean u1+u2 per stage
  });

  double ref = 0.0;
  for (std::size_t i = 0; i < hs.size(); ++i)
    if (hs[i] == cfg.h_reference) ref = welfare[i];
  std::vector<QuantizationRow> rows;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (hs[i] == cfg.h_reference &&
        std::find(cfg.h_values.begin(), cfg.h_values.end(), cfg.h_reference) ==
            cfg.h_values.end())
      continue;
    QuantizationRow row;
    row.h = hs[i];
    row.social_welfare = welfare[i];
    row.loss = (ref - welfare[i]) / std::abs(ref);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fgame
