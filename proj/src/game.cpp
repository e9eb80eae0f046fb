#include "fgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fgame {

PowerGrid::PowerGrid(std::vector<double> lv) : levels(std::move(lv)) {
  if (levels.size() < 2) throw std::invalid_argument("PowerGrid: need L >= 2");
  if (levels.front() < 0.0)
    throw std::invalid_argument("PowerGrid: negative power level");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw std::invalid_argument("PowerGrid: levels must be strictly increasing");
}

PowerGrid PowerGrid::uniform_db(int count, double min_positive_w, double max_w) {
  if (count < 2) throw std::invalid_argument("PowerGrid: need L >= 2");
  if (min_positive_w <= 0.0 || max_w <= min_positive_w)
    throw std::invalid_argument("PowerGrid: bad endpoints");
  std::vector<double> lv;
  lv.reserve(count);
  lv.push_back(0.0);
  int pos = count - 1;
  if (pos == 1) {
    lv.push_back(max_w);
  } else {
    double lo_db = 10.0 * std::log10(min_positive_w);
    double hi_db = 10.0 * std::log10(max_w);
    double step = (hi_db - lo_db) / (pos - 1);
    for (int i = 0; i < pos; ++i)
      lv.push_back(std::pow(10.0, (lo_db + step * i) / 10.0));
    lv.back() = max_w;  // kill rounding on the endpoint
  }
  return PowerGrid(std::move(lv));
}

PowerGrid PowerGrid::defaults() { return uniform_db(10, 0.01, 10.0); }

ChannelGrid::ChannelGrid(std::vector<double> lv) : levels(std::move(lv)) {
  if (levels.empty()) throw std::invalid_argument("ChannelGrid: need H >= 1");
  if (levels.front() < 0.0)
    throw std::invalid_argument("ChannelGrid: negative gain");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw std::invalid_argument("ChannelGrid: levels must be strictly increasing");
}

ChannelGrid ChannelGrid::uniform(int count, double lo, double hi) {
  if (count < 1) throw std::invalid_argument("ChannelGrid: need H >= 1");
  std::vector<double> lv;
  lv.reserve(count);
  if (count == 1) {
    lv.push_back(lo);
  } else {
    double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) lv.push_back(lo + step * i);
    lv.back() = hi;
  }
  return ChannelGrid(std::move(lv));
}

ChannelGrid ChannelGrid::defaults() { return uniform(10, 0.04, 10.0); }

int ChannelGrid::nearest(double gain) const {
  auto it = std::lower_bound(levels.begin(), levels.end(), gain);
  if (it == levels.begin()) return 0;
  if (it == levels.end()) return size() - 1;
  int hi = static_cast<int>(it - levels.begin());
  return (gain - levels[hi - 1] <= levels[hi] - gain) ? hi - 1 : hi;
}

Action make_action(const PowerGrid& g, int p_idx, int coop_idx) {
  if (p_idx < 0 || p_idx >= g.size() || coop_idx < 0 || coop_idx >= g.size())
    throw std::out_of_range("make_action: index outside power grid");
  return Action{g.levels[p_idx], g.levels[coop_idx], p_idx, coop_idx,
                action_index(g.size(), p_idx, coop_idx)};
}

Action action_from_index(const PowerGrid& g, int index) {
  if (index < 1 || index > action_count(g))
    throw std::out_of_range("action_from_index: index outside [1, L^2]");
  int z = index - 1;
  return make_action(g, z / g.size(), z % g.size());
}

NetworkState make_state(const ChannelGrid& g, int i1, int i1p, int i2, int i2p) {
  int h = g.size();
  if (i1 < 0 || i1 >= h || i1p < 0 || i1p >= h || i2 < 0 || i2 >= h || i2p < 0 ||
      i2p >= h)
    throw std::out_of_range("make_state: index outside channel grid");
  return NetworkState{g.levels[i1], g.levels[i1p], g.levels[i2], g.levels[i2p],
                      i1,           i1p,           i2,           i2p,
                      state_index(h, i1, i1p, i2, i2p)};
}

NetworkState state_from_index(const ChannelGrid& g, int index) {
  int h = g.size();
  if (index < 0 || index >= state_count(g))
    throw std::out_of_range("state_from_index: bad index");
  int i2p = index % h;
  int i2 = (index / h) % h;
  int i1p = (index / (h * h)) % h;
  int i1 = index / (h * h * h);
  return make_state(g, i1, i1p, i2, i2p);
}

void GameParams::validate() const {
  if (alpha < 0.0) throw std::invalid_argument("GameParams: alpha < 0");
  if (sigma2 <= 0.0) throw std::invalid_argument("GameParams: sigma2 <= 0");
  if (spectral_eff <= 0.0) throw std::invalid_argument("GameParams: r <= 0");
  if (block_symbols <= 0.0) throw std::invalid_argument("GameParams: ell <= 0");
}

double efficiency(double x, const GameParams& params) {
  if (x < 0.0) throw std::invalid_argument("efficiency: negative SNR");
  switch (params.phi_kind) {
    case EfficiencyModel::ExpRate: {
      if (x == 0.0) return 0.0;
      double c = std::pow(2.0, params.spectral_eff) - 1.0;
      return std::exp(-c / x);
    }
    case EfficiencyModel::BlockSuccess:
      return std::pow(1.0 - std::exp(-x), params.block_symbols);
  }
  return 0.0;
}

double snr(const NetworkState& s, const Action& a1, const Action& a2, int node,
           const GameParams& params) {
  if (node == 1) return a1.p * s.h1 * a2.p_coop * s.h2p / params.sigma2;
  if (node == 2) return a2.p * s.h2 * a1.p_coop * s.h1p / params.sigma2;
  throw std::invalid_argument("snr: node must be 1 or 2");
}

double utility(const NetworkState& s, const Action& a1, const Action& a2,
               int node, const GameParams& params) {
  const Action& own = (node == 1) ? a1 : a2;
  return efficiency(snr(s, a1, a2, node, params), params) -
         params.alpha * (own.p + own.p_coop);
}

std::pair<Action, Action> static_nash(const PowerGrid& g,
                                      const GameParams& params) {
  params.validate();
  Action a_min = make_action(g, 0, 0);
  return {a_min, a_min};
}

double nash_deviation_gain(const PowerGrid& pg, const ChannelGrid& cg,
                           const GameParams& params,
                           const std::pair<Action, Action>& profile) {
  double worst = -1e300;
  int states = state_count(cg);
  int acts = action_count(pg);
  for (int si = 0; si < states; ++si) {
    NetworkState s = state_from_index(cg, si);
    double base1 = utility(s, profile.first, profile.second, 1, params);
    double base2 = utility(s, profile.first, profile.second, 2, params);
    for (int k = 1; k <= acts; ++k) {
      Action dev = action_from_index(pg, k);
      worst = std::max(worst, utility(s, dev, profile.second, 1, params) - base1);
      worst = std::max(worst, utility(s, profile.first, dev, 2, params) - base2);
    }
  }
  return worst;
}

GameTables build_game_tables(const PowerGrid& pg, const ChannelGrid& cg,
                             const GameParams& params) {
  params.validate();
  GameTables t;
  t.power_count = pg.size();
  t.gain_count = cg.size();
  t.alpha = params.alpha;
  int lh = t.power_count * t.gain_count;
  t.phi.resize(std::size_t(lh) * lh);
  for (int p1 = 0; p1 < t.power_count; ++p1)
    for (int h1 = 0; h1 < t.gain_count; ++h1) {
      double amp1 = pg.levels[p1] * cg.levels[h1];
      for (int p2 = 0; p2 < t.power_count; ++p2)
        for (int h2 = 0; h2 < t.gain_count; ++h2) {
          double amp2 = pg.levels[p2] * cg.levels[h2];
          t.phi[std::size_t(p1 * t.gain_count + h1) * lh +
                (p2 * t.gain_count + h2)] =
              efficiency(amp1 * amp2 / params.sigma2, params);
        }
    }
  t.cost.resize(std::size_t(t.power_count) * t.power_count);
  t.power_sum.resize(t.cost.size());
  for (int p = 0; p < t.power_count; ++p)
    for (int c = 0; c < t.power_count; ++c) {
      double sum = pg.levels[p] + pg.levels[c];
      t.power_sum[p * t.power_count + c] = sum;
      t.cost[p * t.power_count + c] = params.alpha * sum;
    }
  return t;
}

}  // namespace fgame
