#pragma once

#include <utility>
#include <vector>

namespace fgame {

// Discrete transmit-power set P = {P_1, ..., P_L}, P_1 = P_min, P_L = P_max.
struct PowerGrid {
  std::vector<double> levels;

  PowerGrid() = default;
  explicit PowerGrid(std::vector<double> lv);

  int size() const { return static_cast<int>(levels.size()); }
  double min_power() const { return levels.front(); }
  double max_power() const { return levels.back(); }

  // {0} followed by count-1 levels geometric (uniform in dB) from
  // min_positive_w to max_w.
  static PowerGrid uniform_db(int count, double min_positive_w, double max_w);
  // L=10, P_min=0, P_max=10 W, minimal positive power 10 mW.
  static PowerGrid defaults();
};

// Discrete channel-gain set H = {h_min, ..., h_max}.
struct ChannelGrid {
  std::vector<double> levels;

  ChannelGrid() = default;
  explicit ChannelGrid(std::vector<double> lv);

  int size() const { return static_cast<int>(levels.size()); }

  // count uniformly spaced gains from lo to hi inclusive (count==1 -> {lo}).
  static ChannelGrid uniform(int count, double lo, double hi);
  // H=10, h_min=0.04, h_max=10.
  static ChannelGrid defaults();

  int nearest(double gain) const;  // index of the closest level
};

// a_i = (p_i, p_i'); index is the 1-based lexicographic position in P x P,
// index 1 <=> (P_1,P_1), index L^2 <=> (P_L,P_L).
struct Action {
  double p = 0.0;
  double p_coop = 0.0;
  int p_idx = 0;
  int coop_idx = 0;
  int index = 1;
};

inline int action_count(const PowerGrid& g) { return g.size() * g.size(); }
inline int action_index(int power_count, int p_idx, int coop_idx) {
  return p_idx * power_count + coop_idx + 1;
}
Action make_action(const PowerGrid& g, int p_idx, int coop_idx);
Action action_from_index(const PowerGrid& g, int index);
inline bool is_min_action(int index) { return index == 1; }

// Network state a_0 = (h1, h1', h2, h2'); index 0-based, h2' fastest.
struct NetworkState {
  double h1 = 0, h1p = 0, h2 = 0, h2p = 0;
  int i1 = 0, i1p = 0, i2 = 0, i2p = 0;
  int index = 0;
};

inline int state_count(const ChannelGrid& g) {
  int h = g.size();
  return h * h * h * h;
}
inline int state_index(int gain_count, int i1, int i1p, int i2, int i2p) {
  return ((i1 * gain_count + i1p) * gain_count + i2) * gain_count + i2p;
}
NetworkState make_state(const ChannelGrid& g, int i1, int i1p, int i2, int i2p);
NetworkState state_from_index(const ChannelGrid& g, int index);

enum class EfficiencyModel {
  ExpRate,       // phi(x) = exp(-c/x), c = 2^r - 1
  BlockSuccess,  // phi(x) = (1 - exp(-x))^ell
};

struct GameParams {
  double alpha = 0.01;        // energy weight (1/W)
  double sigma2 = 0.1;        // noise variance (W)
  double spectral_eff = 1.0;  // r, bit/s/Hz (ExpRate)
  EfficiencyModel phi_kind = EfficiencyModel::ExpRate;
  double block_symbols = 100.0;  // ell (BlockSuccess)

  void validate() const;
};

// Packet success rate, monotone nondecreasing, in [0,1]; phi(0)=0 by the
// continuous extension of exp(-c/x).
double efficiency(double x, const GameParams& params);

// Equivalent SNR at the node after the relay: p_i h_i p'_{-i} h'_{-i} / sigma^2.
double snr(const NetworkState& s, const Action& a1, const Action& a2, int node,
           const GameParams& params);

// u_i = phi(SNR_i) - alpha (p_i + p'_i).
double utility(const NetworkState& s, const Action& a1, const Action& a2,
               int node, const GameParams& params);

// Unique NE of the stage game: both nodes at (P_min, P_min).
std::pair<Action, Action> static_nash(const PowerGrid& g,
                                      const GameParams& params);

// Exhaustive unilateral-deviation scan of a profile over every network state;
// returns the largest utility improvement found (<= 0 means the profile is a
// per-state Nash equilibrium).
double nash_deviation_gain(const PowerGrid& pg, const ChannelGrid& cg,
                           const GameParams& params,
                           const std::pair<Action, Action>& profile);

// Precomputed phi/cost tables used by the solvers and simulators.
// phi is indexed by amplitude products: g(p_idx, h_idx) = p_idx*H + h_idx,
// phi[g1*LH + g2] = efficiency(levels_p[p1]*levels_h[h1]*levels_p[p2]*levels_h[h2]/sigma2).
struct GameTables {
  int power_count = 0;   // L
  int gain_count = 0;    // H
  double alpha = 0.0;
  std::vector<double> phi;        // (L*H)^2
  std::vector<double> cost;       // L^2, alpha*(p+p')
  std::vector<double> power_sum;  // L^2, p+p'

  double phi_at(int p_idx, int h_idx, int pc_idx, int hc_idx) const {
    int lh = power_count * gain_count;
    return phi[(p_idx * gain_count + h_idx) * lh + (pc_idx * gain_count + hc_idx)];
  }
  // k1, k2 are 1-based lexicographic action indices.
  double u1(int i1, int i2p, int k1, int k2) const {
    int a = k1 - 1, b = k2 - 1;
    return phi_at(a / power_count, i1, b % power_count, i2p) - cost[a];
  }
  double u2(int i1p, int i2, int k1, int k2) const {
    int a = k1 - 1, b = k2 - 1;
    return phi_at(b / power_count, i2, a % power_count, i1p) - cost[b];
  }
};

GameTables build_game_tables(const PowerGrid& pg, const ChannelGrid& cg,
                             const GameParams& params);

}  // namespace fgame
