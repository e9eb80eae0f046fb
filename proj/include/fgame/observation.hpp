#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "fgame/game.hpp"
#include "fgame/rng.hpp"

namespace fgame {

enum class SignalKind { Global, Local, None, Custom };

struct SignalEntry {
  int s1 = 0;
  int s2 = 0;
  double p = 1.0;
};

// Memoryless state observation structure: rows[a0] lists the (s1, s2) pairs
// with positive probability given that network state.
struct SignalStructure {
  SignalKind kind = SignalKind::None;
  int s1_count = 1;
  int s2_count = 1;
  std::vector<std::vector<SignalEntry>> rows;  // per a0 index
  bool deterministic = true;

  int state_count() const { return static_cast<int>(rows.size()); }
  std::pair<int, int> sample(int a0_index, Rng& rng) const;
  // Marginal P(s_i | a0) for node i in {1,2}.
  std::vector<double> marginal(int node, int a0_index) const;
  void validate() const;
};

// global: s_i = a0; local: s_1=(h1,h1'), s_2=(h2,h2'); none: |S_i| = 1.
SignalStructure make_signal_structure(SignalKind kind, const ChannelGrid& grid);
SignalStructure make_custom_structure(int s1_count, int s2_count,
                                      std::vector<std::vector<SignalEntry>> rows);

// Text format, one row entry per line: "row <a0> <s1> <s2> <prob>" after
// "states <n>" / "s1_count <n>" / "s2_count <n>" headers; '#' comments.
SignalStructure load_signal_structure(std::istream& in);
SignalStructure load_signal_structure_file(const std::string& path);
void save_signal_structure(std::ostream& out, const SignalStructure& theta);

// Local-CSI signal index for node 1: (i1, i1p); node 2: (i2, i2p).
inline int local_signal(int gain_count, int own, int own_coop) {
  return own * gain_count + own_coop;
}

enum class MonitorSignal { Forward, Drop };

// Which actions read as Drop: the prose rule (action == a^min) or the
// forwarding-power rule (p' == P_min), kept for experimentation.
enum class DropRule { MinAction, NoCoopPower };

struct MonitoringParams {
  double epsilon = 0.0;  // misdetection probability, in [0, 0.5]
  DropRule rule = DropRule::MinAction;

  void validate() const;
};

inline bool action_is_drop(const Action& a, DropRule rule) {
  return rule == DropRule::MinAction ? a.index == 1 : a.coop_idx == 0;
}

// True signal flipped with probability eps.
MonitorSignal monitor_action(const Action& observed, const MonitoringParams& mp,
                             Rng& rng);

}  // namespace fgame
