#pragma once

#include <deque>
#include <memory>
#include <span>
#include <vector>

#include "fgame/channel.hpp"
#include "fgame/game.hpp"
#include "fgame/observation.hpp"
#include "fgame/rng.hpp"

namespace fgame {

struct CreditParams {
  double m0 = 35.0;  // initial credit
  double beta = 10.0;
  double mu = 20.0;  // cooperation threshold
  double nu = 1.0;   // packet arrival rate per stage

  // Paper's sufficiency condition for never running out of credit.
  bool sufficiency_ok() const { return mu >= 2.0 * beta; }
  void validate() const;
};

struct NodeLedger {
  double credit = 0.0;
  double peer_reputation = 1.0;
  int count_f = 0;
  int count_d = 0;
};

// Distribution over the L^2 lexicographically ordered actions; pi[0] is the
// a^min component, so pi_min = (1,0,...,0).
struct StageDecision {
  std::vector<double> pi;

  double forward_probability() const { return 1.0 - pi[0]; }
  int sample_action(Rng& rng) const;  // 1-based lex index
  void validate() const;
};

StageDecision unit_decision(int action_count, int k);  // vertex on k (1-based)
StageDecision min_decision(int action_count);
// rate * unit(k) + (1-rate) * pi_min.
StageDecision mixed_coop_decision(int action_count, int k, double rate);

// R = ((1-eps) |F| + eps |D|) / K.
double update_reputation(int count_f, int count_d, double eps);

// m(t) = m(t-1) + beta <pi_prev, e_k> - beta nu; k_star 1-based.
double update_credit(double credit, std::span<const double> pi_prev, int k_star,
                     const CreditParams& params);

// pi_hat = R pi_star(t) + (1-R) pi_min.
StageDecision estimated_peer_distribution(double r_peer,
                                          const StageDecision& pi_star_now);

// Cooperate (play f*(s)) at t=0 or when credit is below mu, otherwise
// the reputation-weighted tit-for-tat mixture.
StageDecision sara_decide(int t, int signal, const NodeLedger& ledger,
                          const std::vector<int>& f_star,
                          const CreditParams& params, int action_count);

// What a strategy sees at the end of a stage. played_pi is the distribution
// actually used for its action that stage (a deviation study may have
// reshaped the decision after decide()); the stage signal it remembers itself.
struct StageObservation {
  int t = 0;
  std::span<const double> played_pi;
  int peer_count_f = 0;  // observed Forward count over the K packets
  int peer_count_d = 0;
  int packets = 0;
};

class TransmissionStrategy {
 public:
  virtual ~TransmissionStrategy() = default;
  virtual StageDecision decide(int t, int signal, Rng& rng) = 0;
  virtual void record(const StageObservation& obs) = 0;
  // SARA ledgers expose credit for the invariant checks; others return nullptr.
  virtual const NodeLedger* ledger() const { return nullptr; }
};

class SaraStrategy final : public TransmissionStrategy {
 public:
  SaraStrategy(std::vector<int> f_star, CreditParams credit, double eps,
               int action_count, double initial_rate = 1.0);
  StageDecision decide(int t, int signal, Rng& rng) override;
  void record(const StageObservation& obs) override;
  const NodeLedger* ledger() const override { return &ledger_; }

 private:
  std::vector<int> f_star_;
  CreditParams credit_;
  double eps_;
  int action_count_;
  double initial_rate_;
  NodeLedger ledger_;
  int last_k_star_ = 1;
};

// Always plays f*(s); full cooperation.
class FixedPolicyStrategy final : public TransmissionStrategy {
 public:
  FixedPolicyStrategy(std::vector<int> f_star, int action_count)
      : f_star_(std::move(f_star)), action_count_(action_count) {}
  StageDecision decide(int, int signal, Rng&) override {
    return unit_decision(action_count_, f_star_.at(signal));
  }
  void record(const StageObservation&) override {}

 private:
  std::vector<int> f_star_;
  int action_count_;
};

class AlwaysDefectStrategy final : public TransmissionStrategy {
 public:
  explicit AlwaysDefectStrategy(int action_count) : action_count_(action_count) {}
  StageDecision decide(int, int, Rng&) override {
    return min_decision(action_count_);
  }
  void record(const StageObservation&) override {}

 private:
  int action_count_;
};

// Generous tit-for-tat over the fixed sum-utility-maximizing action: forward
// with probability min(1, observed peer rate + generosity). The peer rate is
// a sliding-window mean of raw per-frame forward fractions.
class GtftStrategy final : public TransmissionStrategy {
 public:
  GtftStrategy(int coop_action, double generosity, int window, int action_count,
               double initial_rate = 1.0);
  StageDecision decide(int t, int signal, Rng& rng) override;
  void record(const StageObservation& obs) override;

 private:
  int coop_action_;
  double generosity_;
  std::size_t window_;
  int action_count_;
  double initial_rate_;
  std::deque<double> peer_rates_;
};

struct IcarusParams {
  double initial_credit = 220.0;
  double packet_credit = 0.5;     // a: credit unit per packet
  double service_price = 2.3;     // b: per-packet price of relaying service
  int ifn = 5;                    // estimate window, frames
  double edp_th = 0.85;           // punish when the peer estimate drops below
};

// Credit-plus-reputation baseline. Cooperative nodes punish (play a^min) when
// the windowed raw estimate of the peer falls under edp_th; low credit forces
// cooperation; otherwise the node forwards with its standing propensity.
class IcarusStrategy final : public TransmissionStrategy {
 public:
  IcarusStrategy(int coop_action, IcarusParams params, int packets_per_frame,
                 int action_count, double initial_rate = 1.0);
  StageDecision decide(int t, int signal, Rng& rng) override;
  void record(const StageObservation& obs) override;
  double credit() const { return credit_; }

 private:
  int coop_action_;
  IcarusParams params_;
  double frame_unit_;       // packet_credit * K
  double force_threshold_;  // service_price * K / 2
  int action_count_;
  double initial_rate_;
  bool punisher_;
  double credit_;
  std::deque<double> peer_rates_;
};

// argmax over action pairs of E_rho[u1 + u2]; ties resolved to the lowest
// lexicographic pair. Returns 1-based indices.
std::pair<int, int> best_fixed_pair(const StateDistribution& rho,
                                    const GameTables& tables);

}  // namespace fgame
