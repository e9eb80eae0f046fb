#include "fgame/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fgame {

void CreditParams::validate() const {
  if (m0 < 0.0) throw std::invalid_argument("CreditParams: m0 < 0");
  if (beta < 0.0) throw std::invalid_argument("CreditParams: beta < 0");
  if (mu < 0.0) throw std::invalid_argument("CreditParams: mu < 0");
  if (nu < 0.0) throw std::invalid_argument("CreditParams: nu < 0");
}

int StageDecision::sample_action(Rng& rng) const {
  return 1 + static_cast<int>(rng.sample_discrete(pi));
}

void StageDecision::validate() const {
  double total = 0.0;
  for (double p : pi) {
    if (p < -1e-12) throw std::invalid_argument("StageDecision: negative mass");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("StageDecision: mass must sum to 1");
}

StageDecision unit_decision(int action_count, int k) {
  if (k < 1 || k > action_count)
    throw std::out_of_range("unit_decision: action index out of range");
  StageDecision d;
  d.pi.assign(action_count, 0.0);
  d.pi[k - 1] = 1.0;
  return d;
}

StageDecision min_decision(int action_count) { return unit_decision(action_count, 1); }

StageDecision mixed_coop_decision(int action_count, int k, double rate) {
  StageDecision d;
  d.pi.assign(action_count, 0.0);
  d.pi[k - 1] += rate;
  d.pi[0] += 1.0 - rate;
  return d;
}

double update_reputation(int count_f, int count_d, double eps) {
  int k = count_f + count_d;
  if (k <= 0) throw std::invalid_argument("update_reputation: K must be >= 1");
  if (count_f < 0 || count_d < 0)
    throw std::invalid_argument("update_reputation: negative count");
  return ((1.0 - eps) * count_f + eps * count_d) / k;
}

double update_credit(double credit, std::span<const double> pi_prev, int k_star,
                     const CreditParams& params) {
  if (k_star < 1 || k_star > static_cast<int>(pi_prev.size()))
    throw std::out_of_range("update_credit: k_star out of range");
  return credit + params.beta * pi_prev[k_star - 1] - params.beta * params.nu;
}

StageDecision estimated_peer_distribution(double r_peer,
                                          const StageDecision& pi_star_now) {
  if (r_peer < 0.0 || r_peer > 1.0)
    throw std::invalid_argument("estimated_peer_distribution: R outside [0,1]");
  StageDecision d;
  d.pi.assign(pi_star_now.pi.size(), 0.0);
  for (std::size_t i = 0; i < d.pi.size(); ++i)
    d.pi[i] = r_peer * pi_star_now.pi[i];
  d.pi[0] += 1.0 - r_peer;
  return d;
}

StageDecision sara_decide(int t, int signal, const NodeLedger& ledger,
                          const std::vector<int>& f_star,
                          const CreditParams& params, int action_count) {
  StageDecision pi_star = unit_decision(action_count, f_star.at(signal));
  if (t == 0 || ledger.credit < params.mu) return pi_star;
  return estimated_peer_distribution(ledger.peer_reputation, pi_star);
}

SaraStrategy::SaraStrategy(std::vector<int> f_star, CreditParams credit,
                           double eps, int action_count, double initial_rate)
    : f_star_(std::move(f_star)),
      credit_(credit),
      eps_(eps),
      action_count_(action_count),
      initial_rate_(initial_rate) {
  credit_.validate();
  ledger_.credit = credit_.m0;
  ledger_.peer_reputation = 1.0;
}

StageDecision SaraStrategy::decide(int t, int signal, Rng&) {
  last_k_star_ = f_star_.at(signal);
  if (t == 0 && initial_rate_ < 1.0)
    return mixed_coop_decision(action_count_, last_k_star_, initial_rate_);
  return sara_decide(t, signal, ledger_, f_star_, credit_, action_count_);
}

void SaraStrategy::record(const StageObservation& obs) {
  ledger_.count_f = obs.peer_count_f;
  ledger_.count_d = obs.peer_count_d;
  ledger_.peer_reputation =
      update_reputation(obs.peer_count_f, obs.peer_count_d, eps_);
  ledger_.credit =
      update_credit(ledger_.credit, obs.played_pi, last_k_star_, credit_);
}

GtftStrategy::GtftStrategy(int coop_action, double generosity, int window,
                           int action_count, double initial_rate)
    : coop_action_(coop_action),
      generosity_(generosity),
      window_(window),
      action_count_(action_count),
      initial_rate_(initial_rate) {
  if (window < 1) throw std::invalid_argument("GtftStrategy: window < 1");
}

StageDecision GtftStrategy::decide(int t, int, Rng&) {
  double q;
  if (t == 0 || peer_rates_.empty()) {
    q = initial_rate_;
  } else {
    double mean = std::accumulate(peer_rates_.begin(), peer_rates_.end(), 0.0) /
                  peer_rates_.size();
    q = std::min(1.0, mean + generosity_);
  }
  return mixed_coop_decision(action_count_, coop_action_, q);
}

void GtftStrategy::record(const StageObservation& obs) {
  peer_rates_.push_back(double(obs.peer_count_f) / obs.packets);
  while (peer_rates_.size() > window_) peer_rates_.pop_front();
}

IcarusStrategy::IcarusStrategy(int coop_action, IcarusParams params,
                               int packets_per_frame, int action_count,
                               double initial_rate)
    : coop_action_(coop_action),
      params_(params),
      frame_unit_(params.packet_credit * packets_per_frame),
      force_threshold_(params.service_price * packets_per_frame / 2.0),
      action_count_(action_count),
      initial_rate_(initial_rate),
      punisher_(initial_rate >= 0.5),
      credit_(params.initial_credit) {}

StageDecision IcarusStrategy::decide(int, int, Rng&) {
  StageDecision d;
  if (punisher_ && !peer_rates_.empty() &&
      std::accumulate(peer_rates_.begin(), peer_rates_.end(), 0.0) /
              peer_rates_.size() <
          params_.edp_th) {
    d = min_decision(action_count_);
  } else if (credit_ < force_threshold_) {
    d = unit_decision(action_count_, coop_action_);
  } else {
    d = mixed_coop_decision(action_count_, coop_action_, initial_rate_);
  }
  return d;
}

void IcarusStrategy::record(const StageObservation& obs) {
  peer_rates_.push_back(double(obs.peer_count_f) / obs.packets);
  while (peer_rates_.size() > std::size_t(params_.ifn)) peer_rates_.pop_front();
  credit_ += frame_unit_ * obs.played_pi[coop_action_ - 1] - frame_unit_;
}

std::pair<int, int> best_fixed_pair(const StateDistribution& rho,
                                    const GameTables& tables) {
  int l = tables.power_count;
  int h = tables.gain_count;
  // E[u1] depends on (p1, c2) through the (h1, h2') marginals only, E[u2] on
  // (p2, c1) through (h2, h1'), so the expectation factorizes.
  std::vector<double> bar1(std::size_t(l) * l, 0.0), bar2(std::size_t(l) * l, 0.0);
  for (int pa = 0; pa < l; ++pa)
    for (int pb = 0; pb < l; ++pb) {
      double s1 = 0.0, s2 = 0.0;
      for (int ga = 0; ga < h; ++ga)
        for (int gb = 0; gb < h; ++gb) {
          s1 += rho.mass[0][ga] * rho.mass[3][gb] * tables.phi_at(pa, ga, pb, gb);
          s2 += rho.mass[2][ga] * rho.mass[1][gb] * tables.phi_at(pa, ga, pb, gb);
        }
      bar1[pa * l + pb] = s1;
      bar2[pa * l + pb] = s2;
    }
  std::pair<int, int> best{1, 1};
  double best_sum = -1e300;
  for (int a = 0; a < l * l; ++a)
    for (int b = 0; b < l * l; ++b) {
      double sum = bar1[(a / l) * l + (b % l)] - tables.cost[a] +
                   bar2[(b / l) * l + (a % l)] - tables.cost[b];
      if (sum > best_sum + 1e-15) {
        best_sum = sum;
        best = {a + 1, b + 1};
      }
    }
  return best;
}

}  // namespace fgame
