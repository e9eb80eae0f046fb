#include "fgame/region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fgame/parallel.hpp"

namespace fgame {

namespace {

struct StateIdx {
  int i1, i1p, i2, i2p;
};

inline StateIdx split_state(int a0, int h) {
  return {a0 / (h * h * h), (a0 / (h * h)) % h, (a0 / h) % h, a0 % h};
}

constexpr double kTieTol = 1e-12;

}  // namespace

std::optional<int> DecisionPolicy::pure_action(int s) const {
  const double* r = row(s);
  int where = -1;
  for (int a = 0; a < action_count; ++a) {
    if (r[a] > 1.0 - 1e-9) where = a;
  }
  if (where < 0) return std::nullopt;
  return where + 1;
}

bool DecisionPolicy::is_pure() const {
  for (int s = 0; s < signal_count; ++s)
    if (!pure_action(s)) return false;
  return true;
}

std::vector<int> DecisionPolicy::decision_function() const {
  std::vector<int> f(signal_count);
  for (int s = 0; s < signal_count; ++s) {
    auto a = pure_action(s);
    if (!a) throw std::logic_error("decision_function: policy is not pure");
    f[s] = *a;
  }
  return f;
}

DecisionPolicy DecisionPolicy::pure(int node, int signal_count,
                                    const std::vector<int>& f,
                                    int action_count) {
  if (static_cast<int>(f.size()) != signal_count)
    throw std::invalid_argument("DecisionPolicy::pure: size mismatch");
  DecisionPolicy p;
  p.node = node;
  p.signal_count = signal_count;
  p.action_count = action_count;
  p.table.assign(std::size_t(signal_count) * action_count, 0.0);
  for (int s = 0; s < signal_count; ++s) {
    if (f[s] < 1 || f[s] > action_count)
      throw std::invalid_argument("DecisionPolicy::pure: action out of range");
    p.row(s)[f[s] - 1] = 1.0;
  }
  return p;
}

DecisionPolicy DecisionPolicy::uniform(int node, int signal_count,
                                       int action_count) {
  DecisionPolicy p;
  p.node = node;
  p.signal_count = signal_count;
  p.action_count = action_count;
  p.table.assign(std::size_t(signal_count) * action_count, 1.0 / action_count);
  return p;
}

DecisionPolicy DecisionPolicy::full_power(int node, int signal_count,
                                          int action_count) {
  return pure(node, signal_count,
              std::vector<int>(signal_count, action_count), action_count);
}

DecisionPolicy DecisionPolicy::random_pure(int node, int signal_count,
                                           int action_count, Rng& rng) {
  std::vector<int> f(signal_count);
  for (int& a : f) a = 1 + static_cast<int>(rng.uniform_index(action_count));
  return pure(node, signal_count, f, action_count);
}

void DecisionPolicy::validate() const {
  if (v_count != 1)
    throw std::invalid_argument("DecisionPolicy: only |V| = 1 is supported");
  if (table.size() != std::size_t(signal_count) * action_count)
    throw std::invalid_argument("DecisionPolicy: table size mismatch");
  for (int s = 0; s < signal_count; ++s) {
    double total = 0.0;
    for (int a = 0; a < action_count; ++a) {
      if (row(s)[a] < 0.0)
        throw std::invalid_argument("DecisionPolicy: negative probability");
      total += row(s)[a];
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("DecisionPolicy: row must sum to 1");
  }
}

void JointDistribution::validate() const {
  double total = 0.0;
  for (double v : q) {
    if (v < 0.0) throw std::invalid_argument("JointDistribution: negative mass");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("JointDistribution: must sum to 1");
}

JointDistribution build_joint(const StateDistribution& rho,
                              const SignalStructure& theta,
                              const DecisionPolicy& f1,
                              const DecisionPolicy& f2) {
  int states = rho.state_count();
  if (theta.state_count() != states)
    throw std::invalid_argument("build_joint: state-count mismatch");
  if (f1.signal_count != theta.s1_count || f2.signal_count != theta.s2_count)
    throw std::invalid_argument("build_joint: signal-count mismatch");
  if (f1.action_count != f2.action_count)
    throw std::invalid_argument("build_joint: action-count mismatch");
  int acts = f1.action_count;
  std::size_t cells = std::size_t(states) * acts * acts;
  if (cells > std::size_t(5e7))
    throw std::domain_error(
        "build_joint: instance too large to materialize Q; use the nested "
        "expectation routines");
  JointDistribution out;
  out.state_count = states;
  out.action_count = acts;
  out.q.assign(cells, 0.0);
  for (int a0 = 0; a0 < states; ++a0) {
    double r = rho.rho(a0);
    if (r == 0.0) continue;
    for (const auto& e : theta.rows[a0]) {
      double w = r * e.p;
      const double* row1 = f1.row(e.s1);
      const double* row2 = f2.row(e.s2);
      double* cell =
          out.q.data() + std::size_t(a0) * acts * acts;
      for (int a = 0; a < acts; ++a) {
        if (row1[a] == 0.0) continue;
        double wa = w * row1[a];
        double* dst = cell + std::size_t(a) * acts;
        for (int b = 0; b < acts; ++b) dst[b] += wa * row2[b];
      }
    }
  }
  return out;
}

std::pair<double, double> expected_utilities(const JointDistribution& q,
                                             const GameTables& tables) {
  int h = tables.gain_count;
  int acts = q.action_count;
  double eu1 = 0.0, eu2 = 0.0;
  for (int a0 = 0; a0 < q.state_count; ++a0) {
    StateIdx st = split_state(a0, h);
    const double* cell = q.q.data() + std::size_t(a0) * acts * acts;
    for (int a = 0; a < acts; ++a) {
      const double* src = cell + std::size_t(a) * acts;
      for (int b = 0; b < acts; ++b) {
        double m = src[b];
        if (m == 0.0) continue;
        eu1 += m * tables.u1(st.i1, st.i2p, a + 1, b + 1);
        eu2 += m * tables.u2(st.i1p, st.i2, a + 1, b + 1);
      }
    }
  }
  return {eu1, eu2};
}

std::pair<double, double> expected_utilities_nested(const StateDistribution& rho,
                                                    const SignalStructure& theta,
                                                    const DecisionPolicy& f1,
                                                    const DecisionPolicy& f2,
                                                    const GameTables& tables) {
  int states = rho.state_count();
  int h = tables.gain_count;
  int acts = f1.action_count;
  double eu1 = 0.0, eu2 = 0.0;
  for (int a0 = 0; a0 < states; ++a0) {
    double r = rho.rho(a0);
    if (r == 0.0) continue;
    StateIdx st = split_state(a0, h);
    for (const auto& e : theta.rows[a0]) {
      double w = r * e.p;
      auto p1 = f1.pure_action(e.s1);
      auto p2 = f2.pure_action(e.s2);
      if (p1 && p2) {
        eu1 += w * tables.u1(st.i1, st.i2p, *p1, *p2);
        eu2 += w * tables.u2(st.i1p, st.i2, *p1, *p2);
        continue;
      }
      const double* row1 = f1.row(e.s1);
      const double* row2 = f2.row(e.s2);
      for (int a = 0; a < acts; ++a) {
        if (row1[a] == 0.0) continue;
        double wa = w * row1[a];
        for (int b = 0; b < acts; ++b) {
          if (row2[b] == 0.0) continue;
          eu1 += wa * row2[b] * tables.u1(st.i1, st.i2p, a + 1, b + 1);
          eu2 += wa * row2[b] * tables.u2(st.i1p, st.i2, a + 1, b + 1);
        }
      }
    }
  }
  return {eu1, eu2};
}

double weighted_utility(const JointDistribution& q, double lambda,
                        const GameTables& tables) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("weighted_utility: lambda outside [0,1]");
  auto [eu1, eu2] = expected_utilities(q, tables);
  return lambda * eu1 + (1.0 - lambda) * eu2;
}

DecisionPolicy best_response(double lambda, const DecisionPolicy& fixed_other,
                             int my_node, const StateDistribution& rho,
                             const SignalStructure& theta,
                             const GameTables& tables, Rng& rng) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("best_response: lambda outside [0,1]");
  if (my_node != 1 && my_node != 2)
    throw std::invalid_argument("best_response: node must be 1 or 2");
  int states = rho.state_count();
  int h = tables.gain_count;
  int acts = fixed_other.action_count;
  int my_signals = (my_node == 1) ? theta.s1_count : theta.s2_count;

  // scores[s][a] = conditional contribution to W_lambda of playing a on s.
  std::vector<double> scores(std::size_t(my_signals) * acts, 0.0);
  for (int a0 = 0; a0 < states; ++a0) {
    double r = rho.rho(a0);
    if (r == 0.0) continue;
    StateIdx st = split_state(a0, h);
    for (const auto& e : theta.rows[a0]) {
      double w = r * e.p;
      int mine = (my_node == 1) ? e.s1 : e.s2;
      int theirs = (my_node == 1) ? e.s2 : e.s1;
      double* dst = scores.data() + std::size_t(mine) * acts;
      auto accumulate = [&](int peer_action, double pw) {
        if (my_node == 1) {
          for (int a = 0; a < acts; ++a)
            dst[a] += pw * (lambda * tables.u1(st.i1, st.i2p, a + 1, peer_action) +
                            (1.0 - lambda) *
                                tables.u2(st.i1p, st.i2, a + 1, peer_action));
        } else {
          for (int a = 0; a < acts; ++a)
            dst[a] += pw * (lambda * tables.u1(st.i1, st.i2p, peer_action, a + 1) +
                            (1.0 - lambda) *
                                tables.u2(st.i1p, st.i2, peer_action, a + 1));
        }
      };
      if (auto pb = fixed_other.pure_action(theirs)) {
        accumulate(*pb, w);
      } else {
        const double* prow = fixed_other.row(theirs);
        for (int b = 0; b < acts; ++b)
          if (prow[b] != 0.0) accumulate(b + 1, w * prow[b]);
      }
    }
  }

  std::vector<int> f(my_signals, 1);
  std::vector<int> ties;
  for (int s = 0; s < my_signals; ++s) {
    const double* sc = scores.data() + std::size_t(s) * acts;
    double best = sc[0];
    for (int a = 1; a < acts; ++a) best = std::max(best, sc[a]);
    double tol = kTieTol * std::max(1.0, std::abs(best));
    ties.clear();
    for (int a = 0; a < acts; ++a)
      if (sc[a] >= best - tol) ties.push_back(a + 1);
    f[s] = ties.size() == 1 ? ties[0]
                            : ties[rng.uniform_index(ties.size())];
  }
  return DecisionPolicy::pure(my_node, my_signals, f, acts);
}

FrontierPoint algorithm1(double lambda, const DecisionPolicy& f1_init,
                         const DecisionPolicy& f2_init,
                         const StateDistribution& rho,
                         const SignalStructure& theta, const GameTables& tables,
                         const Algorithm1Options& opts, Rng& rng) {
  if (opts.eta < 0.0) throw std::invalid_argument("algorithm1: eta < 0");
  FrontierPoint pt;
  pt.lambda = lambda;
  pt.f1 = f1_init;
  pt.f2 = f2_init;
  auto eval = [&] {
    auto [e1, e2] = expected_utilities_nested(rho, theta, pt.f1, pt.f2, tables);
    pt.eu1 = e1;
    pt.eu2 = e2;
    return lambda * e1 + (1.0 - lambda) * e2;
  };
  double w = eval();
  pt.w_history.push_back(w);
  for (int n = 1; n <= opts.max_iters; ++n) {
    int player = (n % 2 == 1) ? 1 : 2;
    if (player == 1)
      pt.f1 = best_response(lambda, pt.f2, 1, rho, theta, tables, rng);
    else
      pt.f2 = best_response(lambda, pt.f1, 2, rho, theta, tables, rng);
    double w_next = eval();
    pt.w_history.push_back(w_next);
    if (w_next < w - kTieTol * std::max(1.0, std::abs(w))) pt.monotone = false;
    pt.iters = n;
    if (n >= 2 && std::abs(w_next - w) < opts.eta) {
      pt.converged = true;
      w = w_next;
      break;
    }
    w = w_next;
  }
  pt.w = w;
  return pt;
}

RestartResult algorithm1_restarts(double lambda, const StateDistribution& rho,
                                  const SignalStructure& theta,
                                  const GameTables& tables,
                                  const Algorithm1Options& opts, int restarts,
                                  const Rng& rng) {
  if (restarts < 1) throw std::invalid_argument("algorithm1_restarts: restarts < 1");
  int acts = tables.power_count * tables.power_count;
  RestartResult out;
  for (int k = 0; k < restarts; ++k) {
    Rng run_rng = rng.child(0xA160u, k);
    DecisionPolicy f1 =
        k == 0 ? DecisionPolicy::full_power(1, theta.s1_count, acts)
               : DecisionPolicy::random_pure(1, theta.s1_count, acts, run_rng);
    DecisionPolicy f2 =
        k == 0 ? DecisionPolicy::full_power(2, theta.s2_count, acts)
               : DecisionPolicy::random_pure(2, theta.s2_count, acts, run_rng);
    FrontierPoint pt =
        algorithm1(lambda, f1, f2, rho, theta, tables, opts, run_rng);
    out.restart_w.push_back(pt.w);
    if (k == 0 || pt.w > out.best.w) out.best = std::move(pt);
  }
  return out;
}

OracleResult brute_force_oracle(double lambda, const StateDistribution& rho,
                                const SignalStructure& theta,
                                const GameTables& tables, double max_pairs) {
  int acts = tables.power_count * tables.power_count;
  int s1 = theta.s1_count, s2 = theta.s2_count;
  double pairs = std::pow(double(acts), s1) * std::pow(double(acts), s2);
  if (!(pairs <= max_pairs))
    throw std::domain_error(
        "brute_force_oracle: instance has " + std::to_string(pairs) +
        " pure policy pairs, above the enumeration guard of " +
        std::to_string(max_pairs));

  int states = rho.state_count();
  int h = tables.gain_count;
  // eu[s1][a1][s2][a2] per node, marginalized over states.
  std::size_t span = std::size_t(s1) * acts * s2 * acts;
  std::vector<double> eu1(span, 0.0), eu2(span, 0.0);
  auto at = [&](int v1, int a, int v2, int b) {
    return ((std::size_t(v1) * acts + a) * s2 + v2) * acts + b;
  };
  for (int a0 = 0; a0 < states; ++a0) {
    double r = rho.rho(a0);
    if (r == 0.0) continue;
    StateIdx st = split_state(a0, h);
    for (const auto& e : theta.rows[a0]) {
      double w = r * e.p;
      for (int a = 0; a < acts; ++a)
        for (int b = 0; b < acts; ++b) {
          eu1[at(e.s1, a, e.s2, b)] += w * tables.u1(st.i1, st.i2p, a + 1, b + 1);
          eu2[at(e.s1, a, e.s2, b)] += w * tables.u2(st.i1p, st.i2, a + 1, b + 1);
        }
    }
  }

  std::vector<int> f1(s1, 0), f2(s2, 0);
  OracleResult best;
  bool first = true;
  for (;;) {
    for (;;) {
      double e1 = 0.0, e2 = 0.0;
      for (int v1 = 0; v1 < s1; ++v1)
        for (int v2 = 0; v2 < s2; ++v2) {
          e1 += eu1[at(v1, f1[v1], v2, f2[v2])];
          e2 += eu2[at(v1, f1[v1], v2, f2[v2])];
        }
      double w = lambda * e1 + (1.0 - lambda) * e2;
      if (first || w > best.w) {
        first = false;
        best.w = w;
        best.eu1 = e1;
        best.eu2 = e2;
        best.f1 = f1;
        best.f2 = f2;
      }
      // odometer over f2
      int d = 0;
      for (; d < s2; ++d) {
        if (++f2[d] < acts) break;
        f2[d] = 0;
      }
      if (d == s2) break;
    }
    int d = 0;
    for (; d < s1; ++d) {
      if (++f1[d] < acts) break;
      f1[d] = 0;
    }
    if (d == s1) break;
  }
  for (int& a : best.f1) ++a;  // report 1-based action indices
  for (int& a : best.f2) ++a;
  return best;
}

std::vector<FrontierPoint> pareto_sweep(const std::vector<double>& lambdas,
                                        const StateDistribution& rho,
                                        const SignalStructure& theta,
                                        const GameTables& tables,
                                        const Algorithm1Options& opts,
                                        int restarts, const Rng& rng,
                                        int workers) {
  for (double l : lambdas)
    if (l < 0.0 || l > 1.0)
      throw std::invalid_argument("pareto_sweep: lambda outside [0,1]");
  std::vector<FrontierPoint> points(lambdas.size());
  parallel_for(lambdas.size(), workers, [&](std::size_t i) {
    Rng lane = rng.child(0x9A8E70u, i);
    points[i] =
        algorithm1_restarts(lambdas[i], rho, theta, tables, opts, restarts, lane)
            .best;
  });
  return points;
}

std::vector<double> uniform_lambda_grid(int points) {
  if (points < 2) throw std::invalid_argument("uniform_lambda_grid: points < 2");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = double(i) / (points - 1);
  return g;
}

}  // namespace fgame
