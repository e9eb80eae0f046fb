#include "fgame/observation.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fgame {

std::pair<int, int> SignalStructure::sample(int a0_index, Rng& rng) const {
  const auto& row = rows.at(a0_index);
  if (row.size() == 1) return {row[0].s1, row[0].s2};
  double u = rng.uniform01();
  double acc = 0.0;
  for (const auto& e : row) {
    acc += e.p;
    if (u < acc) return {e.s1, e.s2};
  }
  return {row.back().s1, row.back().s2};
}

std::vector<double> SignalStructure::marginal(int node, int a0_index) const {
  std::vector<double> m(node == 1 ? s1_count : s2_count, 0.0);
  for (const auto& e : rows.at(a0_index)) m[node == 1 ? e.s1 : e.s2] += e.p;
  return m;
}

void SignalStructure::validate() const {
  if (s1_count < 1 || s2_count < 1)
    throw std::invalid_argument("SignalStructure: empty signal set");
  for (const auto& row : rows) {
    double total = 0.0;
    for (const auto& e : row) {
      if (e.s1 < 0 || e.s1 >= s1_count || e.s2 < 0 || e.s2 >= s2_count)
        throw std::invalid_argument("SignalStructure: signal out of range");
      if (e.p < 0.0)
        throw std::invalid_argument("SignalStructure: negative probability");
      total += e.p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument(
          "SignalStructure: row must be a probability distribution");
  }
}

SignalStructure make_signal_structure(SignalKind kind, const ChannelGrid& grid) {
  int h = grid.size();
  int states = h * h * h * h;
  SignalStructure t;
  t.kind = kind;
  t.rows.resize(states);
  switch (kind) {
    case SignalKind::Global:
      t.s1_count = t.s2_count = states;
      for (int a0 = 0; a0 < states; ++a0) t.rows[a0] = {{a0, a0, 1.0}};
      break;
    case SignalKind::Local:
      t.s1_count = t.s2_count = h * h;
      for (int a0 = 0; a0 < states; ++a0) {
        int i2p = a0 % h;
        int i2 = (a0 / h) % h;
        int i1p = (a0 / (h * h)) % h;
        int i1 = a0 / (h * h * h);
        t.rows[a0] = {{local_signal(h, i1, i1p), local_signal(h, i2, i2p), 1.0}};
      }
      break;
    case SignalKind::None:
      t.s1_count = t.s2_count = 1;
      for (int a0 = 0; a0 < states; ++a0) t.rows[a0] = {{0, 0, 1.0}};
      break;
    case SignalKind::Custom:
      throw std::invalid_argument(
          "make_signal_structure: custom tables need make_custom_structure");
  }
  t.deterministic = true;
  return t;
}

SignalStructure make_custom_structure(int s1_count, int s2_count,
                                      std::vector<std::vector<SignalEntry>> rows) {
  SignalStructure t;
  t.kind = SignalKind::Custom;
  t.s1_count = s1_count;
  t.s2_count = s2_count;
  t.rows = std::move(rows);
  t.deterministic = true;
  for (const auto& row : t.rows)
    if (row.size() != 1) t.deterministic = false;
  t.validate();
  return t;
}

SignalStructure load_signal_structure(std::istream& in) {
  int states = -1, s1 = -1, s2 = -1;
  std::vector<std::vector<SignalEntry>> rows;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error("signal table line " + std::to_string(lineno) +
                             ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "states") {
      if (!(ls >> states) || states < 1) fail("bad state count");
      rows.assign(states, {});
    } else if (tag == "s1_count") {
      if (!(ls >> s1) || s1 < 1) fail("bad s1_count");
    } else if (tag == "s2_count") {
      if (!(ls >> s2) || s2 < 1) fail("bad s2_count");
    } else if (tag == "row") {
      int a0, v1, v2;
      double p;
      if (!(ls >> a0 >> v1 >> v2 >> p)) fail("expected: row a0 s1 s2 prob");
      if (states < 0) fail("row before states header");
      if (a0 < 0 || a0 >= states) fail("a0 out of range");
      rows[a0].push_back({v1, v2, p});
    } else {
      fail("unknown directive '" + tag + "'");
    }
  }
  if (states < 0 || s1 < 0 || s2 < 0)
    throw std::runtime_error("signal table: missing states/s1_count/s2_count");
  return make_custom_structure(s1, s2, std::move(rows));
}

SignalStructure load_signal_structure_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open signal table: " + path);
  return load_signal_structure(in);
}

void save_signal_structure(std::ostream& out, const SignalStructure& t) {
  out << "states " << t.state_count() << "\n";
  out << "s1_count " << t.s1_count << "\n";
  out << "s2_count " << t.s2_count << "\n";
  for (int a0 = 0; a0 < t.state_count(); ++a0)
    for (const auto& e : t.rows[a0])
      out << "row " << a0 << ' ' << e.s1 << ' ' << e.s2 << ' ' << e.p << "\n";
}

void MonitoringParams::validate() const {
  if (epsilon < 0.0 || epsilon > 0.5)
    throw std::invalid_argument("MonitoringParams: epsilon outside [0, 0.5]");
}

MonitorSignal monitor_action(const Action& observed, const MonitoringParams& mp,
                             Rng& rng) {
  mp.validate();
  MonitorSignal truth = action_is_drop(observed, mp.rule) ? MonitorSignal::Drop
                                                          : MonitorSignal::Forward;
  if (rng.uniform01() < mp.epsilon)
    return truth == MonitorSignal::Drop ? MonitorSignal::Forward
                                        : MonitorSignal::Drop;
  return truth;
}

}  // namespace fgame
