#include "fgame/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace fgame {

void PathLossParams::validate() const {
  if (constant <= 0.0) throw std::invalid_argument("PathLossParams: const <= 0");
  if (kappa <= 0.0) throw std::invalid_argument("PathLossParams: kappa <= 0");
}

double path_loss_mean(double d, const PathLossParams& plp) {
  plp.validate();
  if (d < 0.0) throw std::invalid_argument("path_loss_mean: d < 0");
  return plp.constant / (d * d + plp.kappa * plp.kappa);
}

std::vector<double> quantize_rayleigh(double mean, const ChannelGrid& grid) {
  if (mean <= 0.0) throw std::invalid_argument("quantize_rayleigh: mean <= 0");
  int h = grid.size();
  std::vector<double> mass(h, 0.0);
  auto cdf = [&](double x) { return 1.0 - std::exp(-x / mean); };
  double prev = 0.0;  // CDF at the lower cell boundary (first cell reaches 0)
  for (int j = 0; j < h - 1; ++j) {
    double boundary = 0.5 * (grid.levels[j] + grid.levels[j + 1]);
    double c = cdf(boundary);
    mass[j] = c - prev;
    prev = c;
  }
  mass[h - 1] = 1.0 - prev;  // last cell reaches infinity
  return mass;
}

double quantized_mean(const std::vector<double>& mass, const ChannelGrid& grid) {
  double m = 0.0;
  for (std::size_t j = 0; j < mass.size(); ++j) m += mass[j] * grid.levels[j];
  return m;
}

StateDistribution StateDistribution::quantized_rayleigh(
    const ChannelGrid& grid, const std::array<double, 4>& means) {
  StateDistribution d;
  d.grid = grid;
  d.mean = means;
  for (int i = 0; i < 4; ++i) d.mass[i] = fgame::quantize_rayleigh(means[i], grid);
  d.validate();
  return d;
}

StateDistribution StateDistribution::point(const ChannelGrid& grid, int i1,
                                           int i1p, int i2, int i2p) {
  StateDistribution d;
  d.grid = grid;
  std::array<int, 4> idx{i1, i1p, i2, i2p};
  for (int i = 0; i < 4; ++i) {
    d.mass[i].assign(grid.size(), 0.0);
    d.mass[i].at(idx[i]) = 1.0;
    d.mean[i] = grid.levels[idx[i]];
  }
  return d;
}

StateDistribution StateDistribution::custom(
    const ChannelGrid& grid, std::array<std::vector<double>, 4> masses) {
  StateDistribution d;
  d.grid = grid;
  d.mass = std::move(masses);
  for (int i = 0; i < 4; ++i) d.mean[i] = quantized_mean(d.mass[i], grid);
  d.validate();
  return d;
}

double StateDistribution::rho(int a0_index) const {
  int h = grid.size();
  int i2p = a0_index % h;
  int i2 = (a0_index / h) % h;
  int i1p = (a0_index / (h * h)) % h;
  int i1 = a0_index / (h * h * h);
  return mass[0][i1] * mass[1][i1p] * mass[2][i2] * mass[3][i2p];
}

NetworkState StateDistribution::sample(Rng& rng) const {
  int idx[4];
  for (int i = 0; i < 4; ++i)
    idx[i] = static_cast<int>(rng.sample_discrete(mass[i]));
  return make_state(grid, idx[0], idx[1], idx[2], idx[3]);
}

std::array<double, 4> StateDistribution::sample_continuous(Rng& rng) const {
  std::array<double, 4> g;
  for (int i = 0; i < 4; ++i) g[i] = rng.exponential(mean[i]);
  return g;
}

void StateDistribution::validate() const {
  for (int i = 0; i < 4; ++i) {
    if (static_cast<int>(mass[i].size()) != grid.size())
      throw std::invalid_argument("StateDistribution: mass/grid size mismatch");
    double total = 0.0;
    for (double m : mass[i]) {
      if (m < 0.0) throw std::invalid_argument("StateDistribution: negative mass");
      total += m;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("StateDistribution: masses must sum to 1");
  }
}

}  // namespace fgame
