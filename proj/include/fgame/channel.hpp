#pragma once

#include <array>
#include <vector>

#include "fgame/game.hpp"
#include "fgame/rng.hpp"

namespace fgame {

struct PathLossParams {
  double constant = 1e3;  // numerator (dimensionless * m^2)
  double kappa = 5.0;     // antenna-height offset (m)

  void validate() const;
};

// Mean channel gain at inter-node distance d: const / (d^2 + kappa^2).
double path_loss_mean(double d, const PathLossParams& plp);

// Rayleigh (exponential-gain) law with the given mean, quantized to the grid
// with nearest-neighbor cells: boundaries at level midpoints, first cell
// reaches 0, last reaches infinity. Returns one mass per grid level.
std::vector<double> quantize_rayleigh(double mean, const ChannelGrid& grid);

// E[h] of a quantized mass vector.
double quantized_mean(const std::vector<double>& mass, const ChannelGrid& grid);

// i.i.d. network-state distribution rho: product of four per-gain masses.
struct StateDistribution {
  ChannelGrid grid;
  std::array<std::vector<double>, 4> mass;  // h1, h1', h2, h2'
  std::array<double, 4> mean{1, 1, 1, 1};   // continuous means behind the masses

  static StateDistribution quantized_rayleigh(const ChannelGrid& grid,
                                              const std::array<double, 4>& means);
  // Point mass on one state (tests).
  static StateDistribution point(const ChannelGrid& grid, int i1, int i1p,
                                 int i2, int i2p);
  static StateDistribution custom(const ChannelGrid& grid,
                                  std::array<std::vector<double>, 4> masses);

  int state_count() const {
    int h = grid.size();
    return h * h * h * h;
  }
  double rho(int a0_index) const;
  double rho(const NetworkState& s) const {
    return mass[0][s.i1] * mass[1][s.i1p] * mass[2][s.i2] * mass[3][s.i2p];
  }

  NetworkState sample(Rng& rng) const;
  // Continuous exponential draws (h1, h1', h2, h2'); quantization-loss study.
  std::array<double, 4> sample_continuous(Rng& rng) const;

  void validate() const;
};

}  // namespace fgame
