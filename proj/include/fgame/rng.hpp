#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace fgame {

// Splittable counter-style RNG (splitmix64 core). Substreams are derived from
// the seed, never from consumed state, so parallel workers and replays see
// identical streams for identical (seed, key...) paths.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : seed_(mix(seed ^ kPhi)), state_(seed_) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    state_ += kPhi;
    return mix(state_);
  }

  // Child stream addressed by one or more keys; independent of how much this
  // stream has been consumed.
  Rng child(std::uint64_t key) const { return Rng(chain(seed_, key)); }
  Rng child(std::uint64_t k1, std::uint64_t k2) const {
    return Rng(chain(chain(seed_, k1), k2));
  }
  Rng child(std::uint64_t k1, std::uint64_t k2, std::uint64_t k3) const {
    return Rng(chain(chain(chain(seed_, k1), k2), k3));
  }

  // Uniform in [0, 1).
  double uniform01() { return double((*this)() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n); modulo bias is ~n/2^64, immaterial here.
  std::size_t uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n == 0");
    return std::size_t((*this)() % n);
  }

  double exponential(double mean) {
    // Inverse CDF; 1-u in (0,1] avoids log(0).
    return -mean * std::log(1.0 - uniform01());
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Draw an index from an (unnormalized is fine) mass vector.
  std::size_t sample_discrete(std::span<const double> mass) {
    double total = 0.0;
    for (double m : mass) total += m;
    double u = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      acc += mass[i];
      if (u < acc) return i;
    }
    return mass.size() - 1;
  }

 private:
  static constexpr std::uint64_t kPhi = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  static std::uint64_t chain(std::uint64_t a, std::uint64_t key) {
    return mix(a ^ mix(key + kPhi));
  }

  std::uint64_t seed_;
  std::uint64_t state_;
};

}  // namespace fgame
