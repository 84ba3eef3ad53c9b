#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "circmech/hash.hpp"

namespace circmech {

// Deterministic random source for the simulators.
//
// Wraps std::mt19937_64 but derives every variate from raw engine words with
// fixed arithmetic. The std::*_distribution adapters are implementation
// defined, so using them would make output bytes depend on the standard
// library; everything here is reproducible from the seed alone.
class SimRng {
 public:
  explicit SimRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53 bits of resolution.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("uniform: lo > hi");
    return lo + (hi - lo) * uniform01();
  }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n == 0");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform01() < p;
  }

  // Number of trials up to and including the first success, success
  // probability p in (0, 1]. Mean 1/p.
  std::uint64_t geometric_trials(double p) {
    if (!(p > 0.0) || p > 1.0)
      throw std::invalid_argument("geometric_trials: p outside (0, 1]");
    if (p == 1.0) return 1;
    // Inversion: ceil(ln(1-u) / ln(1-p)) with u in [0,1).
    const double u = uniform01();
    const double t = std::ceil(std::log1p(-u) / std::log1p(-p));
    return t < 1.0 ? 1 : static_cast<std::uint64_t>(t);
  }

  // Standard normal via Box-Muller. Draws two uniforms per call; the second
  // variate is discarded to keep the draw count per call fixed.
  double gaussian() {
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Index into `weights` sampled proportionally to the (nonnegative) weights.
  std::size_t weighted_index(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw std::invalid_argument("weighted_index: negative weight");
      total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("weighted_index: zero total weight");
    const double target = uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (target < acc) return i;
    }
    return weights.size() - 1;  // guard against rounding at the top end
  }

 private:
  std::mt19937_64 engine_;
};

// RNG for a named module substream of a root seed.
inline SimRng make_substream_rng(std::uint64_t root_seed, std::string_view label,
                                 std::uint64_t index = 0) {
  return SimRng(derive_substream(root_seed, label, index));
}

}  // namespace circmech
