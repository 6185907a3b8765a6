#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "vanhove/types.hpp"

// Deterministic random number plumbing. Ensemble members get independent
// streams via a splittable hash of (master seed, member index), so a run is
// reproducible bit for bit no matter how members are scheduled over threads.

namespace vanhove {

// splitmix64 step; the standard finalizer, used both as a stream splitter and
// as a cheap avalanche hash.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for ensemble member i. Mixing the index through splitmix64 decorrelates
// neighbouring members even for small master seeds.
inline std::uint64_t member_seed(std::uint64_t master_seed, std::uint64_t i) {
  return splitmix64(master_seed ^ splitmix64(i + 1));
}

// Standard normal stream over mt19937_64. Box-Muller on explicitly built
// uniforms instead of std::normal_distribution: the standard pins mt19937_64
// output but not the distribution adapters, and manifests promise bit-identical
// reruns.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : gen_(seed) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // (0,1] uniforms; u1 > 0 keeps the log finite.
    double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
    double u2 = static_cast<double>(gen_() >> 11) * 0x1p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace vanhove
