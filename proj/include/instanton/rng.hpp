#pragma once

#include <cstdint>

#include "instanton/quaternion.hpp"

namespace instanton {

// Deterministic, fully specified RNG used everywhere randomness is part of a contract
// (sampling, Monte Carlo, multi-start searches).  SplitMix64 core: output sequences
// are reproducible bit-for-bit across platforms, unlike std distribution adapters.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (explicit so streams stay platform-stable).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Quaternion normal_quaternion() {
    const double a = normal(), b = normal(), c = normal(), d = normal();
    return {a, b, c, d};
  }

  // Uniform direction on the unit 3-sphere in H.
  Quaternion unit_quaternion() {
    Quaternion q = normal_quaternion();
    while (q.norm() < 1e-6) q = normal_quaternion();
    return q / q.norm();
  }

  // Independent child stream; used to make chunked reductions independent of thread
  // scheduling.
  Rng fork(uint64_t salt) const {
    Rng r(state_ ^ (0x94d049bb133111ebULL * (salt + 1)));
    r.next_u64();
    return r;
  }

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace instanton
