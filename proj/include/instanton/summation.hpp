#pragma once

#include <span>
#include <vector>

namespace instanton {

// Pairwise (recursive halving) sum: deterministic association order regardless of how
// the values were produced, and O(log n) error growth.  All quadrature reductions in
// this codebase go through here so results do not depend on the degree of parallelism.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0;
    for (double x : v) s += x;
    return s;
  }
  const size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(std::span<const double>(v.data(), v.size()));
}

}  // namespace instanton
