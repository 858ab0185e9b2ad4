#pragma once

#include <cstdint>
#include <functional>

#include "instanton/quaternion.hpp"

namespace instanton {

enum class QuadScheme { RadialSpherical, MonteCarloImportance, SparseGrid };

// Quadrature over all of R^4 via the compactifying substitution r = scale*tan(theta/2)
// around `center`.  Budget is a node count; every scheme is deterministic for a fixed
// spec (Monte Carlo streams are seeded and reduced over a fixed chunk tree, so results
// are independent of evaluation order and thread count).
struct R4QuadratureSpec {
  QuadScheme scheme = QuadScheme::RadialSpherical;
  Quaternion center{};
  double scale = 1.0;
  int64_t budget = 200'000;
  uint64_t seed = 1;
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;  // embedded coarse-rule or Monte Carlo standard-error estimate
  int64_t nodes = 0;
};

using ScalarField = std::function<double(const Quaternion&)>;

IntegralResult integrate_r4(const ScalarField& f, const R4QuadratureSpec& spec);

// Number of worker threads for node evaluation: INSTANTON_THREADS when set, else
// hardware concurrency; results never depend on it.
int worker_threads();

}  // namespace instanton
