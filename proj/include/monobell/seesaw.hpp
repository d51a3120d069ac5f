#pragma once

// Alternating (seesaw) optimization of a Bell functional over quantum
// strategies with two-outcome projective measurements. Produces lower bounds
// on the quantum value.

#include <cstdint>
#include <vector>

#include "monobell/bell_core.hpp"

namespace monobell {

struct SeesawOptions {
  std::uint64_t seed = 1;
  int restarts = 20;
  int iterations = 200;
  double tolerance = 1e-10;  // stop once one sweep gains less than this
};

struct SeesawResult {
  double value = 0.0;
  QuantumStrategy strategy;
  int best_restart = 0;
  /// Objective after every sweep of the best restart; non-decreasing.
  std::vector<double> trace;
};

/// Requires prod(local_dims) <= 16. The state is kept pure (top eigenvector of
/// the Bell operator); each observable is the sign of its effective operator.
SeesawResult seesaw(const BellFunctional& f, const std::vector<std::size_t>& local_dims,
                    const SeesawOptions& options = {});

}  // namespace monobell
