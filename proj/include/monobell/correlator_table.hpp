#pragma once

#include <array>
#include <cstdint>
#include <map>

namespace monobell {

/// Inputs (x, y, z) of one tripartite correlator.
using Triple = std::array<int, 3>;

struct CorrelatorEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t n_events = 0;
  bool valid = true;  // false when a referenced count cell was empty
};

using CorrelatorTable = std::map<Triple, CorrelatorEstimate>;

}  // namespace monobell
