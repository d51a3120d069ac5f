#pragma once

// Dense-tableau two-phase primal simplex with Bland's rule.
//
//   maximize c.x  subject to  A x = b,  x >= 0
//
// Rows with negative b are negated on entry. Redundant equality rows are
// detected after phase I and dropped.

#include <cstddef>
#include <vector>

namespace monobell::lp {

struct LinearProgram {
  std::vector<std::vector<double>> a;  // one dense row per constraint
  std::vector<double> b;
  std::vector<double> c;

  std::size_t num_vars() const { return c.size(); }
  std::size_t num_rows() const { return a.size(); }
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Solution {
  Status status = Status::kInfeasible;
  double value = 0.0;
  std::vector<double> x;
  std::size_t pivots = 0;
};

inline constexpr double kFeasibilityTol = 1e-9;

Solution maximize(const LinearProgram& lp);

}  // namespace monobell::lp
