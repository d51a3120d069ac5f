#include "monobell/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace monobell::lp {

namespace {

constexpr double kPivotTol = 1e-11;

class Tableau {
 public:
  Tableau(const LinearProgram& lp) : n_(lp.num_vars()), m_(lp.num_rows()) {
    if (lp.b.size() != m_) throw std::invalid_argument("simplex: b size mismatch");
    width_ = n_ + m_ + 1;
    t_.assign(m_, std::vector<double>(width_, 0.0));
    basis_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      if (lp.a[r].size() != n_) throw std::invalid_argument("simplex: row size mismatch");
      const double sign = lp.b[r] < 0 ? -1.0 : 1.0;
      for (std::size_t j = 0; j < n_; ++j) t_[r][j] = sign * lp.a[r][j];
      t_[r][n_ + r] = 1.0;
      t_[r][width_ - 1] = sign * lp.b[r];
      basis_[r] = n_ + r;
    }
  }

  // Maximize cost.x restricted to columns [0, allowed). Returns false if unbounded.
  bool optimize(const std::vector<double>& cost, std::size_t allowed) {
    std::vector<double> reduced(width_ - 1, 0.0);
    for (std::size_t j = 0; j < width_ - 1; ++j) {
      double v = cost[j];
      for (std::size_t r = 0; r < t_.size(); ++r) v -= cost[basis_[r]] * t_[r][j];
      reduced[j] = v;
    }
    for (;;) {
      // Bland: lowest-index improving column.
      std::size_t enter = allowed;
      for (std::size_t j = 0; j < allowed; ++j) {
        if (reduced[j] > kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter == allowed) return true;

      std::size_t leave = t_.size();
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t r = 0; r < t_.size(); ++r) {
        const double coef = t_[r][enter];
        if (coef <= kPivotTol) continue;
        const double ratio = t_[r][width_ - 1] / coef;
        if (ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 && leave < t_.size() && basis_[r] < basis_[leave])) {
          best_ratio = ratio;
          leave = r;
        }
      }
      if (leave == t_.size()) return false;

      pivot(leave, enter);
      const double factor = reduced[enter];
      for (std::size_t j = 0; j < width_ - 1; ++j) reduced[j] -= factor * t_[leave][j];
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    ++pivots_;
    auto& prow = t_[row];
    const double inv = 1.0 / prow[col];
    for (auto& v : prow) v *= inv;
    for (std::size_t r = 0; r < t_.size(); ++r) {
      if (r == row) continue;
      const double f = t_[r][col];
      if (f == 0.0) continue;
      auto& cur = t_[r];
      for (std::size_t j = 0; j < width_; ++j) cur[j] -= f * prow[j];
      cur[col] = 0.0;
    }
    basis_[row] = col;
  }

  double artificial_sum() const {
    double s = 0.0;
    for (std::size_t r = 0; r < t_.size(); ++r)
      if (basis_[r] >= n_) s += t_[r][width_ - 1];
    return s;
  }

  // Pivot zero-level artificials out of the basis; drop rows that are redundant.
  void expel_artificials() {
    for (std::size_t r = 0; r < t_.size();) {
      if (basis_[r] < n_) {
        ++r;
        continue;
      }
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (std::abs(t_[r][j]) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col == n_) {
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        continue;
      }
      pivot(r, col);
      ++r;
    }
  }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (std::size_t r = 0; r < t_.size(); ++r)
      if (basis_[r] < n_) x[basis_[r]] = t_[r][width_ - 1];
    return x;
  }

  std::size_t num_vars() const { return n_; }
  std::size_t num_rows() const { return m_; }
  std::size_t width() const { return width_; }
  std::size_t pivots() const { return pivots_; }

 private:
  std::size_t n_, m_, width_ = 0;
  std::vector<std::vector<double>> t_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

}  // namespace

Solution maximize(const LinearProgram& lp) {
  Tableau tab(lp);
  const std::size_t n = tab.num_vars();
  const std::size_t m = tab.num_rows();
  Solution sol;

  std::vector<double> phase1(n + m, 0.0);
  for (std::size_t r = 0; r < m; ++r) phase1[n + r] = -1.0;
  tab.optimize(phase1, n + m);
  if (tab.artificial_sum() > kFeasibilityTol) {
    sol.status = Status::kInfeasible;
    sol.pivots = tab.pivots();
    return sol;
  }
  tab.expel_artificials();

  std::vector<double> phase2(n + m, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = lp.c[j];
  const bool bounded = tab.optimize(phase2, n);
  sol.pivots = tab.pivots();
  if (!bounded) {
    sol.status = Status::kUnbounded;
    return sol;
  }
  sol.status = Status::kOptimal;
  sol.x = tab.primal();
  for (std::size_t j = 0; j < n; ++j) sol.value += lp.c[j] * sol.x[j];
  return sol;
}

}  // namespace monobell::lp
