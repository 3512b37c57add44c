#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ccsp {

/// min c^T x  s.t.  A x = b,  x >= 0, with A stored column-wise.
class StandardLp {
 public:
  StandardLp() = default;
  explicit StandardLp(int rows) : b_(static_cast<std::size_t>(rows), 0.0) {}

  int rows() const { return static_cast<int>(b_.size()); }
  int cols() const { return static_cast<int>(c_.size()); }

  /// Appends a column; entries are (row, value) pairs with distinct rows.
  int add_column(double cost, const std::vector<std::pair<int, double>>& entries);
  void set_rhs(int row, double value) { b_[static_cast<std::size_t>(row)] = value; }

  double cost(int j) const { return c_[static_cast<std::size_t>(j)]; }
  double rhs(int i) const { return b_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& costs() const { return c_; }
  const std::vector<double>& rhs() const { return b_; }

  /// Column j occupies entries [begin(j), begin(j+1)) of rows()/values().
  std::size_t begin(int j) const { return start_[static_cast<std::size_t>(j)]; }
  std::size_t end(int j) const { return start_[static_cast<std::size_t>(j) + 1]; }
  int row_at(std::size_t k) const { return row_[k]; }
  double value_at(std::size_t k) const { return val_[k]; }
  std::size_t nonzeros() const { return val_.size(); }

  /// Max |A x - b| and the most negative entry of x, for feasibility checks.
  double residual(const std::vector<double>& x) const;

 private:
  std::vector<double> b_;
  std::vector<double> c_;
  std::vector<std::size_t> start_{0};
  std::vector<int> row_;
  std::vector<double> val_;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* lp_status_name(LpStatus s);

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  long max_iterations = 2'000'000;
  int refactor_every = 4000;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int degenerate_limit = 200;
};

struct SimplexResult {
  LpStatus status = LpStatus::kIterationLimit;
  std::vector<double> x;
  /// Simplex multipliers y with c - A^T y >= 0 at optimality.
  std::vector<double> duals;
  double objective = 0.0;
  long iterations = 0;
  long phase1_iterations = 0;
  double residual = 0.0;
};

/// Two-phase revised simplex with an explicit dense basis inverse.
/// Deterministic for identical inputs.
SimplexResult simplex_solve(const StandardLp& lp, const SimplexOptions& opts = {});

/// Free-format MPS export (all variables default to x >= 0).
void write_mps(std::ostream& out, const StandardLp& lp, const std::string& name);

}  // namespace ccsp
