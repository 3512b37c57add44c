#include "ccsp/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ccsp/errors.hpp"

namespace ccsp {

int StandardLp::add_column(double cost, const std::vector<std::pair<int, double>>& entries) {
  for (const auto& [r, v] : entries) {
    require(r >= 0 && r < rows(), ErrorCode::kInvalidArgument, "column entry row out of range");
    if (v == 0.0) continue;
    row_.push_back(r);
    val_.push_back(v);
  }
  c_.push_back(cost);
  start_.push_back(val_.size());
  return cols() - 1;
}

double StandardLp::residual(const std::vector<double>& x) const {
  std::vector<double> ax(b_.size(), 0.0);
  double worst = 0.0;
  for (int j = 0; j < cols(); ++j) {
    const double xj = x[static_cast<std::size_t>(j)];
    worst = std::max(worst, -xj);
    for (std::size_t k = begin(j); k < end(j); ++k) ax[static_cast<std::size_t>(row_[k])] += val_[k] * xj;
  }
  for (std::size_t i = 0; i < b_.size(); ++i) worst = std::max(worst, std::abs(ax[i] - b_[i]));
  return worst;
}

const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace {

class Simplex {
 public:
  Simplex(const StandardLp& lp, const SimplexOptions& opts)
      : lp_(lp), opts_(opts), m_(lp.rows()), n_(lp.cols()) {
    sign_.resize(static_cast<std::size_t>(m_));
    b_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      sign_[static_cast<std::size_t>(i)] = lp.rhs(i) < 0.0 ? -1.0 : 1.0;
      b_[i] = std::abs(lp.rhs(i));
    }
    // Start from the all-artificial basis.
    basis_.resize(static_cast<std::size_t>(m_));
    where_.assign(static_cast<std::size_t>(n_ + m_), -1);
    barred_.assign(static_cast<std::size_t>(n_ + m_), 0);
    for (int i = 0; i < m_; ++i) {
      basis_[static_cast<std::size_t>(i)] = n_ + i;
      where_[static_cast<std::size_t>(n_ + i)] = i;
    }
    binv_ = Eigen::MatrixXd::Identity(m_, m_);
    xb_ = b_;
  }

  SimplexResult run() {
    SimplexResult res;
    phase_ = 1;
    LpStatus st = iterate();
    if (st == LpStatus::kIterationLimit) return finish(st);
    double infeas = 0.0;
    for (int i = 0; i < m_; ++i)
      if (basis_[static_cast<std::size_t>(i)] >= n_) infeas += std::max(xb_[i], 0.0);
    const double scale = std::max(1.0, b_.lpNorm<Eigen::Infinity>());
    if (infeas > 1e-7 * scale) return finish(LpStatus::kInfeasible);
    phase1_iterations_ = iterations_;
    drive_out_artificials();
    for (int j = n_; j < n_ + m_; ++j) barred_[static_cast<std::size_t>(j)] = 1;
    phase_ = 2;
    st = iterate();
    return finish(st);
  }

 private:
  double cost(int j) const {
    if (phase_ == 1) return j >= n_ ? 1.0 : 0.0;
    return j >= n_ ? 0.0 : lp_.cost(j);
  }

  double col_dot(const Eigen::VectorXd& y, int j) const {
    if (j >= n_) return y[j - n_];
    double s = 0.0;
    for (std::size_t k = lp_.begin(j); k < lp_.end(j); ++k) {
      const int r = lp_.row_at(k);
      s += y[r] * lp_.value_at(k) * sign_[static_cast<std::size_t>(r)];
    }
    return s;
  }

  void column(int j, Eigen::VectorXd& w) const {
    if (j >= n_) {
      w = binv_.col(j - n_);
      return;
    }
    w.setZero(m_);
    for (std::size_t k = lp_.begin(j); k < lp_.end(j); ++k) {
      const int r = lp_.row_at(k);
      w.noalias() += (lp_.value_at(k) * sign_[static_cast<std::size_t>(r)]) * binv_.col(r);
    }
  }

  void refactor() {
    Eigen::MatrixXd basis_matrix = Eigen::MatrixXd::Zero(m_, m_);
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[static_cast<std::size_t>(i)];
      if (j >= n_) {
        basis_matrix(j - n_, i) = 1.0;
        continue;
      }
      for (std::size_t k = lp_.begin(j); k < lp_.end(j); ++k) {
        const int r = lp_.row_at(k);
        basis_matrix(r, i) = lp_.value_at(k) * sign_[static_cast<std::size_t>(r)];
      }
    }
    binv_ = basis_matrix.partialPivLu().inverse();
    xb_.noalias() = binv_ * b_;
  }

  void pivot(int q, int r, const Eigen::VectorXd& w) {
    const int leaving = basis_[static_cast<std::size_t>(r)];
    where_[static_cast<std::size_t>(leaving)] = -1;
    if (leaving >= n_) barred_[static_cast<std::size_t>(leaving)] = 1;
    basis_[static_cast<std::size_t>(r)] = q;
    where_[static_cast<std::size_t>(q)] = r;
    const Eigen::RowVectorXd pivot_row = binv_.row(r) / w[r];
    binv_.noalias() -= w * pivot_row;
    binv_.row(r) = pivot_row;
  }

  LpStatus iterate() {
    Eigen::VectorXd cb(m_), y(m_), w(m_);
    int degenerate = 0;
    bool bland = false;
    int since_refactor = 0;
    const int total = n_ + m_;
    auto fresh_multipliers = [&] {
      for (int i = 0; i < m_; ++i) cb[i] = cost(basis_[static_cast<std::size_t>(i)]);
      y.noalias() = binv_.transpose() * cb;
    };
    fresh_multipliers();
    while (true) {
      if (iterations_ >= opts_.max_iterations) return LpStatus::kIterationLimit;

      int q = -1;
      double best = -opts_.optimality_tol;
      for (int j = 0; j < total; ++j) {
        if (where_[static_cast<std::size_t>(j)] >= 0 || barred_[static_cast<std::size_t>(j)]) continue;
        const double d = cost(j) - col_dot(y, j);
        if (d < best) {
          best = d;
          q = j;
          if (bland) break;
        }
      }
      if (q < 0) return LpStatus::kOptimal;

      column(q, w);
      int r = -1;
      if (!bland) {
        // Harris two-pass ratio test: widest pivot among near-minimal ratios.
        double tmax = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m_; ++i)
          if (w[i] > opts_.pivot_tol)
            tmax = std::min(tmax, (std::max(xb_[i], 0.0) + opts_.feasibility_tol) / w[i]);
        if (!std::isfinite(tmax)) return LpStatus::kUnbounded;
        double widest = 0.0;
        for (int i = 0; i < m_; ++i)
          if (w[i] > opts_.pivot_tol && std::max(xb_[i], 0.0) / w[i] <= tmax && w[i] > widest) {
            widest = w[i];
            r = i;
          }
      } else {
        double tmin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m_; ++i) {
          if (w[i] <= opts_.pivot_tol) continue;
          const double ratio = std::max(xb_[i], 0.0) / w[i];
          if (ratio < tmin - 1e-12 ||
              (ratio <= tmin + 1e-12 && basis_[static_cast<std::size_t>(i)] <
                                            basis_[static_cast<std::size_t>(r)])) {
            tmin = std::min(tmin, ratio);
            r = i;
          }
        }
        if (r < 0) return LpStatus::kUnbounded;
      }

      const double theta = std::max(xb_[r], 0.0) / w[r];
      xb_.noalias() -= theta * w;
      xb_[r] = theta;
      for (int i = 0; i < m_; ++i)
        if (xb_[i] < 0.0) xb_[i] = 0.0;
      // The entering reduced cost must drop to zero: y += (d_q / w_r) * row_r(B^-1).
      y.noalias() += (best / w[r]) * binv_.row(r).transpose();
      pivot(q, r, w);
      ++iterations_;

      if (theta * -best <= 1e-13) {
        if (++degenerate > opts_.degenerate_limit) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
      if (++since_refactor >= opts_.refactor_every) {
        refactor();
        fresh_multipliers();
        since_refactor = 0;
      }
    }
  }

  void drive_out_artificials() {
    Eigen::VectorXd w(m_);
    for (int r = 0; r < m_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < n_) continue;
      int q = -1;
      double best = 1e-7;
      for (int j = 0; j < n_; ++j) {
        if (where_[static_cast<std::size_t>(j)] >= 0) continue;
        double s = 0.0;
        for (std::size_t k = lp_.begin(j); k < lp_.end(j); ++k) {
          const int row = lp_.row_at(k);
          s += binv_(r, row) * lp_.value_at(k) * sign_[static_cast<std::size_t>(row)];
        }
        if (std::abs(s) > best) {
          best = std::abs(s);
          q = j;
        }
      }
      if (q < 0) continue;  // redundant row: the artificial stays basic at zero
      column(q, w);
      const double theta = xb_[r] / w[r];
      xb_.noalias() -= theta * w;
      xb_[r] = theta;
      pivot(q, r, w);
    }
    refactor();
  }

  SimplexResult finish(LpStatus st) {
    refactor();
    SimplexResult res;
    res.status = st;
    res.iterations = iterations_;
    res.phase1_iterations = phase1_iterations_;
    res.x.assign(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < m_; ++i) {
      const int j = basis_[static_cast<std::size_t>(i)];
      if (j < n_) res.x[static_cast<std::size_t>(j)] = std::max(xb_[i], 0.0);
    }
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = cost(basis_[static_cast<std::size_t>(i)]);
    const Eigen::VectorXd y = binv_.transpose() * cb;
    res.duals.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) res.duals[static_cast<std::size_t>(i)] = y[i] * sign_[static_cast<std::size_t>(i)];
    for (int j = 0; j < n_; ++j) res.objective += lp_.cost(j) * res.x[static_cast<std::size_t>(j)];
    res.residual = lp_.residual(res.x);
    return res;
  }

  const StandardLp& lp_;
  SimplexOptions opts_;
  int m_;
  int n_;
  int phase_ = 1;
  long iterations_ = 0;
  long phase1_iterations_ = 0;
  std::vector<double> sign_;
  std::vector<int> basis_;
  std::vector<int> where_;
  std::vector<char> barred_;
  Eigen::MatrixXd binv_;
  Eigen::VectorXd xb_;
  Eigen::VectorXd b_;
};

}  // namespace

SimplexResult simplex_solve(const StandardLp& lp, const SimplexOptions& opts) {
  if (lp.rows() == 0) {
    SimplexResult res;
    res.x.assign(static_cast<std::size_t>(lp.cols()), 0.0);
    for (int j = 0; j < lp.cols(); ++j)
      if (lp.cost(j) < 0.0) {
        res.status = LpStatus::kUnbounded;
        return res;
      }
    res.status = LpStatus::kOptimal;
    return res;
  }
  return Simplex(lp, opts).run();
}

void write_mps(std::ostream& out, const StandardLp& lp, const std::string& name) {
  out.precision(17);
  out << "NAME " << name << "\nROWS\n N COST\n";
  for (int i = 0; i < lp.rows(); ++i) out << " E R" << i << '\n';
  out << "COLUMNS\n";
  for (int j = 0; j < lp.cols(); ++j) {
    if (lp.cost(j) != 0.0) out << " X" << j << " COST " << lp.cost(j) << '\n';
    for (std::size_t k = lp.begin(j); k < lp.end(j); ++k)
      out << " X" << j << " R" << lp.row_at(k) << ' ' << lp.value_at(k) << '\n';
  }
  out << "RHS\n";
  for (int i = 0; i < lp.rows(); ++i)
    if (lp.rhs(i) != 0.0) out << " RHS R" << i << ' ' << lp.rhs(i) << '\n';
  out << "ENDATA\n";
}

}  // namespace ccsp
