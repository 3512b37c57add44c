#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ccsp/instance.hpp"
#include "ccsp/lp.hpp"
#include "ccsp/pseudodist.hpp"

namespace ccsp {

/// Locals: one variable y_{S,a} per subset and assignment, tied by
/// extension-by-one equalities; solved directly. Moments: one free variable
/// x_T = Pr[all of T are 1] per nonempty subset, with nonnegativity of every
/// top-size local; solved through its dual, which is already in standard form.
/// Both describe the same set of pseudodistributions.
enum class LpForm { kLocals, kMoments };

struct SaLpOptions {
  LpForm form = LpForm::kMoments;
  /// Budget on the number of locals entries sum_j C(n,j) 2^j.
  std::uint64_t max_variables = std::uint64_t{1} << 18;
  bool allow_incomplete = false;
};

struct LpProblem {
  LpForm form = LpForm::kMoments;
  int n = 0;
  int degree = 0;
  std::uint64_t locals_count = 0;
  std::uint64_t objective_terms = 0;
  /// Locals: the primal. Moments: the dual, min a0^T y s.t. A^T y = c, y >= 0,
  /// whose rows are the moment variables.
  StandardLp core;
  /// Moments only: objective = constant + rhs^T x.
  double objective_constant = 0.0;
};

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  /// Locals entries (Locals form) or moments x_T (Moments form).
  std::vector<double> values;
  double objective = 0.0;
  long iterations = 0;
  /// Feasibility residual of `values` in the problem's own form.
  double residual = 0.0;
};

LpProblem build_sa_lp(const Nae3Instance& inst, int degree, const SaLpOptions& opts = {});

LpSolution solve_lp(const LpProblem& p, const SimplexOptions& opts = {});

/// Objective of the problem at a point given in the problem's own variables.
double lp_objective(const LpProblem& p, const std::vector<double>& values);

/// The point of `p` that represents mu (mu must have the problem's degree).
std::vector<double> pd_to_lp_values(const LpProblem& p, const PseudoDistribution& mu);

/// Decodes an optimal solution. Entries down to -clamp_tol are clamped.
PseudoDistribution lp_to_pd(const LpProblem& p, const LpSolution& s, double clamp_tol = 1e-9,
                            double residual_tol = 1e-6);

/// Index of (S, assignment) in the Locals form, identical to the
/// PseudoDistribution storage order.
std::uint64_t locals_index(int n, VarSet s, std::uint32_t assignment);

/// Row of x_T in the Moments form (T nonempty, |T| <= degree).
std::uint64_t moment_index(int n, VarSet t);

/// Free-format MPS export of the core standard-form problem.
void write_lp(std::ostream& out, const LpProblem& p);

}  // namespace ccsp
