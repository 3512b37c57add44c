#include "ccsp/salp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ccsp/errors.hpp"

namespace ccsp {

std::uint64_t locals_index(int n, VarSet s, std::uint32_t assignment) {
  const int size = set_size(s);
  std::uint64_t off = 0;
  for (int j = 0; j < size; ++j) off += binomial(n, j) << j;
  return off + (colex_rank(s) << size) + assignment;
}

std::uint64_t moment_index(int n, VarSet t) {
  const int size = set_size(t);
  std::uint64_t off = 0;
  for (int j = 1; j < size; ++j) off += binomial(n, j);
  return off + colex_rank(t);
}

namespace {

// Reverses the low `bits` bits: position j (member j) <-> index bit bits-1-j.
std::uint32_t reverse_bits(std::uint32_t p, int bits) {
  std::uint32_t r = 0;
  for (int j = 0; j < bits; ++j)
    if ((p >> j) & 1U) r |= std::uint32_t{1} << (bits - 1 - j);
  return r;
}

VarSet positions_to_set(const std::vector<int>& vars, std::uint32_t positions) {
  VarSet s = 0;
  for (; positions; positions &= positions - 1)
    s |= singleton(vars[static_cast<std::size_t>(std::countr_zero(positions))]);
  return s;
}

LpProblem build_locals(const Nae3Instance& inst, LpProblem p) {
  const int n = inst.n();
  const int top = std::min(p.degree, n);
  const double scale = 1.0 / static_cast<double>(inst.num_constraints());
  std::vector<std::vector<std::pair<int, double>>> cols(p.locals_count);
  std::vector<double> cost(p.locals_count, 0.0);
  int row = 0;
  cols[0].push_back({row++, 1.0});  // y_empty = 1
  for (int s = 0; s < top; ++s)
    for_each_colex_subset(n, s, [&](VarSet set, std::uint64_t) {
      for (int v = 0; v < n; ++v) {
        if (contains(set, v)) continue;
        const VarSet u = set | singleton(v);
        for (std::uint32_t a = 0; a < (std::uint32_t{1} << s); ++a) {
          const VarSet vals = scatter_index(set, a);
          cols[locals_index(n, set, a)].push_back({row, 1.0});
          cols[locals_index(n, u, gather_index(u, vals))].push_back({row, -1.0});
          cols[locals_index(n, u, gather_index(u, vals | singleton(v)))].push_back({row, -1.0});
          ++row;
        }
      }
    });
  inst.for_each_constraint([&](int a, int b, int c, std::uint64_t rank) {
    const VarSet t = singleton(a) | singleton(b) | singleton(c);
    for (int j = 0; j < 8; ++j)
      if (inst.violated(rank, (j >> 2) & 1, (j >> 1) & 1, j & 1))
        cost[locals_index(n, t, static_cast<std::uint32_t>(j))] += scale;
  });
  p.core = StandardLp(row);
  p.core.set_rhs(0, 1.0);
  for (std::size_t j = 0; j < cols.size(); ++j) p.core.add_column(cost[j], cols[j]);
  return p;
}

LpProblem build_moments(const Nae3Instance& inst, LpProblem p) {
  const int n = inst.n();
  const int top = std::min(p.degree, n);
  const double scale = 1.0 / static_cast<double>(inst.num_constraints());
  const std::uint64_t rows = binomial_prefix(n, top) - 1;
  require(rows < (std::uint64_t{1} << 31), ErrorCode::kSize, "moment problem too large");
  p.core = StandardLp(static_cast<int>(rows));

  // Objective in moments: mu_S(a) = sum over ones(a) ⊆ T ⊆ S of
  // (-1)^{|T \ ones(a)|} x_T.
  std::vector<double> c(rows, 0.0);
  inst.for_each_constraint([&](int a, int b, int cc, std::uint64_t rank) {
    const std::vector<int> vars{a, b, cc};
    for (std::uint32_t idx = 0; idx < 8; ++idx) {
      if (!inst.violated(rank, (idx >> 2) & 1, (idx >> 1) & 1, idx & 1)) continue;
      const std::uint32_t ones = reverse_bits(idx, 3);
      const std::uint32_t zeros = 7U & ~ones;
      for_each_subset(zeros, [&](VarSet extra) {
        const std::uint32_t pos = ones | static_cast<std::uint32_t>(extra);
        const double sgn = (std::popcount(extra) & 1) ? -scale : scale;
        if (pos == 0)
          p.objective_constant += sgn;
        else
          c[moment_index(n, positions_to_set(vars, pos))] += sgn;
      });
    }
  });
  for (std::uint64_t r = 0; r < rows; ++r) p.core.set_rhs(static_cast<int>(r), c[r]);

  // One column per top-size local entry: nonnegativity of mu_S(a).
  std::vector<std::pair<int, double>> entries;
  for_each_colex_subset(n, top, [&](VarSet set, std::uint64_t) {
    const auto vars = members(set);
    for (std::uint32_t idx = 0; idx < (std::uint32_t{1} << top); ++idx) {
      const std::uint32_t ones = reverse_bits(idx, top);
      const std::uint32_t zeros = ((std::uint32_t{1} << top) - 1) & ~ones;
      entries.clear();
      for_each_subset(zeros, [&](VarSet extra) {
        const std::uint32_t pos = ones | static_cast<std::uint32_t>(extra);
        if (pos == 0) return;
        entries.push_back({static_cast<int>(moment_index(n, positions_to_set(vars, pos))),
                           (std::popcount(extra) & 1) ? -1.0 : 1.0});
      });
      p.core.add_column(ones == 0 ? 1.0 : 0.0, entries);
    }
  });
  return p;
}

// mu_S for every stored S from moments, by the inverse zeta transform.
PseudoDistribution decode_moments(const LpProblem& p, const std::vector<double>& x) {
  PseudoDistribution mu(p.n, p.degree);
  std::vector<double> f;
  mu.for_each_local_mut([&](VarSet s, std::span<double> probs) {
    const int size = set_size(s);
    if (size == 0) return;
    const auto vars = members(s);
    f.assign(std::size_t{1} << size, 0.0);
    f[0] = 1.0;
    for (std::uint32_t pos = 1; pos < f.size(); ++pos)
      f[pos] = x[moment_index(p.n, positions_to_set(vars, pos))];
    for (int j = 0; j < size; ++j)
      for (std::uint32_t pos = 0; pos < f.size(); ++pos)
        if (!((pos >> j) & 1U)) f[pos] -= f[pos | (std::uint32_t{1} << j)];
    for (std::uint32_t pos = 0; pos < f.size(); ++pos) probs[reverse_bits(pos, size)] = f[pos];
  });
  return mu;
}

}  // namespace

LpProblem build_sa_lp(const Nae3Instance& inst, int degree, const SaLpOptions& opts) {
  require(degree >= 3, ErrorCode::kInvalidArgument, "Sherali-Adams degree must be at least 3");
  require(inst.complete() || opts.allow_incomplete, ErrorCode::kIncomplete,
          "instance is not complete");
  require(inst.num_constraints() > 0, ErrorCode::kInvalidArgument, "instance has no constraints");
  LpProblem p;
  p.form = opts.form;
  p.n = inst.n();
  p.degree = degree;
  p.locals_count = pd_entry_count(inst.n(), degree);
  p.objective_terms = 2 * inst.num_constraints();
  if (p.locals_count > opts.max_variables)
    fail(ErrorCode::kSize, "degree-" + std::to_string(degree) + " relaxation on n=" +
                               std::to_string(inst.n()) + " needs " +
                               std::to_string(p.locals_count) + " variables, budget is " +
                               std::to_string(opts.max_variables));
  return opts.form == LpForm::kLocals ? build_locals(inst, std::move(p))
                                      : build_moments(inst, std::move(p));
}

double lp_objective(const LpProblem& p, const std::vector<double>& values) {
  if (p.form == LpForm::kLocals) {
    double obj = 0.0;
    for (int j = 0; j < p.core.cols(); ++j) obj += p.core.cost(j) * values[static_cast<std::size_t>(j)];
    return obj;
  }
  double obj = p.objective_constant;
  for (int r = 0; r < p.core.rows(); ++r) obj += p.core.rhs(r) * values[static_cast<std::size_t>(r)];
  return obj;
}

LpSolution solve_lp(const LpProblem& p, const SimplexOptions& opts) {
  const SimplexResult r = simplex_solve(p.core, opts);
  LpSolution s;
  s.status = r.status;
  s.iterations = r.iterations;
  if (p.form == LpForm::kLocals) {
    s.values = r.x;
    s.residual = r.residual;
  } else {
    // Multipliers of the dual are the negated moments.
    s.values.resize(r.duals.size());
    for (std::size_t i = 0; i < r.duals.size(); ++i) s.values[i] = -r.duals[i];
    // Residual: most negative top-size local, i.e. most negative reduced cost.
    double worst = 0.0;
    for (int j = 0; j < p.core.cols(); ++j) {
      double v = p.core.cost(j);
      for (std::size_t k = p.core.begin(j); k < p.core.end(j); ++k)
        v += p.core.value_at(k) * s.values[static_cast<std::size_t>(p.core.row_at(k))];
      worst = std::max(worst, -v);
    }
    s.residual = worst;
  }
  if (s.status == LpStatus::kInfeasible || s.status == LpStatus::kUnbounded)
    fail(ErrorCode::kInfeasible,
         std::string("relaxation reported ") + lp_status_name(s.status) +
             "; the uniform product is always feasible, so this is a solver fault");
  s.objective = lp_objective(p, s.values);
  return s;
}

std::vector<double> pd_to_lp_values(const LpProblem& p, const PseudoDistribution& mu) {
  require(mu.n() == p.n && std::min(mu.degree(), mu.n()) == std::min(p.degree, p.n),
          ErrorCode::kInvalidArgument, "pseudodistribution does not match the problem");
  if (p.form == LpForm::kLocals) return {mu.data().begin(), mu.data().end()};
  std::vector<double> x(static_cast<std::size_t>(p.core.rows()), 0.0);
  mu.for_each_local([&](VarSet s, std::span<const double> probs) {
    if (s != 0) x[moment_index(p.n, s)] = probs.back();
  });
  return x;
}

PseudoDistribution lp_to_pd(const LpProblem& p, const LpSolution& s, double clamp_tol,
                            double residual_tol) {
  require(s.status == LpStatus::kOptimal, ErrorCode::kDecode,
          std::string("cannot decode a solution with status ") + lp_status_name(s.status));
  if (s.residual > residual_tol)
    fail(ErrorCode::kDecode, "solution residual " + std::to_string(s.residual) +
                                 " exceeds " + std::to_string(residual_tol));
  PseudoDistribution mu;
  if (p.form == LpForm::kLocals) {
    mu = PseudoDistribution(p.n, p.degree);
    std::copy(s.values.begin(), s.values.end(), mu.data().begin());
  } else {
    mu = decode_moments(p, s.values);
  }
  pd_clamp(mu, std::max(clamp_tol, s.residual));
  return mu;
}

void write_lp(std::ostream& out, const LpProblem& p) {
  out << "* ccsp Sherali-Adams relaxation, n=" << p.n << " degree=" << p.degree << " form="
      << (p.form == LpForm::kLocals ? "locals" : "moments-dual") << '\n';
  if (p.form == LpForm::kMoments)
    out << "* relaxation value = " << p.objective_constant << " - (optimal value)\n";
  write_mps(out, p.core, p.form == LpForm::kLocals ? "SA_LOCALS" : "SA_MOMENTS_DUAL");
}

}  // namespace ccsp
