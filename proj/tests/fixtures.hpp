#pragma once

// Shared generators for the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ccsp/instance.hpp"
#include "ccsp/pseudodist.hpp"
#include "ccsp/rng.hpp"
#include "ccsp/rounding.hpp"

namespace ccsp::testing {

/// Complete k-CSP whose tables reject `zeros` random assignments each. With a
/// planted assignment, its row is never rejected.
inline KcspInstance random_kcsp(int n, int k, int zeros, std::uint64_t seed,
                                const Assignment* planted = nullptr) {
  KcspInstance inst(n, k);
  Rng rng(seed);
  const int width = 1 << k;
  for_each_lex_subset(n, k, [&](const std::vector<int>& vars) {
    std::vector<std::uint8_t> table(static_cast<std::size_t>(width), 1);
    int keep = -1;
    if (planted) {
      keep = 0;
      for (int v : vars) keep = (keep << 1) | (*planted)[static_cast<std::size_t>(v)];
    }
    int placed = 0;
    while (placed < std::min(zeros, width - (planted ? 1 : 0))) {
      const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(width)));
      if (j == keep || table[static_cast<std::size_t>(j)] == 0) continue;
      table[static_cast<std::size_t>(j)] = 0;
      ++placed;
    }
    inst.set_table(vars, table);
  });
  return inst;
}

inline Assignment random_assignment(int n, Rng& rng) {
  Assignment a(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) a[static_cast<std::size_t>(v)] = rng.below(2) ? 1 : 0;
  return a;
}

/// Convex combination of `base` (heavy) and noisy copies with total weight
/// `noise`; each copy flips every variable with probability `flip`.
inline PseudoDistribution noisy_mixture(const Assignment& base, int degree, int copies,
                                        double noise, double flip, Rng& rng) {
  const int n = static_cast<int>(base.size());
  std::vector<Assignment> support{base};
  std::vector<double> weights{1.0 - noise};
  for (int c = 0; c < copies; ++c) {
    Assignment a = base;
    for (int v = 0; v < n; ++v)
      if (rng.bernoulli(flip)) a[static_cast<std::size_t>(v)] ^= 1;
    support.push_back(a);
    weights.push_back(noise * (0.5 + rng.uniform()));
  }
  double extra = 0.0;
  for (std::size_t i = 1; i < weights.size(); ++i) extra += weights[i];
  for (std::size_t i = 1; i < weights.size(); ++i) weights[i] *= noise / extra;
  return PseudoDistribution::mixture(n, degree, support, weights);
}

/// A rounding state: V \ V_U integral, delta small enough for thresholding.
struct RoundingState {
  Nae3Instance inst;
  PseudoDistribution mu;
  VarSet unfixed = 0;
  double delta = 0.0;
  double tau = 0.0;
  double L = 0.0;
};

/// Draws states until one satisfies delta <= factor / tau. Families alternate
/// between noisy mixtures and product distributions with a few strongly
/// biased variables so that candidate thresholds land inside the range.
inline RoundingState rounding_state(std::uint64_t seed, double factor = 0.1) {
  Rng rng(seed);
  for (int attempt = 0;; ++attempt) {
    const int n = 24 + static_cast<int>(rng.below(21));
    const double p = rng.below(2) ? 0.0 : 0.002;
    PlantedInstance pl = gen_planted_nae3(n, p, rng.next());
    RoundingState st;
    st.L = log_term(n, 2.0);
    st.tau = st.L * st.L;
    const double limit = factor / st.tau;
    VarSet fixed = 0, fixed_values = 0;
    for (int v = 0; v < n; ++v)
      if (rng.bernoulli(0.1)) {
        fixed |= singleton(v);
        if (pl.planted[static_cast<std::size_t>(v)]) fixed_values |= singleton(v);
      }
    const VarSet all = n == 64 ? ~VarSet{0} : (VarSet{1} << n) - 1;
    st.unfixed = all & ~fixed;
    if (set_size(st.unfixed) < 3) continue;

    PseudoDistribution mu;
    // Shrink the noise as attempts accumulate so the loop ends quickly.
    const double scale = std::pow(0.7, attempt);
    switch (seed % 4) {
      case 0:  // copies differing from the base in one or two variables
        mu = noisy_mixture(pl.planted, 3, 1 + static_cast<int>(rng.below(4)),
                           scale * (0.02 + 0.2 * rng.uniform()), 1.5 / n, rng);
        break;
      case 1: {  // independent bits, mostly near-integral, a few strongly biased
        std::vector<double> p_one(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
          const bool strong = rng.bernoulli(1.5 / n);
          const double b = scale * (strong ? 0.2 * rng.uniform() : 0.002 * rng.uniform());
          p_one[static_cast<std::size_t>(v)] = pl.planted[static_cast<std::size_t>(v)] ? 1.0 - b : b;
        }
        mu = PseudoDistribution::product(p_one, 3);
        break;
      }
      case 2: {  // planted against its complement, plus sparse noise
        const double lambda = 0.5 * rng.uniform();
        const double noise = scale * 0.05 * rng.uniform();
        std::vector<Assignment> support{pl.planted, pl.planted.complement()};
        std::vector<double> weights{(1.0 - noise) * (1.0 - lambda), (1.0 - noise) * lambda};
        for (int c = 0; c < 3; ++c) {
          Assignment a = rng.below(2) ? pl.planted : pl.planted.complement();
          a[rng.below(static_cast<std::uint64_t>(n))] ^= 1;
          support.push_back(a);
          weights.push_back(noise / 3.0);
        }
        mu = PseudoDistribution::mixture(n, 3, support, weights);
        break;
      }
      default:
        mu = noisy_mixture(pl.planted, 3, 1 + static_cast<int>(rng.below(4)),
                           scale * (0.002 + 0.05 * rng.uniform()), 0.1 + 0.3 * rng.uniform(), rng);
    }
    st.mu = pd_fix(mu, fixed, fixed_values);
    st.delta = unfixed_delta(pl.instance, st.mu, st.unfixed);
    if (st.delta > limit) continue;
    st.inst = std::move(pl.instance);
    return st;
  }
}

}  // namespace ccsp::testing
