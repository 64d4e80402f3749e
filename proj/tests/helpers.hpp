#pragma once

// Shared generators for randomized tests.

#include "supergeo/calculus.hpp"
#include "supergeo/grassmann.hpp"
#include "supergeo/util.hpp"

namespace sgtest {

using namespace supergeo;

inline G rand_even_soul(Rng& rng, const AlgebraPtr& alg, double scale = 0.3) {
  G v(alg);
  int n = alg->physical();
  for (int t = 0; t < 6; ++t) {
    uint32_t mask = uint32_t(rng.next_u64()) & ((1u << n) - 1u);
    if (mask == 0 || (std::popcount(mask) & 1)) continue;
    v += G::monomial(alg, mask, cplx(rng.sym(scale), 0.0));
  }
  return v;
}

inline G rand_even(Rng& rng, const AlgebraPtr& alg, double lo, double hi,
                   double soul = 0.3) {
  return G::scalar(alg, rng.uniform(lo, hi)) + rand_even_soul(rng, alg, soul);
}

inline G rand_odd(Rng& rng, const AlgebraPtr& alg, double scale = 0.7) {
  G v(alg);
  int n = alg->physical();
  for (int t = 0; t < 6; ++t) {
    uint32_t mask = uint32_t(rng.next_u64()) & ((1u << n) - 1u);
    if (!(std::popcount(mask) & 1)) continue;
    v += G::monomial(alg, mask, cplx(rng.sym(scale), 0.0));
  }
  if (v.is_zero()) v = G::generator(alg, 0) * rng.sym(scale);
  return v;
}

inline G rand_homogeneous(Rng& rng, const AlgebraPtr& alg, bool odd) {
  if (odd) return rand_odd(rng, alg);
  return rand_even(rng, alg, -2.0, 2.0);
}

// Random coordinate vector with slot parities matching the chart.
inline std::vector<G> rand_tangent(Rng& rng, const AlgebraPtr& alg,
                                   const ChartPtr& chart) {
  std::vector<G> v;
  for (int a = 0; a < chart->n(); ++a)
    v.push_back(chart->odd_index(a) ? rand_odd(rng, alg)
                                    : rand_even(rng, alg, -1.5, 1.5));
  return v;
}

}  // namespace sgtest
