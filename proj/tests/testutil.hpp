#pragma once

// Shared helpers for the unit suites: cost element builders and a generator
// of well-scoped (not necessarily well-typed) raw terms for the syntax-level
// properties.

#include "calf/syntax.hpp"

#include <random>

namespace calf::testutil {

inline CostElem leaf(std::uint64_t n) {
  CostElem e;
  e.n = n;
  return e;
}

inline CostElem duo(CostElem a, CostElem b) {
  CostElem e;
  e.parts = {std::move(a), std::move(b)};
  return e;
}

// Well-scoped random term with `scope` free variables. Size only bounds the
// recursion; the result is syntax for the substitution/alpha properties, not
// a typeable program.
inline Term gen_raw(std::mt19937_64& rng, int size, int scope) {
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  if (size <= 1) {
    switch (scope > 0 ? pick(5) : 1 + pick(4)) {
      case 0: return mk_var(pick(scope));
      case 1: return mk_zero();
      case 2: return mk_refl();
      case 3: return mk_star();
      default: return mk_zero();
    }
  }
  int budget = size - 1;
  auto sub = [&](int slots, int extra) {
    return gen_raw(rng, budget / slots + 1, scope + extra);
  };
  switch (pick(13)) {
    case 0: return mk_suc(sub(1, 0));
    case 1: return mk_ret(sub(1, 0));
    case 2: return mk_bind(sub(2, 0), sub(2, 1));
    case 3: return mk_step(CostExpr::lit(leaf(rng() % 4)), sub(1, 0));
    case 4: return mk_lam(sub(1, 1));
    case 5: return mk_ap(sub(2, 0), sub(2, 0));
    case 6: return mk_pair(sub(2, 0), sub(2, 0));
    case 7: return mk_split(sub(2, 0), sub(2, 2));
    case 8: return mk_seal(sub(1, 0));
    case 9: return mk_unseal_ind(sub(3, 0), ty_f(ty_nat()), sub(3, 1), sub(3, 0));
    case 10: return mk_plam(sub(1, 0));
    case 11: return mk_pap(sub(1, 0));
    default: return mk_ind(sub(3, 0), ty_f(ty_nat()), sub(3, 0), sub(3, 2));
  }
}

} // namespace calf::testutil
