#pragma once

#include <random>

#include "hypmop/exact_core.hpp"

namespace hypmop {

inline Rat random_rat(std::mt19937_64& rng, long lo, long hi, long maxden) {
  long den = 1 + static_cast<long>(rng() % maxden);
  long span = (hi - lo) * den;
  long num = lo * den + static_cast<long>(rng() % (span + 1));
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Non-integer rationals in (lo, hi) with denominator in [2, maxden].
inline Rat random_fraction(std::mt19937_64& rng, long lo, long hi, long maxden) {
  for (;;) {
    Rat r = random_rat(rng, lo, hi, maxden);
    if (r.get_den() != 1 && r > lo && r < hi) return r;
  }
}

// Random system with a_j > -1, b_j > a_j (j <= min(p,q)), all pairwise
// differences non-integral, so every closed-form hypothesis holds.
inline ParamSystem random_system(std::mt19937_64& rng, int p, int q) {
  for (;;) {
    RatVec a(p), b(q);
    for (auto& x : a) x = random_fraction(rng, -1, 2, 7);
    for (int j = 0; j < q; ++j) {
      Rat base = j < p ? a[j] : Rat(-1);
      b[j] = base + random_fraction(rng, 0, 2, 7);
    }
    ParamSystem sys(a, b);
    auto h = sys.hypotheses();
    if (h.b_distinct_mod_z && h.b_minus_a_nonint && h.a_distinct_mod_z && h.a_below_b) return sys;
  }
}

}  // namespace hypmop
