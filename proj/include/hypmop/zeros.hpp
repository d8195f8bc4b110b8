#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypmop/freeconv.hpp"
#include "hypmop/mop.hpp"

namespace hypmop {

struct ZeroSet {
  std::vector<mpf_class> roots;   // ascending
  std::vector<int> multiplicity;  // parallel to roots
  int degree = 0;
  int digits = 0;
  Rat scale = 1;                  // roots are those of P(scale * x)
  bool complex_present = false;   // real roots with multiplicity < degree
  bool out_of_scope = false;      // Bessel setting: no zero claims

  int count() const {
    int c = 0;
    for (int m : multiplicity) c += m;
    return c;
  }
  bool all_simple() const {
    return std::all_of(multiplicity.begin(), multiplicity.end(), [](int m) { return m == 1; });
  }
  std::vector<double> as_doubles() const {
    std::vector<double> v;
    for (const auto& r : roots) v.push_back(r.get_d());
    return v;
  }
  ZeroSet scaled(const Rat& s) const {
    if (sgn(s) <= 0) throw std::invalid_argument("ZeroSet::scaled: scale must be positive");
    ZeroSet z = *this;
    for (auto& r : z.roots) r = r * mpf_class(s.get_den(), r.get_prec()) / mpf_class(s.get_num(), r.get_prec());
    z.scale = scale * s;
    return z;
  }
};

class ClusteringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using IntVec = std::vector<Int>;

inline Poly poly_gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = r.is_zero() ? r : r.monic();
  }
  return a.is_zero() ? a : a.monic();
}

// Yun: p = c * prod f_i^i with f_i squarefree and coprime.
inline std::vector<Poly> squarefree_factors(const Poly& p) {
  std::vector<Poly> out;
  Poly a = p.monic();
  Poly b = a.derivative();
  Poly c = poly_gcd(a, b);
  if (c.degree() <= 0) return {a};
  Poly w = divmod(a, c).first;
  Poly y = divmod(b, c).first;
  Poly z = y - w.derivative();
  while (w.degree() > 0) {
    Poly g = poly_gcd(w, z);
    out.push_back(g);
    w = divmod(w, g).first;
    y = divmod(z, g).first;
    z = y - w.derivative();
  }
  return out;
}

inline IntVec primitive_int(const Poly& p) {
  Int l = lcm_of_denominators(p.coeffs());
  IntVec v;
  for (const auto& c : p.coeffs()) v.push_back(Int(c * l));
  Int g = 0;
  for (const auto& c : v) g = gcd(g, c);
  if (g > 1)
    for (auto& c : v) c /= g;
  return v;
}

inline void taylor_shift1(IntVec& a) {
  const int n = static_cast<int>(a.size());
  for (int i = 0; i < n - 1; ++i)
    for (int k = n - 2; k >= i; --k) a[k] += a[k + 1];
}

inline int sign_variations(const IntVec& a) {
  int v = 0, last = 0;
  for (const auto& c : a) {
    int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

// Descartes bound for roots of a in (0,1): variations of (x+1)^n a(1/(x+1)).
inline int descartes01(const IntVec& a) {
  IntVec t(a.rbegin(), a.rend());
  taylor_shift1(t);
  return sign_variations(t);
}

struct Isolated {
  Rat lo, hi;  // lo == hi for an exact rational root
};

// Roots of a(x) in (0,1) where a represents P(base + width * x).
inline void vca(IntVec a, const Rat& base, const Rat& width, std::vector<Isolated>& out, int depth = 0) {
  if (depth > 4000) throw ClusteringError("root isolation did not terminate");
  if (sgn(a[0]) == 0) {
    out.push_back({base, base});
    a.erase(a.begin());
  }
  int v = descartes01(a);
  if (v == 0) return;
  if (v == 1) {
    out.push_back({base, base + width});
    return;
  }
  const int n = static_cast<int>(a.size()) - 1;
  IntVec left(a.size());
  for (int i = 0; i <= n; ++i) left[i] = a[i] << (n - i);  // 2^n a(x/2)
  IntVec right = left;
  taylor_shift1(right);
  const Rat half = width / 2;
  vca(std::move(left), base, half, out, depth + 1);
  vca(std::move(right), base + half, half, out, depth + 1);
}

// Isolating intervals for the positive roots of a squarefree integer polynomial.
inline std::vector<Isolated> positive_roots(const IntVec& p) {
  const int n = static_cast<int>(p.size()) - 1;
  if (n < 1) return {};
  // Cauchy bound 1 + max |a_i / a_n|, rounded up to a power of two
  mpq_class m = 0;
  for (int i = 0; i < n; ++i) {
    mpq_class r = mpq_class(abs(p[i])) / mpq_class(abs(p[n]));
    if (r > m) m = r;
  }
  Int bound = 1;
  unsigned e = 0;
  while (Rat(bound) <= m + 1) {
    bound <<= 1;
    ++e;
  }
  IntVec a(p.size());
  for (int i = 0; i <= n; ++i) a[i] = p[i] << (e * i);  // p(B x)
  std::vector<Isolated> out;
  vca(std::move(a), Rat(0), Rat(bound), out);
  return out;
}

inline int sign_at(const IntVec& p, const Rat& x) {
  Rat acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + Rat(*it);
  return sgn(acc);
}

inline int precision_bits(const IntVec& p, int digits, const Rat& xmax) {
  size_t cb = 0;
  for (const auto& c : p) cb = std::max(cb, mpz_sizeinbase(c.get_mpz_t(), 2));
  const double xb = std::max(0.0, std::log2(std::max(1.0, std::fabs(xmax.get_d()))));
  return static_cast<int>(3.33 * (digits + 10) + cb + p.size() * xb + 64);
}

// Safeguarded Newton inside (lo, hi), sign(p(lo)) = slo != 0 = -sign(p(hi)).
inline mpf_class refine(const IntVec& p, Rat lo, Rat hi, int digits, int bits) {
  const int n = static_cast<int>(p.size()) - 1;
  std::vector<mpf_class> c(n + 1, mpf_class(0, bits));
  for (int i = 0; i <= n; ++i) c[i] = mpf_class(p[i], bits);
  mpf_class L(lo, bits), H(hi, bits), x(0, bits), f(0, bits), df(0, bits), dx(0, bits), tol(0, bits);
  const int slo = sign_at(p, lo);
  mpf_class ten(10, bits);
  mpf_pow_ui(tol.get_mpf_t(), ten.get_mpf_t(), digits + 3);
  tol = 1 / tol;
  x = (L + H) / 2;
  for (int it = 0; it < 10000; ++it) {
    f = c[n];
    df = 0;
    for (int i = n - 1; i >= 0; --i) {
      df = df * x + f;
      f = f * x + c[i];
    }
    if (sgn(f) == 0) return x;
    if (sgn(f) == slo) L = x;
    else H = x;
    bool newton_ok = sgn(df) != 0;
    if (newton_ok) {
      dx = f / df;
      mpf_class xn(x - dx, bits);
      newton_ok = xn > L && xn < H;
      if (newton_ok) {
        x = xn;
        mpf_class scale(abs(x), bits);
        if (scale < 1) scale = 1;
        if (abs(dx) <= tol * scale) return x;
        continue;
      }
    }
    x = (L + H) / 2;
    mpf_class scale(abs(x), bits);
    if (scale < 1) scale = 1;
    if (H - L <= tol * scale) return x;
  }
  throw ClusteringError("root refinement did not converge");
}

}  // namespace detail

// All real roots of poly to `digits` significant decimal digits.
inline ZeroSet real_roots(const Poly& poly, int digits = 40) {
  if (poly.is_zero()) throw std::invalid_argument("real_roots: zero polynomial");
  if (digits < 1) throw std::invalid_argument("real_roots: digits must be positive");
  ZeroSet zs;
  zs.degree = poly.degree();
  zs.digits = digits;
  if (zs.degree == 0) return zs;

  struct Found {
    mpf_class x;
    int mult;
  };
  std::vector<Found> found;
  auto factors = detail::squarefree_factors(poly);
  for (size_t mi = 0; mi < factors.size(); ++mi) {
    Poly f = factors[mi];
    if (f.degree() < 1) continue;
    const int mult = static_cast<int>(mi) + 1;
    int zero_mult = 0;
    while (sgn(f[0]) == 0) {
      f = divmod(f, Poly::monomial(1)).first;
      ++zero_mult;
    }
    if (zero_mult) found.push_back({mpf_class(0), mult});
    auto p = detail::primitive_int(f);
    auto pneg = p;
    for (size_t i = 1; i < pneg.size(); i += 2) pneg[i] = -pneg[i];
    for (int side : {1, -1}) {
      const auto& q = side > 0 ? p : pneg;
      for (auto iv : detail::positive_roots(q)) {
        const int bits = detail::precision_bits(q, digits, iv.hi);
        mpf_class x(0, bits);
        if (iv.lo == iv.hi) {
          x = mpf_class(iv.lo, bits);
        } else {
          // an endpoint that is itself a root belongs to a neighbouring interval;
          // divide its linear factor out so the bracket has a strict sign change
          Poly g = side > 0 ? f : f.scale_arg(-1);
          for (const Rat& e : {iv.lo, iv.hi})
            if (detail::sign_at(q, e) == 0) g = divmod(g, Poly::linear_root(e)).first;
          const auto qs = detail::primitive_int(g);
          x = detail::refine(qs, iv.lo, iv.hi, digits, bits);
          // rational roots have denominators dividing the leading coefficient
          const Int lead = abs(q.back());
          Rat cand(Int(mpf_class(x * mpf_class(lead, bits) + 0.5, bits)), lead);
          cand.canonicalize();
          if (cand > iv.lo && cand < iv.hi && detail::sign_at(q, cand) == 0) x = mpf_class(cand, bits);
        }
        if (side < 0) x = -x;
        found.push_back({x, mult});
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) { return a.x < b.x; });
  for (auto& f : found) {
    zs.roots.push_back(f.x);
    zs.multiplicity.push_back(f.mult);
  }
  // distinct roots must stay distinct at the requested precision
  mpf_class ten(10, 64), tol(0, 64);
  mpf_pow_ui(tol.get_mpf_t(), ten.get_mpf_t(), digits);
  tol = 1 / tol;
  for (size_t i = 1; i < zs.roots.size(); ++i) {
    mpf_class scale = abs(zs.roots[i]);
    if (scale < 1) scale = 1;
    if (zs.roots[i] - zs.roots[i - 1] <= tol * scale)
      throw ClusteringError("real_roots: roots " + std::to_string(i - 1) + " and " + std::to_string(i) +
                            " coincide at " + std::to_string(digits) + " digits");
  }
  zs.complex_present = zs.count() < zs.degree;
  return zs;
}

inline ZeroSet real_roots(const TypeIIResult& t, int digits = 40) {
  ZeroSet zs = real_roots(t.poly, digits);
  zs.out_of_scope = t.setting == Setting::Bessel;
  return zs;
}

struct DistributionComparison {
  int n = 0;
  double ks = 0;                        // sup |F_emp - F_model|
  std::array<double, 4> moment_delta{}; // empirical minus model, k = 1..4
};

inline DistributionComparison compare_distribution(const ZeroSet& zs, const DensityModel& model,
                                                   const QuadConfig& cfg = {}) {
  auto xs = zs.as_doubles();
  if (xs.empty()) throw std::invalid_argument("compare_distribution: empty zero set");
  std::vector<double> pts;
  for (size_t i = 0; i < xs.size(); ++i)
    for (int m = 0; m < zs.multiplicity[i]; ++m) pts.push_back(xs[i]);
  DistributionComparison out;
  const double n = static_cast<double>(pts.size());
  out.n = static_cast<int>(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    const double F = density_cdf(model, pts[i], cfg);
    out.ks = std::max({out.ks, F - i / n, (i + 1) / n - F});
  }
  for (int k = 1; k <= 4; ++k) {
    double s = 0;
    for (double x : pts) s += std::pow(x, k);
    out.moment_delta[k - 1] = s / n - density_moment(model, k, cfg);
  }
  return out;
}

}  // namespace hypmop
