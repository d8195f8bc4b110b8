#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hypmop/mop.hpp"
#include "hypmop/report.hpp"

namespace hypmop {

struct EvalConfig {
  int digits = 30;       // working precision of the series sums
  double tol = 1e-15;    // relative truncation tolerance per series
  int panel_nodes = 20;  // Gauss-Legendre nodes per panel (20 or 40)
  double grading = 0.25; // geometric panel ratio toward singular endpoints

  void validate() const {
    if (digits < 16) throw std::invalid_argument("EvalConfig: precision must be at least 16 digits");
    if (!(tol > 0)) throw std::invalid_argument("EvalConfig: tolerance must be positive");
    if (panel_nodes != 20 && panel_nodes != 40) throw std::invalid_argument("EvalConfig: panel_nodes must be 20 or 40");
    if (!(grading > 0 && grading < 1)) throw std::invalid_argument("EvalConfig: grading must lie in (0,1)");
  }
};

// ------------------------------------------------------------------ type II

struct CompensatedValue {
  double value = 0;
  double error = 0;  // a posteriori bound on |value - exact|
};

namespace detail {

inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  double bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

inline void two_prod(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

}  // namespace detail

// Compensated Horner on double-double coefficients.
inline CompensatedValue eval_type2(const Poly& poly, double x) {
  const int d = poly.degree();
  if (d < 0) return {};
  constexpr double u = 0x1p-53;
  double s = to_double(poly[d]);
  double c = to_double(Rat(poly[d] - Rat(s)));
  double abs_sum = std::fabs(s);
  for (int i = d - 1; i >= 0; --i) {
    double hi = to_double(poly[i]);
    double lo = to_double(Rat(poly[i] - Rat(hi)));
    double p, pe, t, se;
    detail::two_prod(s, x, p, pe);
    detail::two_sum(p, hi, t, se);
    c = c * x + (pe + se + lo);
    s = t;
    abs_sum = abs_sum * std::fabs(x) + std::fabs(hi);
  }
  double value = s + c;
  double g = 2 * d * u / (1 - 2 * d * u);
  return {value, u * std::fabs(value) + g * g * abs_sum};
}

// ------------------------------------------------------------ type I series

namespace detail {

inline mpf_class mabs(const mpf_class& v) {
  mpf_class r(v);
  if (sgn(r) < 0) r = -r;
  return r;
}

// Minimal owner for an MPFR value; used for Gamma and real powers.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

inline mpf_class gamma_mpf(const Rat& z, mp_bitcnt_t prec) {
  Mpfr t(prec);
  mpfr_set_q(t.get(), z.get_mpq_t(), MPFR_RNDN);
  mpfr_gamma(t.get(), t.get(), MPFR_RNDN);
  mpf_class r(0, prec);
  mpfr_get_f(r.get_mpf_t(), t.get(), MPFR_RNDN);
  return r;
}

inline mpf_class pow_mpf(double x, const Rat& e, mp_bitcnt_t prec) {
  Mpfr b(prec), t(prec);
  mpfr_set_d(b.get(), x, MPFR_RNDN);
  mpfr_set_q(t.get(), e.get_mpq_t(), MPFR_RNDN);
  mpfr_pow(t.get(), b.get(), t.get(), MPFR_RNDN);
  mpf_class r(0, prec);
  mpfr_get_f(r.get_mpf_t(), t.get(), MPFR_RNDN);
  return r;
}

// gmpxx creates expression temporaries at the default precision, so the
// working precision is made the default for the duration of a computation.
class DefaultPrecision {
 public:
  explicit DefaultPrecision(mp_bitcnt_t prec) : saved_(mpf_get_default_prec()) { mpf_set_default_prec(prec); }
  ~DefaultPrecision() { mpf_set_default_prec(saved_); }
  DefaultPrecision(const DefaultPrecision&) = delete;
  DefaultPrecision& operator=(const DefaultPrecision&) = delete;

 private:
  mp_bitcnt_t saved_;
};

inline mp_bitcnt_t bits_for_digits(double digits) { return static_cast<mp_bitcnt_t>(3.33 * digits + 64); }

// Derivatives 0..nder at x of the residue series, summed directly.
inline std::vector<mpf_class> residue_series_jet(const RatVec& a, const RatVec& c, int L, double x, int nder,
                                                 const EvalConfig& cfg) {
  const int p = static_cast<int>(a.size());
  const int q = static_cast<int>(c.size());
  std::vector<long double> al(p), cl(q);
  for (int i = 0; i < p; ++i) al[i] = to_ldouble(a[i]);
  for (int i = 0; i < q; ++i) cl[i] = to_ldouble(c[i]);

  // log10 of the largest term, for extra working precision
  auto max_log10_term = [&](int j) -> double {
    long double lt = 0, best = 0;
    for (int k = 0; k < 1000000; ++k) {
      long double r = std::log(static_cast<long double>(x)) - std::log(static_cast<long double>(k + 1));
      for (int i = 0; i < p; ++i)
        if (i != j) r -= std::log(std::fabs(al[i] - al[j] - k - 1));
      for (int i = 0; i < q; ++i) {
        long double f = std::fabs(cl[i] - al[j] - k - 1);
        if (f == 0) return static_cast<double>(best / std::log(10.0L));
        r += std::log(f);
      }
      r += std::log(std::fabs(al[j] + k + 1 + L)) - std::log(std::fabs(al[j] + k + 1));
      lt += r;
      best = std::max(best, lt);
      if (k > 50 && r < 0) break;
    }
    return static_cast<double>(best / std::log(10.0L));
  };

  // Above the unit interval the result decays while the terms grow, so the
  // cancellation is about the square of the largest term.
  double extra = 0;
  for (int j = 0; j < p; ++j) extra = std::max(extra, max_log10_term(j));
  if (x > 1) extra *= 2;
  const mp_bitcnt_t prec = bits_for_digits(cfg.digits + extra + 10);
  DefaultPrecision guard(prec);
  std::vector<mpf_class> jet(nder + 1, mpf_class(0, prec));
  const mpf_class X(x, prec);
  // Truncation is measured against the largest partial sum, scaled down by
  // the expected cancellation.
  mpf_class tolm(cfg.tol * 1e-3, prec);
  for (int t = 0; t < static_cast<int>(std::ceil(extra)); ++t) tolm /= 10;

  for (int j = 0; j < p; ++j) {
    // Gamma(a*-a_j)/Gamma(c-a_j) (a_j+1)_L x^{a_j}
    mpf_class pref(poch(a[j] + 1, L), prec);
    for (int i = 0; i < p; ++i)
      if (i != j) pref *= gamma_mpf(a[i] - a[j], prec);
    for (int i = 0; i < q; ++i) {
      if (is_nonpos_integer(c[i] - a[j])) pref = 0;
      else pref /= gamma_mpf(c[i] - a[j], prec);
    }
    if (sgn(pref) == 0) continue;
    pref *= pow_mpf(x, a[j], prec);

    // t_{k+1}/t_k without the x
    auto ratio = [&](long k) {
      Rat r(-1, k + 1);
      for (int i = 0; i < p; ++i)
        if (i != j) r /= a[i] - a[j] - (k + 1);
      for (int i = 0; i < q; ++i) r *= c[i] - a[j] - (k + 1);
      r *= a[j] + k + 1 + L;
      r /= a[j] + k + 1;
      return mpf_class(r, prec);
    };

    // Past k_settle the term ratio is in its asymptotic regime.
    long k_settle = 10 + L + 2 * nder;
    for (auto v : al) k_settle = std::max<long>(k_settle, 10 + 2 * static_cast<long>(std::ceil(std::fabs(static_cast<double>(v)))));
    for (auto v : cl) k_settle = std::max<long>(k_settle, 10 + 2 * static_cast<long>(std::ceil(std::fabs(static_cast<double>(v)))));

    std::vector<mpf_class> sums(nder + 1, mpf_class(0, prec)), peak(nder + 1, mpf_class(0, prec));
    mpf_class term(1, prec);
    bool done = false;
    for (long k = 0; k < 5000000; ++k) {
      mpf_class e(Rat(a[j] + k), prec), ff(1, prec);
      for (int d = 0; d <= nder; ++d) {
        sums[d] += term * ff;
        if (mabs(sums[d]) > peak[d]) peak[d] = mabs(sums[d]);
        ff *= e - d;
      }
      if (sgn(term) == 0) {
        done = true;
        break;
      }
      mpf_class next(term * ratio(k) * X, prec);
      if (k > k_settle) {
        mpf_class rho(mabs(next) / mabs(term), prec);
        // derivative weights grow like k^nder
        mpf_class grow(1, prec);
        for (int d = 0; d < nder; ++d) grow *= mpf_class(k + 2 + nder, prec) / mpf_class(k + 1 - nder, prec);
        mpf_class rho_eff(rho * grow, prec);
        if (rho_eff < 1) {
          mpf_class fnext(1, prec), en(Rat(a[j] + k + 1), prec);
          for (int d = 0; d < nder; ++d) fnext *= mabs(en - d) + 1;
          mpf_class tail(mabs(next) * fnext / (1 - rho_eff), prec);
          bool small = true;
          for (int d = 0; d <= nder; ++d) small = small && tail <= tolm * peak[d];
          if (small) {
            done = true;
            break;
          }
        }
      }
      term = next;
    }
    if (!done) throw std::runtime_error("mellin_inverse_series: series did not converge");
    for (int d = 0; d <= nder; ++d) {
      jet[d] += sums[d] * pref;
      pref /= X;
    }
  }
  return jet;
}

// Linear ODE sum_k x^k (A_k x - B_k) D^k F = 0 for the inverse Mellin
// transform of Gamma(s+a)/Gamma(s+c) (1-s)_L. It comes from
// M(s+1) prod(s+c)(L-s) = -s prod(s+a) M(s) with theta = x d/dx, i.e.
// prod(c-theta)(L+theta)[xF] = theta prod(a-theta) F.
struct MellinOde {
  RatVec A, B;
  int order = 0;
};

inline MellinOde mellin_ode(const RatVec& a, const RatVec& c, int L) {
  Poly alpha{Rat(L), Rat(1)}, beta{Rat(0), Rat(1)};
  for (const auto& ci : c) alpha = alpha * Poly{ci, Rat(-1)};
  for (const auto& ai : a) beta = beta * Poly{ai, Rat(-1)};
  const int R = std::max(alpha.degree(), beta.degree());
  // Stirling numbers of the second kind S(m,k), m,k <= R+1
  std::vector<std::vector<Rat>> S(R + 2, std::vector<Rat>(R + 2, Rat(0)));
  S[0][0] = 1;
  for (int m = 1; m <= R + 1; ++m)
    for (int k = 1; k <= m; ++k) S[m][k] = S[m - 1][k - 1] + Rat(k) * S[m - 1][k];
  MellinOde ode;
  ode.order = R;
  ode.A.assign(R + 1, Rat(0));
  ode.B.assign(R + 1, Rat(0));
  for (int k = 0; k <= R; ++k) {
    for (int m = 0; m <= alpha.degree(); ++m) ode.A[k] += alpha[m] * (S[m][k] + Rat(k + 1) * S[m][k + 1]);
    for (int m = 0; m <= beta.degree(); ++m) ode.B[k] += beta[m] * S[m][k];
  }
  return ode;
}

// Taylor-series continuation along (x0, target] with steps of half the
// distance to the singular point 1. jet holds F, F', ..., F^(R-1) at x0.
inline std::vector<mpf_class> ode_continue(const MellinOde& ode, std::vector<mpf_class> jet, double x0d, double target,
                                           int digits) {
  const int R = ode.order;
  const mp_bitcnt_t prec = jet[0].get_prec();
  DefaultPrecision guard(prec);
  const double bits = 3.33 * digits + 40;
  std::vector<mpf_class> A, B;
  for (int k = 0; k <= R; ++k) {
    A.emplace_back(ode.A[k], prec);
    B.emplace_back(ode.B[k], prec);
  }
  auto falling = [&](long n, int k) {
    mpf_class r(1, prec);
    for (int t = 0; t < k; ++t) r *= n - t;
    return r;
  };
  mpf_class x0(x0d, prec);
  const mpf_class tgt(target, prec);
  while (x0 < tgt) {
    mpf_class radius(1 - x0, prec);
    if (x0 < radius) radius = x0;
    mpf_class h(tgt - x0, prec);
    mpf_class half(radius / 2, prec);
    if (h > half) h = half;
    const double step_ratio = mpf_class(h / radius, prec).get_d();
    const int nterms = static_cast<int>(bits / -std::log2(step_ratio)) + 10 * R + 10;
    // pi[k][i]: coefficient of h^i in x^k (A_k x - B_k) at x = x0 + h
    std::vector<std::vector<mpf_class>> pi(R + 1);
    for (int k = 0; k <= R; ++k) {
      std::vector<mpf_class> pw(k + 1, mpf_class(0, prec));  // (x0+h)^k
      mpf_class binom(1, prec);
      for (int i = 0; i <= k; ++i) {
        mpf_class xp(1, prec);
        for (int t = 0; t < k - i; ++t) xp *= x0;
        pw[i] = binom * xp;
        binom = binom * (k - i) / (i + 1);
      }
      pi[k].assign(k + 2, mpf_class(0, prec));
      mpf_class c0(A[k] * x0 - B[k], prec);
      for (int i = 0; i <= k; ++i) {
        pi[k][i] += pw[i] * c0;
        pi[k][i + 1] += pw[i] * A[k];
      }
    }
    if (sgn(pi[R][0]) == 0) throw std::runtime_error("ode_continue: stepped onto a singular point");
    std::vector<mpf_class> f(nterms + R + 1, mpf_class(0, prec));
    mpf_class fact(1, prec);
    for (int d = 0; d < R; ++d) {
      if (d > 0) fact *= d;
      f[d] = jet[d] / fact;
    }
    for (int m = 0; m + R <= nterms + R; ++m) {
      mpf_class rest(0, prec);
      for (int k = 0; k <= R; ++k)
        for (int i = 0; i < static_cast<int>(pi[k].size()) && i <= m; ++i) {
          if (k == R && i == 0) continue;
          const long idx = m - i + k;
          rest += pi[k][i] * f[idx] * falling(idx, k);
        }
      f[m + R] = -rest / (pi[R][0] * falling(m + R, R));
    }
    std::vector<mpf_class> next(R, mpf_class(0, prec));
    for (int d = 0; d < R; ++d) {
      mpf_class hp(1, prec);
      for (int n = d; n < static_cast<int>(f.size()); ++n) {
        next[d] += f[n] * falling(n, d) * hp;
        hp *= h;
      }
    }
    jet = std::move(next);
    x0 += h;
  }
  return jet;
}

}  // namespace detail

// Inverse Mellin transform of Gamma(s+a)/Gamma(s+c) (1-s)_L at each x, by
// the residue series at s = -a_j - k. Needs a_i - a_j non-integral; poles
// cancelled by 1/Gamma(s+c) drop out on their own. Works for dim c < dim a
// on x > 0 and dim c == dim a on 0 < x < 1. In the latter case points above
// 0.6 are reached from x = 1/2 by Taylor continuation of the ODE above,
// walking through the sorted points once.
inline std::vector<double> mellin_inverse_values(const RatVec& a, const RatVec& c, int L, const std::vector<double>& xs,
                                                 const EvalConfig& cfg) {
  cfg.validate();
  const int p = static_cast<int>(a.size());
  const int q = static_cast<int>(c.size());
  if (p == 0) throw std::invalid_argument("mellin_inverse_series: need at least one a parameter");
  if (q > p) throw std::invalid_argument("mellin_inverse_series: more denominator than numerator Gammas");
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      if (i != j && is_integer(a[i] - a[j]))
        throw std::domain_error("mellin_inverse_series: a_i - a_j is an integer (logarithmic case)");
  for (double x : xs) {
    if (!(x > 0)) throw std::domain_error("mellin_inverse_series: x must be positive");
    if (p == q && !(x < 1)) throw std::domain_error("mellin_inverse_series: x must lie in (0,1) when p == q");
  }
  constexpr double switch_point = 0.6;
  std::vector<double> out(xs.size());
  std::vector<size_t> far;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (p == q && xs[i] > switch_point) far.push_back(i);
    else out[i] = detail::residue_series_jet(a, c, L, xs[i], 0, cfg)[0].get_d();
  }
  if (!far.empty()) {
    std::sort(far.begin(), far.end(), [&](size_t u, size_t v) { return xs[u] < xs[v]; });
    auto ode = detail::mellin_ode(a, c, L);
    auto jet = detail::residue_series_jet(a, c, L, 0.5, ode.order - 1, cfg);
    double at = 0.5;
    for (size_t i : far) {
      jet = detail::ode_continue(ode, std::move(jet), at, xs[i], cfg.digits);
      at = xs[i];
      out[i] = jet[0].get_d();
    }
  }
  return out;
}

inline double mellin_inverse_series(const RatVec& a, const RatVec& c, int L, double x, const EvalConfig& cfg) {
  return mellin_inverse_values(a, c, L, {x}, cfg)[0];
}

inline RatVec type1_gamma_denominator(const ParamSystem& sys, const MultiIndex& n) {
  RatVec c(sys.q());
  for (int i = 0; i < sys.q(); ++i) c[i] = sys.b[i] + n.head[i];
  return c;
}

// Type I function sum_j A_j w_j in absolute normalization, Mellin transform
// Gamma(s+a)/Gamma(s+b+n) (1-s)_{N-1}.
inline std::vector<double> eval_type1_function(const ParamSystem& sys, const MultiIndex& n,
                                               const std::vector<double>& xs, const EvalConfig& cfg = {}) {
  require_valid(sys, n);
  if (sys.setting() == Setting::Bessel)
    throw std::invalid_argument("eval_type1_function: the Bessel setting has no real type I function");
  for (int i = 0; i < sys.p(); ++i)
    for (int j = 0; j < sys.q(); ++j)
      if (is_nonpos_integer(sys.b[j] - sys.a[i] + n.head[j]))
        throw std::domain_error("eval_type1_function: b_j - a_i + n_j is a nonpositive integer");
  return mellin_inverse_values(sys.a, type1_gamma_denominator(sys, n), n.size() - 1, xs, cfg);
}

inline double eval_type1_function(const ParamSystem& sys, const MultiIndex& n, double x, const EvalConfig& cfg = {}) {
  return eval_type1_function(sys, n, std::vector<double>{x}, cfg)[0];
}

// Gamma(a+1)/Gamma(c+1), long double.
inline long double gamma_ratio(const RatVec& a, const RatVec& c) {
  long double lg = 0;
  int sign = 1;
  for (const auto& ai : a) {
    long double v = to_ldouble(ai) + 1;
    lg += std::lgamma(v);
    if (std::tgamma(v) < 0) sign = -sign;
  }
  for (const auto& ci : c) {
    long double v = to_ldouble(ci) + 1;
    lg -= std::lgamma(v);
    if (std::tgamma(v) < 0) sign = -sign;
  }
  return sign * std::exp(lg);
}

// ---------------------------------------------------------------- quadrature

struct QuadNode {
  double x;
  double w;
};

namespace detail {

template <int M>
inline void gl_panel(long double lo, long double hi, std::vector<std::pair<long double, long double>>& out) {
  using G = boost::math::quadrature::gauss<long double, M>;
  const auto& xs = G::abscissa();
  const auto& ws = G::weights();
  long double mid = (lo + hi) / 2, half = (hi - lo) / 2;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] == 0) {
      out.push_back({mid, half * ws[i]});
      continue;
    }
    out.push_back({mid - half * xs[i], half * ws[i]});
    out.push_back({mid + half * xs[i], half * ws[i]});
  }
}

inline void gl_panel(long double lo, long double hi, int nodes, std::vector<std::pair<long double, long double>>& out) {
  if (nodes == 40) gl_panel<40>(lo, hi, out);
  else gl_panel<20>(lo, hi, out);
}

}  // namespace detail

// Nodes on (0,1) via x = sin^2(theta), graded geometrically toward both
// ends. Near 0 the integrand may behave like x^{e}, e > -1; the grading runs
// until the neglected piece is below 1e-16. Nodes with 1-x < cut are dropped.
inline std::vector<QuadNode> unit_interval_rule(double min_exponent, const EvalConfig& cfg, double cut = 1e-12) {
  cfg.validate();
  if (!(min_exponent > -1)) throw std::invalid_argument("unit_interval_rule: endpoint exponent must exceed -1");
  const long double half_pi = std::acos(-1.0L) / 2;
  const long double mid = half_pi / 2;
  // theta^(2e+1) near 0: neglected part ~ theta_L^(2e+2)/(2e+2).
  const long double pw = 2 * min_exponent + 2;
  const long double theta_small = std::pow(1e-17L * pw, 1 / pw);
  std::vector<std::pair<long double, long double>> th;
  long double hi = mid;
  while (hi > theta_small) {
    long double lo = hi * cfg.grading;
    detail::gl_panel(lo, hi, cfg.panel_nodes, th);
    hi = lo;
  }
  detail::gl_panel(0, hi, cfg.panel_nodes, th);
  long double gap = half_pi - mid;
  while (gap > 1e-9L) {
    long double ngap = gap * cfg.grading;
    detail::gl_panel(half_pi - gap, half_pi - ngap, cfg.panel_nodes, th);
    gap = ngap;
  }
  detail::gl_panel(half_pi - gap, half_pi, cfg.panel_nodes, th);
  std::vector<QuadNode> out;
  for (auto [t, w] : th) {
    long double s = std::sin(t), c = std::cos(t);
    double x = static_cast<double>(s * s);
    if (static_cast<double>(c * c) < cut || x <= 0) continue;
    out.push_back({x, static_cast<double>(2 * s * c * w)});
  }
  return out;
}

// Nodes on (0, X): graded toward 0 on (0, 1), uniform panels beyond.
inline std::vector<QuadNode> half_line_rule(double min_exponent, double X, const EvalConfig& cfg) {
  std::vector<QuadNode> out;
  const long double half_pi = std::acos(-1.0L) / 2;
  const long double pw = 2 * min_exponent + 2;
  if (!(pw > 0)) throw std::invalid_argument("half_line_rule: endpoint exponent must exceed -1");
  const long double theta_small = std::pow(1e-17L * pw, 1 / pw);
  std::vector<std::pair<long double, long double>> th;
  long double hi = half_pi / 2;
  while (hi > theta_small) {
    long double lo = hi * cfg.grading;
    detail::gl_panel(lo, hi, cfg.panel_nodes, th);
    hi = lo;
  }
  detail::gl_panel(0, hi, cfg.panel_nodes, th);
  for (auto [t, w] : th) {
    long double s = std::sin(t), c = std::cos(t);
    out.push_back({static_cast<double>(s * s), static_cast<double>(2 * s * c * w)});
  }
  std::vector<std::pair<long double, long double>> xs;
  const long double start = 0.5L;
  const int panels = std::max(4, static_cast<int>(std::ceil(X / 2)));
  const long double h = (X - start) / panels;
  for (int i = 0; i < panels; ++i) detail::gl_panel(start + i * h, start + (i + 1) * h, cfg.panel_nodes, xs);
  for (auto [x, w] : xs) out.push_back({static_cast<double>(x), static_cast<double>(w)});
  return out;
}

// Quadrature moments int F x^{s-1} dx for every s in ss, sharing evaluations.
inline std::vector<double> type1_numeric_moments(const ParamSystem& sys, const MultiIndex& n, const std::vector<int>& ss,
                                                 const EvalConfig& cfg = {}) {
  double amin = 1e300;
  for (const auto& ai : sys.a) amin = std::min(amin, to_double(ai));
  int smin = *std::min_element(ss.begin(), ss.end());
  if (smin < 1) throw std::invalid_argument("type1_numeric_moments: s must be >= 1");
  std::vector<QuadNode> rule;
  if (sys.setting() == Setting::Jacobi) {
    rule = unit_interval_rule(amin + smin - 1, cfg);
  } else if (sys.setting() == Setting::Laguerre) {
    // Decay is roughly x^e exp(-(p-q) x^{1/(p-q)}); cut where that is below 1e-18.
    const int d = sys.p() - sys.q();
    double amax = -1;
    for (const auto& ai : sys.a) amax = std::max(amax, to_double(ai));
    const double e = amax + n.size() + *std::max_element(ss.begin(), ss.end()) + 1;
    double X = 1;
    while (e * std::log(X) - d * std::pow(X, 1.0 / d) > -41.5) X *= 1.1;
    rule = half_line_rule(amin + smin - 1, X, cfg);
  } else {
    throw std::invalid_argument("type1_numeric_moments: no quadrature in the Bessel setting");
  }
  std::vector<double> xs;
  for (const auto& nd : rule) xs.push_back(nd.x);
  auto fs = eval_type1_function(sys, n, xs, cfg);
  std::vector<long double> acc(ss.size(), 0);
  for (size_t u = 0; u < rule.size(); ++u)
    for (size_t i = 0; i < ss.size(); ++i)
      acc[i] += rule[u].w * fs[u] * std::pow(static_cast<long double>(rule[u].x), ss[i] - 1);
  return std::vector<double>(acc.begin(), acc.end());
}

// Exact moment in the absolute normalization of eval_type1_function.
inline double type1_absolute_moment(const ParamSystem& sys, const MultiIndex& n, long s) {
  return static_cast<double>(gamma_ratio(sys.a, type1_gamma_denominator(sys, n)) *
                             to_ldouble(type1_moment_formula(sys, n, s)));
}

inline Report quad_check_type1_moment(const ParamSystem& sys, const MultiIndex& n, const std::vector<int>& ss,
                                      double tol, const EvalConfig& cfg = {}) {
  Report rep;
  rep.subject = "quadrature type I " + n.str() + " " + sys.str();
  auto num = type1_numeric_moments(sys, n, ss, cfg);
  for (size_t i = 0; i < ss.size(); ++i) {
    double exact = type1_absolute_moment(sys, n, ss[i]);
    double err = std::fabs(num[i] - exact);
    rep.add("s=" + std::to_string(ss[i]), err <= tol, format_double(err));
  }
  return rep;
}

// ------------------------------------------------------------------- kernel

// Biorthogonal system behind the kernel. With n = canonical_stepline(p, n_total)
// and c = b + (head of n), P_k(x) = sum_i (-k)_i (c+1)_i/((a+1)_i i!) x^i and
// Q_l has Mellin transform Gamma(s+a)/Gamma(s+c) (1-s)_l.
struct KernelSystem {
  RatVec a;
  RatVec c;
  int n_total = 0;

  Poly P(int k) const {
    RatVec co(k + 1);
    const RatVec a1 = shifted(a, 1), c1 = shifted(c, 1);
    for (int i = 0; i <= k; ++i) co[i] = poch(Rat(-k), i) * poch(c1, i) / (poch(a1, i) * factorial(i));
    return Poly(co);
  }
  // int P_k Q_k, split into an exact rational and Gamma(a+1)/Gamma(c+1).
  Rat norm_rational(int k) const {
    return P(k)[k] * poch(shifted(a, 1), k) / poch(shifted(c, 1), k) * poch(Rat(-k), k);
  }
  double norm(int k) const { return static_cast<double>(gamma_ratio(a, c) * to_ldouble(norm_rational(k))); }
  double Q(int l, double y, const EvalConfig& cfg) const { return mellin_inverse_series(a, c, l, y, cfg); }
  std::vector<double> Q(int l, const std::vector<double>& ys, const EvalConfig& cfg) const {
    return mellin_inverse_values(a, c, l, ys, cfg);
  }
};

inline KernelSystem kernel_system(const ParamSystem& sys, int n_total) {
  if (n_total < 1) throw std::invalid_argument("eval_kernel: n_total must be positive");
  if (sys.setting() == Setting::Bessel) throw std::invalid_argument("eval_kernel: needs p >= q");
  for (int i = 0; i < sys.p(); ++i)
    for (int j = 0; j < sys.p(); ++j)
      if (i != j && is_integer(sys.a[i] - sys.a[j]))
        throw std::invalid_argument("eval_kernel: a_i - a_j integral; Q_k needs logarithmic terms (use r = 1)");
  auto nv = canonical_stepline(sys.p(), n_total);
  KernelSystem ks{sys.a, RatVec(sys.q()), n_total};
  for (int j = 0; j < sys.q(); ++j) ks.c[j] = sys.b[j] + nv[j];
  for (int j = 0; j < sys.q(); ++j)
    for (int i = 0; i < sys.p(); ++i)
      if (is_nonpos_integer(ks.c[j] - sys.a[i]))
        throw std::invalid_argument("eval_kernel: invalid ensemble parameters");
  return ks;
}

// K_n(x,y) = sum_{k<n} P_k(x) Q_k(y) / int P_k Q_k.
inline double eval_kernel(const ParamSystem& sys, int n_total, double x, double y, const EvalConfig& cfg = {}) {
  auto ks = kernel_system(sys, n_total);
  long double acc = 0;
  for (int k = 0; k < n_total; ++k)
    acc += static_cast<long double>(eval_type2(ks.P(k), x).value) * ks.Q(k, y, cfg) / ks.norm(k);
  return static_cast<double>(acc);
}

}  // namespace hypmop
