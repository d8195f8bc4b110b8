#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "hypmop/mop.hpp"
#include "hypmop/report.hpp"

namespace hypmop {

// Which family of approximated series:
//   Generic:   f*_j(z) = sum_k (a+1)_k / ((b+1)_k prod_{i<=j} (b_i+k+1)) z^{-k-1}
//   Confluent: f*_j(z) = sum_k 1 / ((k+1)^j k!^{q-p}) z^{-k-1}        (a = 0, b = 0)
struct HPSpec {
  enum class Variant { Generic, Confluent };
  Variant variant = Variant::Generic;
  ParamSystem sys;
  int p = 0, q = 1;

  static HPSpec generic(ParamSystem s) {
    HPSpec h;
    h.variant = Variant::Generic;
    h.p = s.p();
    h.q = s.q();
    h.sys = std::move(s);
    return h;
  }
  static HPSpec confluent(int p, int q) {
    if (p < 0 || q <= p) throw std::invalid_argument("confluent Hermite-Pade needs 0 <= p < q");
    HPSpec h;
    h.variant = Variant::Confluent;
    h.p = p;
    h.q = q;
    h.sys = ParamSystem(RatVec(p, Rat(0)), RatVec(q, Rat(0)));
    return h;
  }
  std::string str() const {
    return variant == Variant::Generic ? "generic " + sys.str()
                                       : "confluent p=" + std::to_string(p) + " q=" + std::to_string(q);
  }
};

struct HPApproximant {
  HPSpec spec;
  MultiIndex n;
  std::vector<Poly> A;      // type I polynomials for f_j (generic only)
  std::vector<Poly> Astar;  // for f*_j
  Poly B;                   // generic: relative to Gamma(a+1)/Gamma(b+1)
  RatMatrix lambda, c;      // f* = lambda f, f = c f* (generic only)
  Report report;

  int size() const { return n.size(); }
};

class TailBoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Coefficient of z^{-k-1} in f*_j (j 1-based).
inline Rat fstar_coeff(const HPSpec& s, int j, long k) {
  if (j < 1 || j > s.q) throw std::invalid_argument("fstar_coeff: j out of range");
  if (s.variant == HPSpec::Variant::Confluent) {
    Rat d = factorial(k);
    Rat den = 1;
    for (int i = 0; i < s.q - s.p; ++i) den *= d;
    for (int i = 0; i < j; ++i) den *= k + 1;
    return Rat(1) / den;
  }
  Rat v = poch(shifted(s.sys.a, 1), k) / poch(shifted(s.sys.b, 1), k);
  for (int i = 0; i < j; ++i) v /= s.sys.b[i] + k + 1;
  return v;
}

// Coefficient of z^{-k-1} in the error sum_j A*_j f*_j - B, from the Mellin
// transform of the type I function alone.
inline Rat error_coeff(const HPSpec& s, const MultiIndex& n, long k) {
  if (s.variant == HPSpec::Variant::Generic)
    return type1_moment_formula(s.sys, n, k + 1) * type1_scale(s.sys, n);
  const int nn = n.head.at(0);
  const int N = n.size();
  Rat kf = factorial(k);
  Rat den = 1;
  for (int i = 0; i < s.q - s.p; ++i) den *= kf;
  Rat pn = poch(Rat(k + 1), nn);
  for (int i = 0; i < s.q; ++i) den *= pn;
  return poch(Rat(-k), N - 1) / den;
}

namespace detail {

inline double log_abs(const Rat& r) {
  if (sgn(r) == 0) return -INFINITY;
  long en, ed;
  const double mn = mpz_get_d_2exp(&en, r.get_num_mpz_t());
  const double md = mpz_get_d_2exp(&ed, r.get_den_mpz_t());
  return std::log(std::fabs(mn)) - std::log(md) + (en - ed) * std::log(2.0);
}

inline double log_abs(const mpf_class& x) {
  if (sgn(x) == 0) return -INFINITY;
  long e;
  const double m = mpf_get_d_2exp(&e, x.get_mpf_t());
  return std::log(std::fabs(m)) + e * std::log(2.0);
}

inline int bits_for(int digits) { return static_cast<int>(digits * 3.33) + 64; }

// Bound on |t_{m+1}/t_m| valid for every m >= k, with w = 1/|z|.
inline double fstar_ratio_bound(const HPSpec& s, long k, double w) {
  double r = w;
  if (s.variant == HPSpec::Variant::Confluent) return r / std::pow(k + 1.0, s.q - s.p);
  const int p = s.p, q = s.q;
  for (int i = 0; i < std::min(p, q); ++i)
    r *= std::max(1.0, (s.sys.a[i].get_d() + k + 1) / (s.sys.b[i].get_d() + k + 1));
  for (int i = p; i < q; ++i) r /= s.sys.b[i].get_d() + k + 1;
  return r;
}

inline double error_ratio_bound(const HPSpec& s, const MultiIndex& n, long k, double w) {
  const int N = n.size();
  return fstar_ratio_bound(s, k, w) * (k + 1.0) / (k + 2.0 - N);
}

// sum_{k >= k0} coeff(k) z^{-k-1} with relative error below 10^-digits. The
// partial sum is exact; the tail is bounded geometrically by ratio(k).
template <class Coeff, class Ratio>
mpf_class sum_series(Coeff coeff, Ratio ratio, long k0, const Rat& z, int digits, const char* what) {
  if (sgn(z) == 0) throw std::invalid_argument(std::string(what) + ": z must be nonzero");
  const Rat w = Rat(1) / z;
  const double wd = std::fabs(w.get_d());
  const double log_tol = -(digits + 2) * std::log(10.0);
  if (ratio(1000000000L, wd) >= 1)
    throw TailBoundError(std::string(what) + ": series does not converge at z = " + to_string(z));
  Rat sum = 0;
  Rat wp = 1;
  for (long i = 0; i <= k0; ++i) wp *= w;
  for (long k = k0; k < k0 + 20000; ++k) {
    const Rat t = coeff(k) * wp;
    sum += t;
    wp *= w;
    const double rho = ratio(k, wd) * 1.0001;
    if (rho < 1 && sgn(t) != 0 && sgn(sum) != 0) {
      const double tail = log_abs(t) + std::log(rho / (1 - rho));
      if (tail - log_abs(sum) < log_tol) return mpf_class(sum, bits_for(digits));
    }
  }
  throw TailBoundError(std::string(what) + ": no geometric tail bound (series does not converge fast enough)");
}

inline Poly times_z(const Poly& p) { return p * Poly::monomial(1); }

// Polynomial part of sum_j A*_j(z) f*_j(z).
inline Poly polynomial_part(const HPSpec& s, const std::vector<Poly>& Astar) {
  Poly out;
  for (int j = 0; j < s.q; ++j)
    for (int i = 1; i <= Astar[j].degree(); ++i)
      for (int k = 0; k < i; ++k) out += Poly::monomial(i - k - 1, Astar[j][i] * fstar_coeff(s, j + 1, k));
  return out;
}

// Coefficients of z^{-1}, ..., z^{-K} in sum_j A*_j f*_j.
inline RatVec product_error_coeffs(const HPSpec& s, const std::vector<Poly>& Astar, int K) {
  RatVec e(K, Rat(0));
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < s.q; ++j)
      for (int i = 0; i <= Astar[j].degree(); ++i) e[k] += Astar[j][i] * fstar_coeff(s, j + 1, k + i);
  return e;
}

inline void common_checks(HPApproximant& h) {
  const auto& s = h.spec;
  const int N = h.size();
  const int extra = s.q + 2;
  auto e = product_error_coeffs(s, h.Astar, N - 1 + extra);
  Rat worst = 0;
  for (int k = 0; k < N - 1; ++k)
    if (abs(e[k]) > abs(worst)) worst = e[k];
  h.report.add_exact_zero("order conditions z^-1..z^-" + std::to_string(N - 1), worst);
  Rat diff = 0;
  for (int k = N - 1; k < N - 1 + extra; ++k) {
    Rat d = e[k] - error_coeff(s, h.n, k);
    if (abs(d) > abs(diff)) diff = d;
  }
  h.report.add_exact_zero("error series matches Mellin values", diff);
  Rat bdiff = 0;
  Poly pp = polynomial_part(s, h.Astar) - h.B;
  for (const auto& c : pp.coeffs())
    if (abs(c) > abs(bdiff)) bdiff = c;
  h.report.add_exact_zero("B is the polynomial part", bdiff);
  for (int k = 0; k < s.q; ++k) {
    int mx = 0;
    for (int j = k; j < s.q; ++j) mx = std::max(mx, h.n.head[j]);
    h.report.add("deg A*_" + std::to_string(k + 1) + " <= " + std::to_string(mx - 1), h.Astar[k].degree() <= mx - 1,
                 std::to_string(h.Astar[k].degree()));
  }
}

}  // namespace detail

// lambda_{j,k} = 1/prod_{i<=j, i!=k} (b_i - b_k) and c_{j,k} = prod_{i<k} (b_i - b_j), k <= j.
inline std::pair<RatMatrix, RatMatrix> hp_conversion(const RatVec& b) {
  const int q = static_cast<int>(b.size());
  RatMatrix lam(q, RatVec(q, Rat(0))), c(q, RatVec(q, Rat(0)));
  for (int j = 0; j < q; ++j)
    for (int k = 0; k <= j; ++k) {
      Rat d = 1;
      for (int i = 0; i <= j; ++i)
        if (i != k) d *= b[i] - b[k];
      if (sgn(d) == 0) throw std::invalid_argument("hp_conversion: b entries must be pairwise distinct");
      lam[j][k] = Rat(1) / d;
      Rat cc = 1;
      for (int i = 0; i < k; ++i) cc *= b[i] - b[j];
      c[j][k] = cc;
    }
  return {lam, c};
}

// B from the explicit double sum over the partial-fraction coefficients, in the
// relative normalization. Empty when a denominator vanishes.
inline std::optional<Poly> hp_generic_B_explicit(const ParamSystem& sys, const MultiIndex& n) {
  const auto& a = sys.a;
  const auto& b = sys.b;
  Poly B;
  try {
    for (int J = 0; J < sys.q(); ++J)
      for (int K = 0; K < n.head[J]; ++K) {
        const Rat P = type1_pcoef(sys, n.head, J, K);
        for (int l = 0; l < K; ++l) {
          Rat t = 1;
          for (const auto& bi : b) t *= poch(bi - b[J] - K, l + 1);
          for (const auto& ai : a) t = detail::checked_div(t, poch(ai - b[J] - K, l + 1), "B denominator");
          t = detail::checked_div(t, K - l + b[J], "B denominator");
          B += Poly::monomial(l, P * t);
        }
      }
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
  return B;
}

inline HPApproximant hp_generic(const ParamSystem& sys, const MultiIndex& n) {
  if (sys.p() >= sys.q()) throw std::invalid_argument("hp_generic: needs p < q");
  const auto h = sys.hypotheses();
  if (!h.b_distinct) throw std::invalid_argument("hp_generic: b entries must be pairwise distinct");
  if (!h.closed_form_type1()) throw std::invalid_argument("hp_generic: type I closed-form hypotheses fail for " + sys.str());
  HPApproximant out;
  out.spec = HPSpec::generic(sys);
  out.n = n;
  out.A = type1_construct(sys, n, false).polys;
  std::tie(out.lambda, out.c) = hp_conversion(sys.b);
  const int q = sys.q();
  out.Astar.assign(q, Poly());
  for (int k = 0; k < q; ++k)
    for (int j = k; j < q; ++j) out.Astar[k] += out.A[j] * out.c[j][k];
  out.B = detail::polynomial_part(out.spec, out.Astar);
  out.report.subject = "hp_generic " + sys.str() + " n=" + n.str();

  Rat rt = 0;
  for (int i = 0; i < q; ++i)
    for (int k = 0; k < q; ++k) {
      Rat s = 0;
      for (int j = 0; j < q; ++j) s += out.lambda[i][j] * out.c[j][k];
      Rat d = s - (i == k ? 1 : 0);
      if (abs(d) > abs(rt)) rt = d;
    }
  out.report.add_exact_zero("lambda c = I", rt);
  if (auto Bx = hp_generic_B_explicit(sys, n)) {
    Rat d = 0;
    for (const auto& cc : (*Bx - out.B).coeffs())
      if (abs(cc) > abs(d)) d = cc;
    out.report.add_exact_zero("explicit B sum", d);
  }
  detail::common_checks(out);
  return out;
}

namespace detail {

// sum_j coef_j(z) f*_j(z) + poly(z); coef[0] belongs to f*_1.
struct IExpr {
  std::vector<Poly> coef;
  Poly poly;
};

class ConfluentReducer {
 public:
  ConfluentReducer(int p, int q) : p_(p), q_(q) {}

  // I^{[t]}_{J,L}(z) = sum_k 1/(k!^{q-p} (k+1)^t (k+L+1)^J) z^{-k-1}
  const IExpr& get(int t, int J, int L) {
    auto key = std::make_tuple(t, J, L);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    IExpr e;
    e.coef.assign(q_, Poly());
    if (J == 0 || L == 0) {
      const int j = J == 0 ? t : t + J;
      if (j < 1 || j > q_) throw std::logic_error("confluent reduction left the f*_1..f*_q span");
      e.coef[j - 1] = Poly::constant(1);
    } else if (t < q_ - p_) {
      IExpr x = get(t + 1, J - 1, L);
      const IExpr& y = get(t + 1, J, L);
      for (int j = 0; j < q_; ++j) x.coef[j] -= y.coef[j] * Rat(L);
      x.poly -= y.poly * Rat(L);
      e = std::move(x);
    } else {
      const IExpr& y = get(0, J, L - 1);
      for (int j = 0; j < q_; ++j) e.coef[j] = times_z(y.coef[j]);
      Rat LJ = 1;
      for (int i = 0; i < J; ++i) LJ *= L;
      e.poly = times_z(y.poly) - Poly::constant(Rat(1) / LJ);
    }
    return memo_.emplace(key, std::move(e)).first->second;
  }

 private:
  int p_, q_;
  std::map<std::tuple<int, int, int>, IExpr> memo_;
};

}  // namespace detail

// Coefficients P*_j[l] of (1-s)_{qn-1}/(s)_n^q = sum_j sum_l P*_j[l]/(s+l)^j.
inline std::vector<RatVec> confluent_pfd(int q, int n) {
  if (q < 1 || n < 1) throw std::invalid_argument("confluent_pfd: q, n must be >= 1");
  Poly num = Poly::constant(1);
  for (int i = 0; i < q * n - 1; ++i) num = num * Poly{Rat(1 + i), Rat(-1)};
  std::vector<Pole> poles;
  for (int l = 0; l < n; ++l) poles.push_back({Rat(-l), q});
  auto d = partial_fractions(num, poles);
  std::vector<RatVec> P(q, RatVec(n, Rat(0)));
  for (int j = 1; j <= q; ++j)
    for (int l = 0; l < n; ++l) P[j - 1][l] = d.coefficient(l, j);
  return P;
}

inline HPApproximant hp_confluent(int p, int q, int n) {
  if (n < 1) throw std::invalid_argument("hp_confluent: n must be >= 1");
  HPApproximant out;
  out.spec = HPSpec::confluent(p, q);
  out.n = MultiIndex(std::vector<int>(q, n));
  out.report.subject = "hp_confluent p=" + std::to_string(p) + " q=" + std::to_string(q) + " n=" + std::to_string(n);
  auto P = confluent_pfd(q, n);
  detail::ConfluentReducer red(p, q);
  out.Astar.assign(q, Poly());
  Poly poly;
  for (int J = 1; J <= q; ++J)
    for (int l = 0; l < n; ++l) {
      if (sgn(P[J - 1][l]) == 0) continue;
      const auto& e = red.get(0, J, l);
      for (int j = 0; j < q; ++j) out.Astar[j] += e.coef[j] * P[J - 1][l];
      poly += e.poly * P[J - 1][l];
    }
  out.B = -poly;
  detail::common_checks(out);
  return out;
}

// Approximant for the diagonal index (n, ..., n).
inline HPApproximant hp_build(const HPSpec& s, int n) {
  if (s.variant == HPSpec::Variant::Confluent) return hp_confluent(s.p, s.q, n);
  return hp_generic(s.sys, MultiIndex(std::vector<int>(s.q, n)));
}

// ------------------------------------------------------------- evaluation

inline mpf_class f_series_eval(const HPSpec& s, int j, const Rat& z, int digits = 40) {
  if (s.p > s.q) throw std::invalid_argument("f_series_eval: p > q diverges");
  return detail::sum_series([&](long k) { return fstar_coeff(s, j, k); },
                            [&](long k, double w) { return detail::fstar_ratio_bound(s, k, w); }, 0, z, digits,
                            "f_series_eval");
}

// Error sum_j A*_j(z) f*_j(z) - B(z) summed from its first nonvanishing coefficient.
inline mpf_class hp_error_eval(const HPApproximant& h, const Rat& z, int digits = 40) {
  const auto& s = h.spec;
  return detail::sum_series([&](long k) { return error_coeff(s, h.n, k); },
                            [&](long k, double w) { return detail::error_ratio_bound(s, h.n, k, w); },
                            h.size() - 1, z, digits, "hp_error_eval");
}

// The same quantity by forming sum_j A*_j(z) f*_j(z) - B(z) directly. The
// working precision is raised by the cancellation, estimated from `expected`.
inline mpf_class hp_error_direct(const HPApproximant& h, const Rat& z, int digits, const mpf_class& expected) {
  const auto& s = h.spec;
  double big = detail::log_abs(h.B.eval(z));
  for (const auto& a : h.Astar) big = std::max(big, detail::log_abs(a.eval(z)) + 2.0);
  const double lost = std::max(0.0, (big - detail::log_abs(expected)) / std::log(10.0));
  const int work = digits + static_cast<int>(lost) + 10;
  const int bits = detail::bits_for(work);
  mpf_class acc(0, bits);
  for (int j = 0; j < s.q; ++j) {
    if (h.Astar[j].is_zero()) continue;
    acc += mpf_class(h.Astar[j].eval(z), bits) * f_series_eval(s, j + 1, z, work);
  }
  acc -= mpf_class(h.B.eval(z), bits);
  return acc;
}

struct DenominatorReport {
  Int D = 1;                  // least common denominator of A*_j(z) and B(z)
  std::optional<Int> bound;   // lcm(1..n-1)^{q-p} den(z)^{n-1}, confluent only
  bool divides_bound = true;
  std::vector<Rat> astar_values;
  Rat b_value;
  Report report;
};

inline DenominatorReport denominator_clear(const HPApproximant& h, const Rat& z) {
  DenominatorReport out;
  for (const auto& a : h.Astar) out.astar_values.push_back(a.eval(z));
  out.b_value = h.B.eval(z);
  auto vals = out.astar_values;
  vals.push_back(out.b_value);
  out.D = lcm_of_denominators(vals);
  Rat worst = 0;
  for (const auto& v : vals) {
    Rat t = v * Rat(out.D);
    if (!is_integer(t)) worst = t;
  }
  out.report.subject = "denominator_clear " + h.spec.str() + " n=" + h.n.str() + " z=" + to_string(z);
  out.report.add("D_n A*_j(z), D_n B(z) integral", sgn(worst) == 0, to_string(worst));
  if (h.spec.variant == HPSpec::Variant::Confluent) {
    const int n = h.n.head[0];
    Int l = n >= 2 ? lcm_range(n - 1) : Int(1);
    Int bound = 1;
    for (int i = 0; i < h.spec.q - h.spec.p; ++i) bound *= l;
    for (int i = 0; i < n - 1; ++i) bound *= Int(z.get_den());
    out.bound = bound;
    out.divides_bound = mpz_divisible_p(bound.get_mpz_t(), out.D.get_mpz_t()) != 0;
    out.report.add("D_n divides lcm(1..n-1)^(q-p) den(z)^(n-1)", out.divides_bound, Int(bound / gcd(bound, out.D)).get_str());
  }
  return out;
}

// ------------------------------------------------------- quality reports

struct LinearFit {
  double intercept = 0, slope = 0, max_residual = 0;
};

inline LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t m = x.size();
  if (m < 2) throw std::invalid_argument("fit_line: need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < m; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit f;
  f.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / m;
  for (size_t i = 0; i < m; ++i) f.max_residual = std::max(f.max_residual, std::fabs(y[i] - f.intercept - f.slope * x[i]));
  return f;
}

struct QualityRow {
  int n = 0;
  double log_max_coeff = 0;  // log max |coefficient of A*_j|
  double log_max_value = 0;  // log max |A*_j(z)|
  Int D;
  double log_abs_error = 0;  // log |eps_n|
  double log_sigma = 0;      // log max(|D_n A*_j(z)|, |D_n B(z)|)
  double error_scaled = 0;   // log|eps_n| + q(q-p) log n!
  double coeff_scaled = 0;   // log max|coeff| - (q-p) log n!
};

struct DiophantineReport {
  HPSpec spec;
  Rat z;
  std::vector<QualityRow> rows;
  LinearFit error_fit;  // of error_scaled; E = exp(slope)
  LinearFit coeff_fit;  // of coeff_scaled; C = exp(slope)
  LinearFit denom_fit;  // of log D_n; D = exp(slope)
  double C = 0, D = 0, E = 0;
  double sigma_a = 0, sigma_b = 0;  // sigma(n) = a n log n + b n, fitted to log_sigma
  double tau = 0;                   // slope of -log|D_n eps_n| against sigma(n); tau_1 = tau_2 = tau
  double dim_lower_bound = 0;       // (tau_1 + 1)/(1 + tau_1 - tau_2)
  Report report;
};

inline DiophantineReport quality_report(const HPSpec& s, int n_lo, int n_hi, const Rat& z, int digits = 30) {
  if (n_lo < 1 || n_hi < n_lo) throw std::invalid_argument("quality_report: empty n range");
  if (s.p >= s.q) throw std::invalid_argument("quality_report: needs p < q");
  DiophantineReport out;
  out.spec = s;
  out.z = z;
  out.report.subject = "quality " + s.str() + " z=" + to_string(z);
  const int qq = s.q * (s.q - s.p), dq = s.q - s.p;
  std::vector<double> ns, ye, yc, yd, ls, le;
  for (int n = n_lo; n <= n_hi; ++n) {
    auto h = hp_build(s, n);
    out.report.append(h.report);
    auto dc = denominator_clear(h, z);
    out.report.append(dc.report);
    QualityRow r;
    r.n = n;
    r.log_max_coeff = -INFINITY;
    for (const auto& a : h.Astar)
      for (const auto& c : a.coeffs()) r.log_max_coeff = std::max(r.log_max_coeff, detail::log_abs(c));
    r.log_max_value = -INFINITY;
    for (const auto& v : dc.astar_values) r.log_max_value = std::max(r.log_max_value, detail::log_abs(v));
    r.D = dc.D;
    r.log_sigma = detail::log_abs(Rat(dc.b_value * dc.D));
    for (const auto& v : dc.astar_values) r.log_sigma = std::max(r.log_sigma, detail::log_abs(Rat(v * dc.D)));
    r.log_abs_error = detail::log_abs(hp_error_eval(h, z, digits));
    const double lf = std::lgamma(n + 1.0);
    r.error_scaled = r.log_abs_error + qq * lf;
    r.coeff_scaled = r.log_max_coeff - dq * lf;
    out.rows.push_back(r);
    ns.push_back(n);
    ye.push_back(r.error_scaled);
    yc.push_back(r.coeff_scaled);
    yd.push_back(detail::log_abs(Rat(r.D)));
    ls.push_back(r.log_sigma);
    le.push_back(-(r.log_abs_error + detail::log_abs(Rat(r.D))));
  }
  if (ns.size() >= 2) {
    out.error_fit = fit_line(ns, ye);
    out.coeff_fit = fit_line(ns, yc);
    out.denom_fit = fit_line(ns, yd);
    out.E = std::exp(out.error_fit.slope);
    out.C = std::exp(out.coeff_fit.slope);
    out.D = std::exp(out.denom_fit.slope);
    // least squares for sigma(n) = a n log n + b n
    double s11 = 0, s12 = 0, s22 = 0, t1 = 0, t2 = 0;
    for (size_t i = 0; i < ns.size(); ++i) {
      const double u = ns[i] * std::log(ns[i]), v = ns[i];
      s11 += u * u;
      s12 += u * v;
      s22 += v * v;
      t1 += u * ls[i];
      t2 += v * ls[i];
    }
    const double det = s11 * s22 - s12 * s12;
    out.sigma_a = (t1 * s22 - t2 * s12) / det;
    out.sigma_b = (s11 * t2 - s12 * t1) / det;
    std::vector<double> sig;
    for (double n : ns) sig.push_back(out.sigma_a * n * std::log(n) + out.sigma_b * n);
    out.tau = fit_line(sig, le).slope;
    out.dim_lower_bound = out.tau + 1;
  }
  return out;
}

}  // namespace hypmop
