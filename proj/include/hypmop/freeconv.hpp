#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "hypmop/mop.hpp"
#include "hypmop/report.hpp"

namespace hypmop {

// ------------------------------------------------- finite free convolution

// AsDisplayed multiplies the signed coefficients p[k] q[k] directly.
// Binomial divides by C(d,k), which makes x^d-style hypergeometric products
// factor (see verify_decomposition).
enum class FfmcConvention { AsDisplayed, Binomial };

// p[k] is (-1)^k times the coefficient of x^{d-k}.
inline Poly ffmc(const Poly& p, const Poly& q, int d, FfmcConvention conv = FfmcConvention::AsDisplayed) {
  if (d < 0) throw std::invalid_argument("ffmc: negative degree");
  if (p.degree() > d || q.degree() > d) throw std::invalid_argument("ffmc: polynomial degree exceeds d");
  RatVec out(d + 1, Rat(0));
  Int binom = 1;  // C(d,k)
  for (int k = 0; k <= d; ++k) {
    const int j = d - k;
    Rat c = p[j] * q[j];
    if (k % 2) c = -c;
    if (conv == FfmcConvention::Binomial) c /= Rat(binom);
    out[j] = c;
    binom = binom * (d - k) / (k + 1);
  }
  return Poly(std::move(out));
}

inline Poly ffmc_all(const std::vector<Poly>& ps, int d, FfmcConvention conv) {
  if (ps.empty()) throw std::invalid_argument("ffmc_all: no factors");
  Poly acc = ps[0];
  for (size_t i = 1; i < ps.size(); ++i) acc = ffmc(acc, ps[i], d, conv);
  return acc;
}

// Terminating series sum_k (-N)_k (upper)_k / ((lower)_k k!) x^k.
inline Poly hyp_poly(int N, const RatVec& upper, const RatVec& lower) {
  RatVec c(N + 1);
  for (int k = 0; k <= N; ++k) {
    Rat den = poch(lower, k) * factorial(k);
    if (sgn(den) == 0) throw std::domain_error("hyp_poly: lower parameter is a nonpositive integer in range");
    c[k] = poch(Rat(-N), k) * poch(upper, k) / den;
  }
  return Poly(std::move(c));
}

struct Decomposition {
  std::string name;
  Poly target;
  std::vector<Poly> factors;
  Poly product;                        // Binomial convention
  std::optional<Rat> scalar;           // target == scalar * product
  std::optional<Rat> displayed_scalar; // same with the AsDisplayed convention
};

struct DecompositionReport {
  Report report;
  std::vector<Decomposition> items;
};

namespace detail {

inline Decomposition make_decomposition(std::string name, Poly target, std::vector<Poly> factors, int d) {
  Decomposition dc;
  dc.name = std::move(name);
  dc.target = std::move(target);
  dc.factors = std::move(factors);
  dc.product = ffmc_all(dc.factors, d, FfmcConvention::Binomial);
  dc.scalar = proportionality(dc.target, dc.product);
  dc.displayed_scalar = proportionality(dc.target, ffmc_all(dc.factors, d, FfmcConvention::AsDisplayed));
  return dc;
}

}  // namespace detail

// The type II polynomial against iterated ffmc of hypergeometric factors.
// All settings: one factor per parameter pair (b_j+n_j+1 over a_j+1).
// Jacobi: also the Jacobi-Pineiro split P(a,b) = P(b,b) x prod 2F1(-N,b_j+1;a_j+1).
// Laguerre: also the split through the Jacobi-like system (a, b u a_*) with
// index n u m, times Laguerre factors 1F1(-N; a_{q+j}+m_j+1).
inline DecompositionReport verify_decomposition(const ParamSystem& sys, const MultiIndex& n) {
  require_valid(sys, n);
  const int N = n.size();
  const int p = sys.p(), q = sys.q();
  const Poly target = type2_construct(sys, n).poly;
  DecompositionReport out;
  out.report.subject = "decomposition " + sys.str() + " n=" + n.str();

  std::vector<Poly> factors;
  for (int j = 0; j < std::max(p, q); ++j) {
    RatVec up, lo;
    if (j < q) up.push_back(sys.b[j] + n.head[j] + 1);
    if (j < p) lo.push_back(sys.a[j] + 1);
    factors.push_back(hyp_poly(N, up, lo));
  }
  out.items.push_back(detail::make_decomposition("hypergeometric factors", target, factors, N));

  if (sys.setting() == Setting::Jacobi) {
    ParamSystem jp(sys.b, sys.b);
    std::vector<Poly> fs{type2_construct(jp, n).poly};
    for (int j = 0; j < p; ++j) fs.push_back(hyp_poly(N, {sys.b[j] + 1}, {sys.a[j] + 1}));
    out.items.push_back(detail::make_decomposition("Jacobi-Pineiro factor", target, fs, N));
  }
  if (sys.setting() == Setting::Laguerre) {
    RatVec bb = sys.b;
    const auto m = n.tail_or_empty();
    for (int j = q; j < p; ++j) bb.push_back(sys.a[j]);
    ParamSystem jac(sys.a, bb);
    std::vector<Poly> fs{type2_construct(jac, MultiIndex(n.all())).poly};
    for (int j = 0; j < p - q; ++j) fs.push_back(hyp_poly(N, {}, {sys.a[q + j] + m[j] + 1}));
    out.items.push_back(detail::make_decomposition("Laguerre factors", target, fs, N));
  }
  for (const auto& it : out.items)
    out.report.add(it.name, it.scalar.has_value(), it.scalar ? "scalar " + to_string(*it.scalar) : "not proportional");
  return out;
}

// --------------------------------------------------------- S-transforms

template <class T>
struct MomentSeries {
  std::vector<T> m;  // m[k-1] is the k-th moment
  int order() const { return static_cast<int>(m.size()); }
  const T& at(int k) const { return m.at(k - 1); }
};

namespace detail {

template <class T>
std::vector<T> series_mul(const std::vector<T>& a, const std::vector<T>& b, int n) {
  std::vector<T> r(n + 1, T(0));
  for (int i = 0; i <= n && i < static_cast<int>(a.size()); ++i)
    for (int j = 0; i + j <= n && j < static_cast<int>(b.size()); ++j) r[i + j] += T(a[i] * b[j]);
  return r;
}

// Compositional inverse of f = sum_{k>=1} f_k z^k (f[0] ignored) to order K.
template <class T>
std::vector<T> series_reversion(const std::vector<T>& f, int K) {
  if (f.size() < 2 || f[1] == T(0)) throw std::domain_error("series reversion: linear coefficient is zero");
  std::vector<T> g(K + 1, T(0));
  g[1] = T(1) / f[1];
  for (int n = 2; n <= K; ++n) {
    T c(0);
    std::vector<T> pw = g;  // g^k, truncated at n
    pw.resize(n + 1, T(0));
    for (int k = 2; k <= n && k < static_cast<int>(f.size()); ++k) {
      pw = series_mul(pw, g, n);
      c += T(f[k] * pw[n]);
    }
    g[n] = T(-c / f[1]);
  }
  return g;
}

}  // namespace detail

// Coefficients s_0..s_{K-1} of S(z) = m^{-1}(z)(1+z)/z.
template <class T>
std::vector<T> s_transform(const MomentSeries<T>& ms) {
  const int K = ms.order();
  if (K < 1 || ms.m[0] == T(0)) throw std::domain_error("s_transform: first moment must be nonzero");
  std::vector<T> f(K + 1, T(0));
  for (int k = 1; k <= K; ++k) f[k] = ms.at(k);
  auto g = detail::series_reversion(f, K);
  std::vector<T> s(K, T(0));
  for (int i = 0; i < K; ++i) s[i] = T(g[i + 1] + (i ? g[i] : T(0)));
  return s;
}

template <class T>
MomentSeries<T> moments_from_s_transform(const std::vector<T>& s) {
  const int K = static_cast<int>(s.size());
  if (K < 1 || s[0] == T(0)) throw std::domain_error("moments_from_s_transform: S(0) must be nonzero");
  std::vector<T> g(K + 1, T(0));
  T prev(0);
  for (int i = 0; i < K; ++i) {
    prev = T(s[i] - prev);
    g[i + 1] = prev;
  }
  auto f = detail::series_reversion(g, K);
  return {std::vector<T>(f.begin() + 1, f.end())};
}

template <class T>
MomentSeries<T> stransform_roundtrip(const MomentSeries<T>& ms) {
  return moments_from_s_transform(s_transform(ms));
}

template <class T>
MomentSeries<T> free_mult_moments(const std::vector<MomentSeries<T>>& parts, int K) {
  if (parts.empty()) throw std::invalid_argument("free_mult_moments: no factors");
  std::vector<T> s(1, T(1));
  for (const auto& ms : parts) {
    if (ms.order() < K) throw std::invalid_argument("free_mult_moments: factor series shorter than K");
    MomentSeries<T> cut{std::vector<T>(ms.m.begin(), ms.m.begin() + K)};
    s = detail::series_mul(s, s_transform(cut), K - 1);
  }
  return moments_from_s_transform(s);
}

template <class T>
MomentSeries<T> free_mult_moments(const MomentSeries<T>& a, const MomentSeries<T>& b, int K) {
  return free_mult_moments<T>({a, b}, K);
}

// ------------------------------------------------------------- densities

struct QuadConfig {
  double tol = 1e-13;
  int max_refinements = 15;
  int series_order = 12;  // moment order used for FreeProduct moment algebra
};

namespace detail {

constexpr double kPi = std::numbers::pi;

// w = zS on the physical branch of w^{p+1} = z (w + 1/p)^q (w - 1), tracked by
// Newton steps from w ~ 1 at z = x - iY down the vertical line to x - i eta,
// eta = 1e-14 x (z = 0 is a branch point).
inline std::complex<double> law_w(int p, int q, double x) {
  const double eta = 1e-14 * std::fabs(x) + 1e-300;
  using C = std::complex<double>;
  auto step = [&](C z, C w) {
    for (int it = 0; it < 30; ++it) {
      C a = w + 1.0 / p, am = std::pow(a, q - 1), g = am * a * (w - 1.0);
      C dg = (q > 0 ? double(q) * am * (w - 1.0) : C(0)) + am * a;
      C f = std::pow(w, p + 1) - z * g, df = double(p + 1) * std::pow(w, p) - z * dg;
      C dw = f / df;
      w -= dw;
      if (std::abs(dw) < 1e-15 * (1 + std::abs(w))) break;
    }
    return w;
  };
  const double Y = 16.0 * (std::pow(4.0, p - q) + std::fabs(x) + 1);
  C w = 1.0;
  for (double y = Y; y > eta; y *= (y > 1e-4 * Y ? 0.8 : 0.1)) w = step(C(x, -y), w);
  return step(C(x, -eta), w);
}

// Im S(x - i0)/pi with S = w/z.
inline double law_density(int p, int q, double x) {
  if (!(x > 0)) return 0;
  const double d = law_w(p, q, x).imag() / (kPi * x);
  return d > 1e-9 / x ? d : 0.0;
}

inline double law_right_edge(int p, int q) {
  if (q == p) return 1.0;
  double hi = std::pow(4.0, p - q);
  const int steps = 400;
  double last = 0;
  for (int i = 1; i < steps; ++i) {
    double x = hi * i / steps;
    if (law_density(p, q, x) > 0) last = x;
  }
  double lo = last, up = std::min(hi, last + hi / steps);
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + up);
    if (law_density(p, q, mid) > 0) lo = mid;
    else up = mid;
  }
  return 0.5 * (lo + up);
}

}  // namespace detail

struct DensityModel {
  enum class Kind { DeformedArcsin, VJacobi, MarchenkoPastur, PointMassAtOne, Mixture, FreeProduct };
  Kind kind = Kind::MarchenkoPastur;
  double alpha = 0;  // DeformedArcsin
  int r = 1;         // VJacobi
  std::vector<double> weights;
  std::vector<DensityModel> parts;
  // FreeProduct built by jacobi_laguerre_law(p, q): its Stieltjes transform
  // solves (zS)^{p+1} = z (zS + 1/p)^q (zS - 1).
  std::optional<std::pair<int, int>> law;
  double law_edge = 0;  // right end of the support of the law

  static DensityModel deformed_arcsin(double a) {
    if (!(a >= 0)) throw std::invalid_argument("deformed arcsine needs alpha >= 0");
    DensityModel m;
    m.kind = Kind::DeformedArcsin;
    m.alpha = a;
    return m;
  }
  static DensityModel vjacobi(int r) {
    if (r < 1) throw std::invalid_argument("VJacobi needs r >= 1");
    DensityModel m;
    m.kind = Kind::VJacobi;
    m.r = r;
    return m;
  }
  static DensityModel marchenko_pastur() { return DensityModel{}; }
  static DensityModel point_mass_at_one() {
    DensityModel m;
    m.kind = Kind::PointMassAtOne;
    return m;
  }
  static DensityModel mixture(std::vector<double> w, std::vector<DensityModel> ps) {
    if (w.size() != ps.size() || w.empty()) throw std::invalid_argument("mixture: weights and parts differ in length");
    double sum = 0;
    for (double x : w) {
      if (!(x >= 0)) throw std::invalid_argument("mixture: negative weight");
      sum += x;
    }
    if (std::fabs(sum - 1) > 1e-12) throw std::invalid_argument("mixture: weights must sum to 1");
    DensityModel m;
    m.kind = Kind::Mixture;
    m.weights = std::move(w);
    m.parts = std::move(ps);
    return m;
  }
  static DensityModel free_product(std::vector<DensityModel> ps) {
    if (ps.empty()) throw std::invalid_argument("free product of nothing");
    DensityModel m;
    m.kind = Kind::FreeProduct;
    m.parts = std::move(ps);
    return m;
  }
  // (1-1/p) delta_1 + (1/p) u_{p-1}
  static DensityModel delta_arcsine_mixture(int p) {
    return mixture({1 - 1.0 / p, 1.0 / p}, {point_mass_at_one(), deformed_arcsin(p - 1)});
  }
  // ((1-1/p) delta_1 + (1/p) u_{p-1})^{x q} x MP^{x (p-q)}
  static DensityModel jacobi_laguerre_law(int p, int q) {
    if (p < 1 || q < 0 || q > p) throw std::invalid_argument("jacobi_laguerre_law needs 0 <= q <= p, p >= 1");
    std::vector<DensityModel> ps;
    for (int i = 0; i < q; ++i) ps.push_back(delta_arcsine_mixture(p));
    for (int i = 0; i < p - q; ++i) ps.push_back(marchenko_pastur());
    auto m = free_product(std::move(ps));
    m.law = std::make_pair(p, q);
    m.law_edge = detail::law_right_edge(p, q);
    return m;
  }

  std::string str() const;
};

struct Interval {
  double lo = 0, hi = 0;
};

namespace detail {

// x(phi) for VJacobi and d(log x)/d(phi).
inline double vj_x(int r, double phi) {
  const double B = std::sin((r + 1) * phi);
  return std::pow(r / (r + 1.0), r) / (r + 1) * (B / std::sin(phi)) * std::pow(B / std::sin(r * phi), r);
}

// The density denominator rewritten as ((r+1)A - rB)^2 + 4r(r+1)AB sin^2(phi/2),
// A = sin(r phi), B = sin((r+1) phi); the displayed form cancels to O(phi^4).
inline double vj_den(int r, double phi) {
  const double A = std::sin(r * phi), B = std::sin((r + 1) * phi), h = std::sin(phi / 2);
  const double u = (r + 1.0) * A - r * B;
  return u * u + 4.0 * r * (r + 1) * A * B * h * h;
}
// -d(log x)/d(phi) times A B sin(phi), in the same cancellation-free form.
inline double vj_dlogx_num(int r, double phi) {
  const double A = std::sin(r * phi), s1 = std::sin(phi), h = std::sin((r + 1) * phi / 2);
  const double u = A - r * s1;
  return u * u + 4.0 * r * A * s1 * h * h;
}
inline double vj_density_phi(int r, double phi) {
  const double s1 = std::sin(phi), A = std::sin(r * phi), B = std::sin((r + 1) * phi);
  return (r + 1.0) / (kPi * vj_x(r, phi)) * s1 * A * B / vj_den(r, phi);
}
// v_r(x(phi)) |dx/dphi|, the density of the pushforward in phi.
inline double vj_phi_weight(int r, double phi) {
  const double w = (r + 1.0) / kPi * vj_dlogx_num(r, phi) / vj_den(r, phi);
  return std::isfinite(w) ? w : (r + 1.0) / kPi;  // the limit at phi = 0
}

// x(phi) is decreasing from 1 at phi=0 to 0 at phi=pi/(r+1).
inline double vj_phi_of_x(int r, double x) {
  double lo = 0, hi = kPi / (r + 1);
  while (hi - lo > 1e-13) {
    double mid = 0.5 * (lo + hi);
    if (vj_x(r, mid) > x) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

template <class F>
double integrate(F f, double a, double b, const QuadConfig& cfg) {
  if (!(b > a)) return 0;
  boost::math::quadrature::tanh_sinh<double> ts(cfg.max_refinements);
  return ts.integrate(f, a, b, cfg.tol);
}

}  // namespace detail

inline Interval support(const DensityModel& m) {
  using K = DensityModel::Kind;
  switch (m.kind) {
    case K::DeformedArcsin: return {0, 4 * (m.alpha + 1) / ((m.alpha + 2) * (m.alpha + 2))};
    case K::VJacobi: return {0, 1};
    case K::MarchenkoPastur: return {0, 4};
    case K::PointMassAtOne: return {1, 1};
    case K::Mixture: {
      Interval iv = support(m.parts[0]);
      for (const auto& p : m.parts) {
        auto s = support(p);
        iv.lo = std::min(iv.lo, s.lo);
        iv.hi = std::max(iv.hi, s.hi);
      }
      return iv;
    }
    case K::FreeProduct: {
      if (m.law) return {0, m.law_edge};
      double hi = 1;
      for (const auto& p : m.parts) hi *= support(p).hi;
      return {0, hi};
    }
  }
  return {};
}

inline std::string DensityModel::str() const {
  switch (kind) {
    case Kind::DeformedArcsin: return "u_" + format_double(alpha);
    case Kind::VJacobi: return "v_" + std::to_string(r);
    case Kind::MarchenkoPastur: return "MP";
    case Kind::PointMassAtOne: return "delta_1";
    case Kind::Mixture: {
      std::string s;
      for (size_t i = 0; i < parts.size(); ++i) s += (i ? " + " : "") + format_double(weights[i]) + "*" + parts[i].str();
      return "(" + s + ")";
    }
    case Kind::FreeProduct: {
      std::string s;
      for (size_t i = 0; i < parts.size(); ++i) s += (i ? " [x] " : "") + parts[i].str();
      return s;
    }
  }
  return "?";
}

namespace detail {

// Density of the absolutely continuous part; zero off the open support.
// xc, when given, is hi - x computed without rounding.
inline double density_inner(const DensityModel& m, double x, double xc = -1) {
  using K = DensityModel::Kind;
  auto iv = support(m);
  if (xc < 0) xc = iv.hi - x;
  if (!(x > iv.lo && xc > 0)) return 0;
  switch (m.kind) {
    case K::DeformedArcsin: {
      const double a = m.alpha;
      return (a + 2) * std::sqrt(x * xc) / (2 * kPi * x * ((1 - iv.hi) + xc));
    }
    case K::VJacobi: return vj_density_phi(m.r, vj_phi_of_x(m.r, x));
    case K::MarchenkoPastur: return std::sqrt(x * xc) / (2 * kPi * x);
    case K::PointMassAtOne: return 0;
    case K::Mixture: {
      double s = 0;
      for (size_t i = 0; i < m.parts.size(); ++i) s += m.weights[i] * density_inner(m.parts[i], x);
      return s;
    }
    case K::FreeProduct: return m.law ? law_density(m.law->first, m.law->second, x) : 0.0;
  }
  return 0;
}

// int g(x) density(x) dx over x = lo + (hi-lo) sin^2(t), 0 < t < tmax. The
// substitution absorbs square-root behaviour at both ends.
template <class G>
double integrate_sin2(const DensityModel& m, Interval iv, G g, double tmax, const QuadConfig& cfg) {
  const double L = iv.hi - iv.lo;
  return integrate(
      [&](double t) {
        const double s = std::sin(t), c = std::cos(t);
        const double x = iv.lo + L * s * s;
        const double v = g(x) * density_inner(m, x, L * c * c) * 2 * L * s * c;
        return std::isfinite(v) ? v : 0.0;
      },
      0.0, tmax, cfg);
}

}  // namespace detail

inline double density_eval(const DensityModel& m, double x) {
  using K = DensityModel::Kind;
  if (m.kind == K::PointMassAtOne) throw std::domain_error("density_eval: point mass has no density");
  if (m.kind == K::FreeProduct && !m.law) throw std::domain_error("density_eval: no closed form for this free product");
  auto iv = support(m);
  if (!(x > iv.lo && x < iv.hi)) throw std::domain_error("density_eval: x outside the open support of " + m.str());
  return detail::density_inner(m, x);
}

inline double density_cdf(const DensityModel& m, double x, const QuadConfig& cfg = {});

// int x^k dmu.
inline double density_moment(const DensityModel& m, int k, const QuadConfig& cfg = {}) {
  using K = DensityModel::Kind;
  switch (m.kind) {
    case K::PointMassAtOne: return 1.0;
    case K::Mixture: {
      double s = 0;
      for (size_t i = 0; i < m.parts.size(); ++i) s += m.weights[i] * density_moment(m.parts[i], k, cfg);
      return s;
    }
    case K::VJacobi: {
      const int r = m.r;
      return detail::integrate([&](double phi) { return std::pow(detail::vj_x(r, phi), k) * detail::vj_phi_weight(r, phi); },
                               0.0, detail::kPi / (r + 1), cfg);
    }
    case K::FreeProduct: {
      if (k == 0) return 1.0;
      const int K_ = std::max(k, cfg.series_order);
      std::vector<MomentSeries<double>> ps;
      for (const auto& p : m.parts) {
        MomentSeries<double> ms;
        for (int j = 1; j <= K_; ++j) ms.m.push_back(density_moment(p, j, cfg));
        ps.push_back(std::move(ms));
      }
      return free_mult_moments(ps, K_).at(k);
    }
    default: {
      auto iv = support(m);
      return detail::integrate_sin2(m, iv, [&](double x) { return std::pow(x, k); }, detail::kPi / 2, cfg);
    }
  }
}

inline MomentSeries<double> density_moments(const DensityModel& m, int K, const QuadConfig& cfg = {}) {
  MomentSeries<double> out;
  if (m.kind == DensityModel::Kind::FreeProduct) {
    std::vector<MomentSeries<double>> ps;
    for (const auto& p : m.parts) ps.push_back(density_moments(p, K, cfg));
    return free_mult_moments(ps, K);
  }
  for (int k = 1; k <= K; ++k) out.m.push_back(density_moment(m, k, cfg));
  return out;
}

// mu((-inf, x]).
inline double density_cdf(const DensityModel& m, double x, const QuadConfig& cfg) {
  using K = DensityModel::Kind;
  switch (m.kind) {
    case K::PointMassAtOne: return x >= 1 ? 1.0 : 0.0;
    case K::Mixture: {
      double s = 0;
      for (size_t i = 0; i < m.parts.size(); ++i) s += m.weights[i] * density_cdf(m.parts[i], x, cfg);
      return s;
    }
    default: break;
  }
  auto iv = support(m);
  if (x <= iv.lo) return 0;
  if (x >= iv.hi) return 1;
  if (m.kind == K::VJacobi) {
    const int r = m.r;
    const double phi = detail::vj_phi_of_x(r, x);
    return detail::integrate([&](double t) { return detail::vj_phi_weight(r, t); }, phi, detail::kPi / (r + 1), cfg);
  }
  if (m.kind == K::FreeProduct && !m.law) throw std::domain_error("density_cdf: no closed form for this free product");
  const double theta = std::asin(std::sqrt((x - iv.lo) / (iv.hi - iv.lo)));
  QuadConfig c = cfg;
  // the continued density carries ~1e-12 noise; tighter targets only burn refinements
  if (m.kind == K::FreeProduct) c.tol = std::max(c.tol, 1e-9);
  return detail::integrate_sin2(m, iv, [](double) { return 1.0; }, theta, c);
}

// ------------------------------------------------ Stieltjes transforms

using Complex = std::complex<double>;

struct StieltjesEquation {
  enum class Kind { Jacobi, JacobiAsDisplayed, Laguerre, DeformedArcsin };
  Kind kind = Kind::Jacobi;
  int p = 1, q = 1;
  double alpha = 0;

  // z^r S^{r+1} = (zS - 1)(zS + 1/r)^r
  static StieltjesEquation jacobi(int r) { return {Kind::Jacobi, r, r, 0}; }
  // (S + r^r/(r+1)^{r+1})^{r+1} = z S^r
  static StieltjesEquation jacobi_as_displayed(int r) { return {Kind::JacobiAsDisplayed, r, r, 0}; }
  // (zS)^{p+1} = z (zS + 1/p)^q (zS - 1)
  static StieltjesEquation laguerre(int p, int q) { return {Kind::Laguerre, p, q, 0}; }
  // z(1-z) S^2 - alpha z S + alpha + 1 = 0
  static StieltjesEquation deformed_arcsin(double a) { return {Kind::DeformedArcsin, 1, 1, a}; }
};

inline Complex stieltjes_residual(const StieltjesEquation& eq, Complex z, Complex S) {
  using K = StieltjesEquation::Kind;
  const Complex w = z * S;
  switch (eq.kind) {
    case K::Jacobi: {
      const int r = eq.p;
      return std::pow(z, r) * std::pow(S, r + 1) - (w - 1.0) * std::pow(w + 1.0 / r, r);
    }
    case K::JacobiAsDisplayed: {
      const int r = eq.p;
      const double c = std::pow(double(r), r) / std::pow(r + 1.0, r + 1);
      return std::pow(S + c, r + 1) - z * std::pow(S, r);
    }
    case K::Laguerre:
      return std::pow(w, eq.p + 1) - z * std::pow(w + 1.0 / eq.p, eq.q) * (w - 1.0);
    case K::DeformedArcsin:
      return z * (1.0 - z) * S * S - eq.alpha * z * S + (eq.alpha + 1);
  }
  return {};
}

// (1/n) sum 1/(z - x_i)
inline Complex empirical_stieltjes(const std::vector<double>& zeros, Complex z) {
  if (zeros.empty()) throw std::invalid_argument("empirical_stieltjes: no points");
  Complex s = 0;
  for (double x : zeros) {
    if (z == Complex(x, 0)) throw std::domain_error("empirical_stieltjes: z is one of the points");
    s += 1.0 / (z - x);
  }
  return s / double(zeros.size());
}

// sum_{k=0}^{K} m_k / z^{k+1} with m_0 = 1.
template <class T>
double as_double(const T& v) {
  if constexpr (std::is_same_v<T, double>) return v;
  else return v.get_d();
}

template <class T>
Complex stieltjes_from_moments(const MomentSeries<T>& ms, Complex z) {
  Complex s = 1.0 / z, zp = 1.0 / z;
  for (int k = 1; k <= ms.order(); ++k) {
    zp /= z;
    s += as_double(ms.at(k)) * zp;
  }
  return s;
}

}  // namespace hypmop
