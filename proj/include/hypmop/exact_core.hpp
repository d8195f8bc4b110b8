#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypmop/polynomial.hpp"
#include "hypmop/rational.hpp"

namespace hypmop {

// ---------------------------------------------------------------- Pochhammer

inline Rat poch(const Rat& x, long k) {
  if (k < 0) throw std::invalid_argument("poch: negative length");
  Rat r = 1;
  for (long i = 0; i < k; ++i) r *= x + i;
  return r;
}

inline Rat poch(const RatVec& xs, long k) {
  Rat r = 1;
  for (const auto& x : xs) r *= poch(x, k);
  return r;
}

inline Rat factorial(long k) { return poch(Rat(1), k); }

inline RatVec shifted(const RatVec& v, const Rat& s) {
  RatVec out = v;
  for (auto& x : out) x += s;
  return out;
}

// ------------------------------------------------------------ parameter data

enum class Setting { Jacobi, Laguerre, Bessel };

inline const char* setting_name(Setting s) {
  switch (s) {
    case Setting::Jacobi: return "jacobi";
    case Setting::Laguerre: return "laguerre";
    case Setting::Bessel: return "bessel";
  }
  return "?";
}

struct Hypotheses {
  bool b_distinct_mod_z = true;       // b_i - b_j not an integer, i != j
  bool b_minus_a_ok = true;           // b_j - a_i not a negative integer
  bool a_distinct_mod_z = true;       // a_i - a_j not an integer, i != j
  bool b_minus_a_nonint = true;       // b_i - a_j not an integer
  bool a_below_b = true;              // a_j < b_j, j <= min(p,q)
  bool real_zero_condition = true;    // b_j > a_i (i <= j), b_j > a_i - 1 (i > j)
  bool b_distinct = true;

  bool closed_form_type1() const { return b_distinct_mod_z && b_minus_a_ok; }
};

struct ParamSystem {
  RatVec a;
  RatVec b;

  ParamSystem() = default;
  ParamSystem(RatVec a_, RatVec b_) : a(std::move(a_)), b(std::move(b_)) { validate(); }

  int p() const { return static_cast<int>(a.size()); }
  int q() const { return static_cast<int>(b.size()); }

  Setting setting() const {
    if (p() == q()) return Setting::Jacobi;
    return p() > q() ? Setting::Laguerre : Setting::Bessel;
  }

  // Number of weights w_j (the b-indexed family).
  int r() const { return std::min(p(), q()); }

  void validate() const {
    for (const auto& x : a)
      if (x <= -1) throw std::invalid_argument("ParamSystem: a_j must exceed -1, got " + to_string(x));
    for (const auto& x : b)
      if (x <= -1) throw std::invalid_argument("ParamSystem: b_j must exceed -1, got " + to_string(x));
  }

  void require_a_below_b() const {
    for (int j = 0; j < r(); ++j)
      if (!(a[j] < b[j]))
        throw std::invalid_argument("ParamSystem: need a_" + std::to_string(j + 1) + " < b_" + std::to_string(j + 1));
  }

  Hypotheses hypotheses() const {
    Hypotheses h;
    for (int i = 0; i < q(); ++i)
      for (int j = 0; j < q(); ++j) {
        if (i == j) continue;
        if (is_integer(b[i] - b[j])) h.b_distinct_mod_z = false;
        if (b[i] == b[j]) h.b_distinct = false;
      }
    for (int i = 0; i < p(); ++i)
      for (int j = 0; j < q(); ++j) {
        Rat d = b[j] - a[i];
        if (is_integer(d) && sgn(d) < 0) h.b_minus_a_ok = false;
        if (is_integer(d)) h.b_minus_a_nonint = false;
        if (i <= j ? !(b[j] > a[i]) : !(b[j] > a[i] - 1)) h.real_zero_condition = false;
      }
    for (int i = 0; i < p(); ++i)
      for (int j = 0; j < p(); ++j)
        if (i != j && is_integer(a[i] - a[j])) h.a_distinct_mod_z = false;
    for (int j = 0; j < r(); ++j)
      if (!(a[j] < b[j])) h.a_below_b = false;
    return h;
  }

  std::string str() const {
    std::string s = "a=(";
    for (int i = 0; i < p(); ++i) s += (i ? "," : "") + to_string(a[i]);
    s += ") b=(";
    for (int i = 0; i < q(); ++i) s += (i ? "," : "") + to_string(b[i]);
    return s + ")";
  }
};

// ------------------------------------------------------------------ moments

// w0 is the base weight, W(j) the b_j-shifted weight, V(j) the Laguerre-only
// family with Mellin factor (s-1)^(j-1). Indices are 1-based as in the math.
struct WeightId {
  enum class Kind { W0, W, V } kind = Kind::W0;
  int j = 0;
  static WeightId w0() { return {Kind::W0, 0}; }
  static WeightId w(int j) { return {Kind::W, j}; }
  static WeightId v(int j) { return {Kind::V, j}; }
};

// m-th moment divided by Gamma(a+1)/Gamma(b+1).
inline Rat rel_moment(const ParamSystem& sys, WeightId id, long m) {
  if (m < 0) throw std::invalid_argument("rel_moment: negative moment index");
  Rat base = poch(shifted(sys.a, 1), m) / poch(shifted(sys.b, 1), m);
  switch (id.kind) {
    case WeightId::Kind::W0: return base;
    case WeightId::Kind::W:
      if (id.j < 1 || id.j > sys.q()) throw std::invalid_argument("rel_moment: w_j out of range for setting");
      return base / (sys.b[id.j - 1] + m + 1);
    case WeightId::Kind::V: {
      // j > p-q is accepted: the moment formula stays meaningful and only
      // j <= p-q enters the orthogonality conditions.
      if (sys.setting() != Setting::Laguerre || id.j < 1)
        throw std::invalid_argument("rel_moment: v_j only exists in the Laguerre setting");
      Rat pw = 1;
      for (int i = 1; i < id.j; ++i) pw *= m;
      return base * pw;
    }
  }
  return base;
}

// Mellin transform at s (s >= 1) in the same relative convention.
inline Rat rel_mellin(const ParamSystem& sys, WeightId id, long s) { return rel_moment(sys, id, s - 1); }

// ------------------------------------------------------- partial fractions

struct Pole {
  Rat location;
  int multiplicity = 1;
};

// R(s) = sum_i sum_{k=1..m_i} coeff[i][k-1] / (s - c_i)^k + poly(s - center)
struct PFDecomp {
  std::vector<Pole> poles;
  std::vector<RatVec> coeff;
  Poly polynomial_part;
  Rat center = 0;

  Rat coefficient(size_t pole, int power) const {
    if (power < 1 || power > static_cast<int>(coeff.at(pole).size())) return 0;
    return coeff[pole][power - 1];
  }

  Rat eval(const Rat& s) const {
    Rat acc = polynomial_part.eval(s - center);
    for (size_t i = 0; i < poles.size(); ++i) {
      Rat inv = Rat(1) / (s - poles[i].location);
      Rat pw = inv;
      for (int k = 1; k <= poles[i].multiplicity; ++k) {
        acc += coeff[i][k - 1] * pw;
        pw *= inv;
      }
    }
    return acc;
  }

  Poly denominator() const {
    Poly d = Poly::constant(1);
    for (const auto& p : poles) d = d * Poly::linear_root(p.location).pow(p.multiplicity);
    return d;
  }

  // Numerator over denominator() after putting everything on one denominator.
  Poly recombine() const {
    Poly den = denominator();
    Poly num = polynomial_part.taylor_shift(-center) * den;
    for (size_t i = 0; i < poles.size(); ++i) {
      Poly rest = Poly::constant(1);
      for (size_t j = 0; j < poles.size(); ++j)
        if (j != i) rest = rest * Poly::linear_root(poles[j].location).pow(poles[j].multiplicity);
      const int m = poles[i].multiplicity;
      for (int k = 1; k <= m; ++k)
        num += rest * Poly::linear_root(poles[i].location).pow(m - k) * coeff[i][k - 1];
    }
    return num;
  }
};

// Truncated power-series quotient a/b modulo t^n (b[0] != 0).
inline RatVec series_divide(const RatVec& a, const RatVec& b, int n) {
  if (b.empty() || sgn(b[0]) == 0) throw std::domain_error("series_divide: zero constant term");
  RatVec h(n, Rat(0));
  for (int k = 0; k < n; ++k) {
    Rat acc = k < static_cast<int>(a.size()) ? a[k] : Rat(0);
    for (int i = 1; i <= k && i < static_cast<int>(b.size()); ++i) acc -= b[i] * h[k - i];
    h[k] = acc / b[0];
  }
  return h;
}

// poly_degree < 0 means "no polynomial part": the input must be proper.
// The polynomial part, when requested, is expanded in powers of (s - center).
inline PFDecomp partial_fractions(const Poly& numer, const std::vector<Pole>& poles, int poly_degree = -1,
                                  const Rat& center = 0) {
  for (size_t i = 0; i < poles.size(); ++i) {
    if (poles[i].multiplicity < 1) throw std::invalid_argument("partial_fractions: multiplicity must be >= 1");
    for (size_t j = i + 1; j < poles.size(); ++j)
      if (poles[i].location == poles[j].location)
        throw std::invalid_argument("partial_fractions: duplicate pole location " + to_string(poles[i].location));
  }
  PFDecomp out;
  out.poles = poles;
  out.center = center;
  int total = 0;
  for (const auto& p : poles) total += p.multiplicity;

  Poly rem = numer;
  if (numer.degree() >= total) {
    if (poly_degree < 0)
      throw std::invalid_argument("partial_fractions: numerator degree exceeds pole count and no polynomial part requested");
    if (numer.degree() > total + poly_degree)
      throw std::invalid_argument("partial_fractions: numerator degree exceeds pole count plus polynomial-part degree");
    auto [q, r] = divmod(numer, out.denominator());
    out.polynomial_part = q.taylor_shift(center);
    rem = r;
  }

  for (size_t i = 0; i < poles.size(); ++i) {
    const Rat c = poles[i].location;
    const int m = poles[i].multiplicity;
    Poly others = Poly::constant(1);
    for (size_t j = 0; j < poles.size(); ++j)
      if (j != i) others = others * Poly::linear_root(poles[j].location).pow(poles[j].multiplicity);
    RatVec h = series_divide(rem.taylor_shift(c).coeffs(), others.taylor_shift(c).coeffs(), m);
    RatVec co(m);
    for (int k = 0; k < m; ++k) co[m - 1 - k] = h[k];
    out.coeff.push_back(std::move(co));
  }
  return out;
}

// ------------------------------------------------------------------ integers

inline Int lcm_range(long n) {
  if (n < 1) throw std::invalid_argument("lcm_range: n must be >= 1");
  Int l = 1;
  for (long k = 2; k <= n; ++k) mpz_lcm_ui(l.get_mpz_t(), l.get_mpz_t(), static_cast<unsigned long>(k));
  return l;
}

// --------------------------------------------------------- exact linear algebra

using RatMatrix = std::vector<RatVec>;

// Basis of the right null space of M (rows x cols) over Q.
inline std::vector<RatVec> nullspace(RatMatrix M, size_t cols) {
  const size_t rows = M.size();
  std::vector<int> pivot_col;
  size_t row = 0;
  for (size_t col = 0; col < cols && row < rows; ++col) {
    size_t piv = row;
    while (piv < rows && sgn(M[piv][col]) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(M[piv], M[row]);
    Rat inv = Rat(1) / M[row][col];
    for (size_t k = col; k < cols; ++k) M[row][k] *= inv;
    for (size_t r2 = 0; r2 < rows; ++r2) {
      if (r2 == row || sgn(M[r2][col]) == 0) continue;
      Rat f = M[r2][col];
      for (size_t k = col; k < cols; ++k) M[r2][k] -= f * M[row][k];
    }
    pivot_col.push_back(static_cast<int>(col));
    ++row;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  std::vector<RatVec> basis;
  for (size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RatVec v(cols, Rat(0));
    v[free] = 1;
    for (size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -M[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace hypmop
