#pragma once

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypmop/exact_core.hpp"
#include "hypmop/report.hpp"

namespace hypmop {

// -------------------------------------------------------------- multi-indices

struct MultiIndex {
  std::vector<int> head;
  std::optional<std::vector<int>> tail;  // Laguerre m-part

  MultiIndex() = default;
  MultiIndex(std::vector<int> h) : head(std::move(h)) {}
  MultiIndex(std::vector<int> h, std::vector<int> t) : head(std::move(h)), tail(std::move(t)) {}

  std::vector<int> all() const {
    std::vector<int> v = head;
    if (tail) v.insert(v.end(), tail->begin(), tail->end());
    return v;
  }
  int size() const {
    auto v = all();
    return std::accumulate(v.begin(), v.end(), 0);
  }
  std::vector<int> tail_or_empty() const { return tail ? *tail : std::vector<int>{}; }

  std::string str() const {
    auto join = [](const std::vector<int>& v) {
      std::string s = "(";
      for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
      return s + ")";
    };
    return tail ? join(head) + "+" + join(*tail) : join(head);
  }
};

inline bool is_near_diagonal(const std::vector<int>& v) {
  if (v.empty()) return true;
  auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo <= 1;
}

inline bool is_step_line(const std::vector<int>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return v.empty() || v.back() >= v.front() - 1;
}

struct MultiIndexClass {
  bool near_diagonal = false;
  bool step_line = false;
  bool tail_step_line = true;
};

inline MultiIndexClass classify_multiindex(const MultiIndex& n) {
  for (int x : n.all())
    if (x < 0) throw std::invalid_argument("multi-index entries must be nonnegative");
  MultiIndexClass c;
  c.near_diagonal = is_near_diagonal(n.all());
  c.step_line = is_step_line(n.all());
  if (n.tail) c.tail_step_line = is_step_line(*n.tail);
  return c;
}

inline std::vector<int> canonical_stepline(int r, int k) {
  if (r < 1 || k < 0) throw std::invalid_argument("canonical_stepline: need r >= 1, k >= 0");
  std::vector<int> v(r, k / r);
  for (int i = 0; i < k % r; ++i) ++v[i];
  return v;
}

// Empty string when n fits the setting of sys, otherwise the reason.
inline std::string index_problem(const ParamSystem& sys, const MultiIndex& n) {
  for (int x : n.all())
    if (x < 0) return "negative entry";
  const int p = sys.p(), q = sys.q();
  switch (sys.setting()) {
    case Setting::Jacobi:
    case Setting::Bessel:
      if (static_cast<int>(n.head.size()) != q) return "head length must be q=" + std::to_string(q);
      if (n.tail && !n.tail->empty()) return "tail only allowed in the Laguerre setting";
      break;
    case Setting::Laguerre:
      if (static_cast<int>(n.head.size()) != q) return "head length must be q=" + std::to_string(q);
      if (static_cast<int>(n.tail_or_empty().size()) != p - q) return "tail length must be p-q=" + std::to_string(p - q);
      if (!is_step_line(n.tail_or_empty())) return "tail must be on the step-line";
      break;
  }
  if (!is_near_diagonal(n.all())) return "multi-index is not near the diagonal";
  return {};
}

inline void require_valid(const ParamSystem& sys, const MultiIndex& n) {
  auto why = index_problem(sys, n);
  if (!why.empty()) throw std::invalid_argument("invalid multi-index " + n.str() + ": " + why);
}

// All valid near-diagonal indices with 1 <= size <= max_size.
inline std::vector<MultiIndex> near_diagonal_indices(const ParamSystem& sys, int max_size) {
  const int len = std::max(sys.p(), sys.q());
  const int q = sys.q();
  std::vector<MultiIndex> out;
  for (int k = 1; k <= max_size; ++k) {
    const int base = k / len, extra = k % len;
    std::vector<int> mask(len, 0);
    std::fill(mask.begin(), mask.begin() + extra, 1);
    std::sort(mask.begin(), mask.end());
    do {
      std::vector<int> v(len);
      for (int i = 0; i < len; ++i) v[i] = base + mask[i];
      MultiIndex n;
      if (sys.setting() == Setting::Laguerre)
        n = MultiIndex(std::vector<int>(v.begin(), v.begin() + q), std::vector<int>(v.begin() + q, v.end()));
      else
        n = MultiIndex(v);
      if (index_problem(sys, n).empty()) out.push_back(n);
    } while (std::next_permutation(mask.begin(), mask.end()));
  }
  return out;
}

// Weight attached to each block of orthogonality conditions, with its count.
inline std::vector<std::pair<WeightId, int>> weight_layout(const ParamSystem& sys, const MultiIndex& n) {
  std::vector<std::pair<WeightId, int>> out;
  for (int j = 0; j < static_cast<int>(n.head.size()); ++j) out.push_back({WeightId::w(j + 1), n.head[j]});
  auto t = n.tail_or_empty();
  for (int j = 0; j < static_cast<int>(t.size()); ++j) out.push_back({WeightId::v(j + 1), t[j]});
  (void)sys;
  return out;
}

// ------------------------------------------------------------------ type II

enum class Normalization { Hypergeometric, Monic };

struct TypeIIResult {
  Poly poly;
  Normalization normalization = Normalization::Hypergeometric;
  Setting setting = Setting::Jacobi;
};

// c_k = (-N)_k (b+n+1)_k / ((a+1)_k k!), b+n over the q head entries.
inline TypeIIResult type2_construct(const ParamSystem& sys, const MultiIndex& n,
                                    Normalization norm = Normalization::Hypergeometric) {
  require_valid(sys, n);
  const int N = n.size();
  RatVec bn(sys.q());
  for (int j = 0; j < sys.q(); ++j) bn[j] = sys.b[j] + n.head[j] + 1;
  const RatVec a1 = shifted(sys.a, 1);
  RatVec c(N + 1);
  for (int k = 0; k <= N; ++k) c[k] = poch(Rat(-N), k) * poch(bn, k) / (poch(a1, k) * factorial(k));
  TypeIIResult r{Poly(std::move(c)), Normalization::Hypergeometric, sys.setting()};
  if (norm == Normalization::Monic) {
    r.poly = r.poly.monic();
    r.normalization = Normalization::Monic;
  }
  return r;
}

class RankDeficiency : public std::runtime_error {
 public:
  RankDeficiency(const std::string& what, size_t nullity) : std::runtime_error(what), nullity_(nullity) {}
  size_t nullity() const { return nullity_; }

 private:
  size_t nullity_;
};

// Null space of the moment matrix; constant term scaled to 1 when nonzero.
inline Poly type2_oracle(const ParamSystem& sys, const MultiIndex& n) {
  require_valid(sys, n);
  const int N = n.size();
  RatMatrix M;
  for (auto [w, cnt] : weight_layout(sys, n))
    for (int s = 0; s < cnt; ++s) {
      RatVec row(N + 1);
      for (int k = 0; k <= N; ++k) row[k] = rel_moment(sys, w, s + k);
      M.push_back(std::move(row));
    }
  auto ns = nullspace(M, N + 1);
  if (ns.size() != 1)
    throw RankDeficiency("type2_oracle: null space of dimension " + std::to_string(ns.size()) + " for " + n.str(),
                         ns.size());
  return Poly(ns[0]).normalized();
}

// ------------------------------------------------------------------- type I

struct TypeIResult {
  std::vector<Poly> polys;  // ordered as weight_layout
  Rat normalization = 1;    // first nonvanishing Mellin value matches the closed-form moment
  bool closed_form = false;
};

// Relative to Gamma(a+1)/Gamma(b+n+1): (a+1)_{s-1}/(b+n+1)_{s-1} (1-s)_{N-1}.
inline Rat type1_moment_formula(const ParamSystem& sys, const MultiIndex& n, long s) {
  if (s < 1) throw std::invalid_argument("type1_moment_formula: s must be >= 1");
  const int N = n.size();
  RatVec bn(sys.q());
  for (int j = 0; j < sys.q(); ++j) bn[j] = sys.b[j] + n.head[j] + 1;
  return poch(shifted(sys.a, 1), s - 1) / poch(bn, s - 1) * poch(Rat(1 - s), N - 1);
}

// Converts the formula above to the rel_moment convention, 1/(b+1)_n.
inline Rat type1_scale(const ParamSystem& sys, const MultiIndex& n) {
  Rat d = 1;
  for (int j = 0; j < sys.q(); ++j) d *= poch(sys.b[j] + 1, n.head[j]);
  return Rat(1) / d;
}

// sum_j int A_j(x) w_j(x) x^{s-1} dx in the rel_moment convention.
inline Rat combined_type1_moment(const ParamSystem& sys, const MultiIndex& n, const std::vector<Poly>& polys,
                                 long s) {
  auto layout = weight_layout(sys, n);
  Rat acc = 0;
  for (size_t u = 0; u < layout.size(); ++u)
    for (int k = 0; k <= polys[u].degree(); ++k) acc += polys[u][k] * rel_moment(sys, layout[u].first, s - 1 + k);
  return acc;
}

inline TypeIResult type1_oracle(const ParamSystem& sys, const MultiIndex& n) {
  require_valid(sys, n);
  auto layout = weight_layout(sys, n);
  const int N = n.size();
  std::vector<std::pair<WeightId, int>> unknowns;  // (weight, power)
  std::vector<size_t> owner;
  for (size_t u = 0; u < layout.size(); ++u)
    for (int k = 0; k < layout[u].second; ++k) {
      unknowns.push_back({layout[u].first, k});
      owner.push_back(u);
    }
  RatMatrix M;
  for (int s = 1; s <= N - 1; ++s) {
    RatVec row(N);
    for (int u = 0; u < N; ++u) row[u] = rel_moment(sys, unknowns[u].first, s - 1 + unknowns[u].second);
    M.push_back(std::move(row));
  }
  auto ns = nullspace(M, N);
  if (ns.size() != 1)
    throw RankDeficiency("type1_oracle: null space of dimension " + std::to_string(ns.size()) + " for " + n.str(),
                         ns.size());
  TypeIResult r;
  r.polys.assign(layout.size(), Poly());
  std::vector<RatVec> coefs(layout.size());
  for (size_t u = 0; u < layout.size(); ++u) coefs[u].assign(layout[u].second, Rat(0));
  for (int u = 0; u < N; ++u) coefs[owner[u]][unknowns[u].second] = ns[0][u];
  for (size_t u = 0; u < layout.size(); ++u) r.polys[u] = Poly(coefs[u]);
  Rat have = combined_type1_moment(sys, n, r.polys, N);
  Rat want = type1_moment_formula(sys, n, N) * type1_scale(sys, n);
  if (sgn(have) == 0) throw RankDeficiency("type1_oracle: degenerate normalization for " + n.str(), 1);
  for (auto& p : r.polys) p *= want / have;
  return r;
}

namespace detail {

inline Rat checked_div(const Rat& num, const Rat& den, const char* what) {
  if (sgn(den) == 0) throw std::domain_error(std::string("type1 closed form: vanishing ") + what);
  return num / den;
}

}  // namespace detail

// Coefficient P_{n,J}[K] of the partial fraction expansion (J 0-based).
inline Rat type1_pcoef(const ParamSystem& sys, const std::vector<int>& n, int J, int K) {
  const int N = std::accumulate(n.begin(), n.end(), 0);
  Rat num = poch(sys.b[J] + K + 1, N - 1);
  Rat den = factorial(K) * factorial(n[J] - K - 1);
  for (int i = 0; i < static_cast<int>(n.size()); ++i)
    if (i != J) den *= poch(sys.b[i] - sys.b[J] - K, n[i]);
  Rat v = detail::checked_div(num, den, "P-coefficient denominator");
  return K % 2 ? Rat(-v) : v;
}

// Closed form for the Jacobi and Bessel settings. When a_i == b_j the factor
// (a_i - b_j) of the prefactor is cancelled against the same factor in the
// inner denominator before evaluation, which is the removable limit.
inline TypeIResult type1_closed_form(const ParamSystem& sys, const MultiIndex& n) {
  const int r = sys.q();
  const auto& a = sys.a;
  const auto& b = sys.b;
  const auto& nn = n.head;
  TypeIResult res;
  res.closed_form = true;
  for (int j = 0; j < r; ++j) {
    RatVec coef(std::max(nn[j], 0), Rat(0));
    if (nn[j] == 0) {
      res.polys.emplace_back();
      continue;
    }
    Rat pref_den = 1;
    for (int i = 0; i < r; ++i)
      if (i != j) pref_den *= b[i] - b[j];
    for (int J = 0; J < r; ++J)
      for (int K = 0; K < nn[J]; ++K) {
        const Rat P = type1_pcoef(sys, nn, J, K);
        const int kmax = K - 1 + (J == j ? 1 : 0);
        for (int k = 0; k <= kmax; ++k) {
          Rat t = poch(b[j] - b[J] - K, k);
          for (int i = 0; i < r; ++i)
            if (i != j) t *= poch(b[i] - b[J] - K, k + 1);
          const bool cancel = (J == j && k == K);
          for (const auto& ai : a) {
            if (cancel) t = detail::checked_div(t, poch(ai - b[j] - K, K), "inner denominator");
            else t = detail::checked_div(t * (ai - b[j]), poch(ai - b[J] - K, k + 1), "inner denominator");
          }
          t = detail::checked_div(t, pref_den, "prefactor");
          if (k >= static_cast<int>(coef.size())) throw std::logic_error("type1 closed form: degree overflow");
          coef[k] += P * t;
        }
      }
    res.polys.emplace_back(coef);
  }
  return res;
}

inline TypeIResult type1_construct(const ParamSystem& sys, const MultiIndex& n, bool allow_oracle = true) {
  require_valid(sys, n);
  if (sys.setting() != Setting::Laguerre && sys.hypotheses().closed_form_type1()) return type1_closed_form(sys, n);
  if (!allow_oracle)
    throw std::invalid_argument("type1_construct: closed-form hypotheses fail for " + sys.str() +
                                " and the oracle fallback is disabled");
  return type1_oracle(sys, n);
}

// ------------------------------------------------------------- verification

inline Report verify_orthogonality(const TypeIIResult& res, const ParamSystem& sys, const MultiIndex& n) {
  Report rep;
  rep.subject = "type II " + n.str() + " " + sys.str();
  rep.add("degree " + std::to_string(res.poly.degree()), res.poly.degree() == n.size(),
          std::to_string(res.poly.degree() - n.size()));
  auto name_of = [](WeightId w) { return std::string(w.kind == WeightId::Kind::V ? "v" : "w") + std::to_string(w.j); };
  for (auto [w, cnt] : weight_layout(sys, n))
    for (int s = 0; s < cnt; ++s) {
      Rat acc = 0;
      for (int k = 0; k <= res.poly.degree(); ++k) acc += res.poly[k] * rel_moment(sys, w, s + k);
      rep.add_exact_zero(name_of(w) + " s=" + std::to_string(s), acc);
    }
  return rep;
}

inline Report verify_orthogonality(const TypeIResult& res, const ParamSystem& sys, const MultiIndex& n) {
  Report rep;
  rep.subject = "type I " + n.str() + " " + sys.str();
  auto layout = weight_layout(sys, n);
  for (size_t u = 0; u < layout.size(); ++u)
    rep.add("deg A_" + std::to_string(u + 1), res.polys[u].degree() <= layout[u].second - 1,
            std::to_string(res.polys[u].degree()));
  const int N = n.size();
  const Rat scale = type1_scale(sys, n);
  for (int s = 1; s <= 2 * N; ++s) {
    Rat diff = combined_type1_moment(sys, n, res.polys, s) - type1_moment_formula(sys, n, s) * scale;
    rep.add_exact_zero("moment s=" + std::to_string(s), diff);
  }
  return rep;
}

// ------------------------------------------------------------ Pearson data

struct PearsonData {
  RatVec c;  // Jacobi/Bessel: without the diagonal b_J term; Laguerre: sign included
  RatVec d;  // Laguerre only, d_0..d_{p-q-1}
};

inline void require_distinct_b(const ParamSystem& sys) {
  if (!sys.hypotheses().b_distinct) throw std::invalid_argument("pearson_data: repeated b entries");
}

inline PearsonData pearson_data(const ParamSystem& sys) {
  require_distinct_b(sys);
  PearsonData pd;
  const int q = sys.q();
  for (int j = 0; j < q; ++j) {
    Rat num = 1, den = 1;
    for (const auto& ai : sys.a) num *= ai - sys.b[j];
    for (int i = 0; i < q; ++i)
      if (i != j) den *= sys.b[i] - sys.b[j];
    Rat cj = num / den;
    pd.c.push_back(sys.setting() == Setting::Laguerre ? Rat(-cj) : cj);
  }
  if (sys.setting() == Setting::Laguerre) {
    // (s+a)_1/(s+b)_1 = -sum c_j/(s+b_j) - sum d_{j-1}(s-1)^{j-1} + (s-1)^{p-q}
    Poly numer = Poly::constant(1);
    for (const auto& ai : sys.a) numer = numer * Poly{ai, 1};
    std::vector<Pole> poles;
    for (const auto& bj : sys.b) poles.push_back({-bj, 1});
    const int pq = sys.p() - sys.q();
    PFDecomp pf = partial_fractions(numer, poles, pq, Rat(1));
    if (pf.polynomial_part[pq] != 1) throw std::logic_error("pearson_data: leading term of expansion is not 1");
    for (int k = 0; k < pq; ++k) pd.d.push_back(-pf.polynomial_part[k]);
  }
  return pd;
}

inline Report pearson_verify(const ParamSystem& sys, const PearsonData& pd) {
  Report rep;
  rep.subject = std::string("pearson ") + setting_name(sys.setting()) + " " + sys.str();
  const int smax = 2 * std::max(sys.p(), sys.q()) + 3;
  auto W = [&](int j, long s) { return rel_mellin(sys, WeightId::w(j), s); };
  if (sys.setting() == Setting::Laguerre) {
    const int pq = sys.p() - sys.q();
    auto V = [&](int j, long s) { return rel_mellin(sys, WeightId::v(j), s); };
    for (int s = 1; s <= smax; ++s) {
      Rat lhs = Rat(s - 1) * V(pq, s);
      Rat rhs = V(1, s + 1);
      for (int j = 1; j <= sys.q(); ++j) rhs += pd.c[j - 1] * W(j, s);
      for (int j = 1; j <= pq; ++j) rhs += pd.d[j - 1] * V(j, s);
      rep.add_exact_zero("s=" + std::to_string(s), lhs - rhs);
    }
    return rep;
  }
  // Jacobi, and Bessel with the extra base-weight term (see README).
  const bool bessel = sys.setting() == Setting::Bessel;
  for (int J = 1; J <= sys.q(); ++J)
    for (int s = 1; s <= smax; ++s) {
      Rat lhs = 0;
      for (int j = 1; j <= sys.q(); ++j) {
        Rat cj = pd.c[j - 1];
        if (j == J) cj += sys.b[J - 1] + s;
        lhs += cj * W(j, s);
      }
      Rat rhs = (sys.b[J - 1] + s + 1) * W(J, s + 1);
      if (bessel) rhs += rel_mellin(sys, WeightId::w0(), s);
      rep.add_exact_zero("J=" + std::to_string(J) + " s=" + std::to_string(s), lhs - rhs);
    }
  return rep;
}

}  // namespace hypmop
