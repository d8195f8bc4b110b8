#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypmop/freeconv.hpp"
#include "hypmop/mop.hpp"

namespace hypmop {

using CMatrix = Eigen::MatrixXcd;

struct Factor {
  enum class Kind { Truncation, Ginibre };
  Kind kind = Kind::Ginibre;
  int rows = 1, cols = 1;
  int source_size = 0;  // Haar size, truncations only

  static Factor truncation(int rows, int cols, int source) { return {Kind::Truncation, rows, cols, source}; }
  static Factor ginibre(int rows, int cols) { return {Kind::Ginibre, rows, cols, 0}; }
  std::string str() const {
    std::string s = std::to_string(rows) + "x" + std::to_string(cols);
    return kind == Kind::Ginibre ? "G" + s : "T" + s + "/" + std::to_string(source_size);
  }
};

enum class EnsembleKind { TruncationOnly, Mixed, Custom };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::Custom;
  int n = 0;
  std::vector<Factor> factors;  // factors[0] acts first (rightmost in the product)
  std::vector<int> a, b, c;
  MultiIndex index;
  std::optional<ParamSystem> sys;  // absent for custom chains

  int p() const { return static_cast<int>(a.size() + c.size()); }
  int q() const { return static_cast<int>(b.size()); }
  std::string str() const {
    std::string s;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) s += (s.empty() ? "" : " * ") + it->str();
    return s;
  }
};

class EnsembleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::string ineq(const std::string& what, long lhs, const char* op, long rhs) {
  return what + ": " + std::to_string(lhs) + " " + op + " " + std::to_string(rhs) + " fails";
}

inline void check_chain(int n, const std::vector<Factor>& fs) {
  if (n < 1) throw EnsembleError("ensemble size n must be >= 1");
  if (fs.empty()) throw EnsembleError("ensemble needs at least one factor");
  if (fs.front().cols != n) throw EnsembleError(ineq("first factor cols == n", fs.front().cols, "==", n));
  for (size_t k = 0; k < fs.size(); ++k) {
    const auto& f = fs[k];
    const std::string tag = "factor " + std::to_string(k + 1);
    if (f.rows < n) throw EnsembleError(ineq(tag + " rows >= n", f.rows, ">=", n));
    if (k > 0 && f.cols != fs[k - 1].rows)
      throw EnsembleError(ineq(tag + " cols == previous rows", f.cols, "==", fs[k - 1].rows));
    if (f.kind == Factor::Kind::Truncation) {
      if (f.source_size < std::max(f.rows, f.cols))
        throw EnsembleError(ineq(tag + " source >= max(rows, cols)", f.source_size, ">=", std::max(f.rows, f.cols)));
      if (f.source_size < f.rows + 1)
        throw EnsembleError(ineq(tag + " source >= n + nu + 1", f.source_size, ">=", f.rows + 1));
    }
  }
}

inline void check_nonneg(const std::vector<int>& v, const char* name) {
  for (size_t j = 0; j < v.size(); ++j)
    if (v[j] < 0) throw EnsembleError(std::string(name) + "_" + std::to_string(j + 1) + " >= 0 fails");
}

inline RatVec to_rats(const std::vector<int>& v) { return RatVec(v.begin(), v.end()); }

}  // namespace detail

// Chain T_r ... T_1 with T_j a (n+a_j) x (n+a_{j-1}) block of a Haar unitary of
// size n+n_j+b_j, a_0 = 0.
inline EnsembleSpec build_truncation_ensemble(const std::vector<int>& idx, const std::vector<int>& a,
                                              const std::vector<int>& b) {
  const int r = static_cast<int>(idx.size());
  if (r < 1 || static_cast<int>(a.size()) != r || static_cast<int>(b.size()) != r)
    throw EnsembleError("truncation ensemble: index, a and b need the same length r >= 1");
  detail::check_nonneg(a, "a");
  detail::check_nonneg(b, "b");
  EnsembleSpec s;
  s.kind = EnsembleKind::TruncationOnly;
  s.index = MultiIndex(idx);
  s.n = s.index.size();
  s.a = a;
  s.b = b;
  const int n = s.n;
  for (int j = 0; j < r; ++j) {
    const int need = (j == 0 ? n - idx[0] : 0) + a[j];
    if (b[j] < need) throw EnsembleError(detail::ineq("b_" + std::to_string(j + 1) + " >= (n-n_1)[j=1] + a_j", b[j], ">=", need));
  }
  for (int j = 0; j < r; ++j)
    s.factors.push_back(Factor::truncation(n + a[j], n + (j ? a[j - 1] : 0), n + idx[j] + b[j]));
  detail::check_chain(n, s.factors);
  s.sys = ParamSystem(detail::to_rats(a), detail::to_rats(b));
  require_valid(*s.sys, s.index);
  return s;
}

// Chain T_q ... T_1 G_{p-q} ... G_1 with G_j of size (n+c_j) x (n+c_{j-1}),
// c_0 = 0, and T_j as above with a_0 = c_{p-q}.
inline EnsembleSpec build_mixed_ensemble(const std::vector<int>& nidx, const std::vector<int>& midx,
                                         const std::vector<int>& a, const std::vector<int>& b,
                                         const std::vector<int>& c) {
  const int q = static_cast<int>(nidx.size()), g = static_cast<int>(midx.size());
  if (g < 1) throw EnsembleError("mixed ensemble needs at least one Ginibre factor");
  if (static_cast<int>(a.size()) != q || static_cast<int>(b.size()) != q || static_cast<int>(c.size()) != g)
    throw EnsembleError("mixed ensemble: a, b need length q and c length p-q");
  detail::check_nonneg(a, "a");
  detail::check_nonneg(b, "b");
  detail::check_nonneg(c, "c");
  for (int j = 0; j < q; ++j)
    if (a[j] > b[j]) throw EnsembleError(detail::ineq("a_" + std::to_string(j + 1) + " <= b_" + std::to_string(j + 1), a[j], "<=", b[j]));
  EnsembleSpec s;
  s.kind = EnsembleKind::Mixed;
  s.index = MultiIndex(nidx, midx);
  s.n = s.index.size();
  s.a = a;
  s.b = b;
  s.c = c;
  const int n = s.n;
  for (int j = 0; j < g; ++j) s.factors.push_back(Factor::ginibre(n + c[j], n + (j ? c[j - 1] : 0)));
  for (int j = 0; j < q; ++j)
    s.factors.push_back(Factor::truncation(n + a[j], n + (j ? a[j - 1] : c[g - 1]), n + nidx[j] + b[j]));
  detail::check_chain(n, s.factors);
  RatVec ac = detail::to_rats(a);
  for (int x : c) ac.push_back(x);
  s.sys = ParamSystem(ac, detail::to_rats(b));
  require_valid(*s.sys, s.index);
  return s;
}

// Any compatible chain; no polynomial prediction attached.
inline EnsembleSpec build_custom_ensemble(int n, std::vector<Factor> factors) {
  detail::check_chain(n, factors);
  EnsembleSpec s;
  s.kind = EnsembleKind::Custom;
  s.n = n;
  s.factors = std::move(factors);
  return s;
}

// Monic average characteristic polynomial predicted for the chain.
inline Poly predicted_charpoly(const EnsembleSpec& s) {
  if (!s.sys) throw std::invalid_argument("predicted_charpoly: custom chain has no prediction");
  return type2_construct(*s.sys, s.index, Normalization::Monic).poly;
}

// ------------------------------------------------------------------ sampling

using Rng = std::mt19937_64;

inline Rng substream(std::uint64_t seed, std::uint64_t shard) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shard), static_cast<std::uint32_t>(shard >> 32)};
  return Rng(seq);
}

// Entries with independent N(0, 1/2) real and imaginary parts.
inline CMatrix sample_ginibre(int rows, int cols, Rng& rng) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("sample_ginibre: dimensions must be >= 1");
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  CMatrix g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = nd(rng);
      g(i, j) = {re, nd(rng)};
    }
  return g;
}

inline CMatrix sample_haar(int m, Rng& rng) {
  CMatrix z = sample_ginibre(m, m, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < m; ++j) {
    const double ar = std::abs(r(j, j));
    if (ar > 0) q.col(j) *= r(j, j) / ar;
  }
  return q;
}

inline CMatrix sample_truncation(int rows, int cols, int source, Rng& rng) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("sample_truncation: dimensions must be >= 1");
  if (source < std::max(rows, cols)) throw std::invalid_argument("sample_truncation: source size below block size");
  return sample_haar(source, rng).topLeftCorner(rows, cols);
}

inline CMatrix sample_factor(const Factor& f, Rng& rng) {
  return f.kind == Factor::Kind::Ginibre ? sample_ginibre(f.rows, f.cols, rng)
                                         : sample_truncation(f.rows, f.cols, f.source_size, rng);
}

inline CMatrix sample_product(const EnsembleSpec& s, Rng& rng) {
  CMatrix y = sample_factor(s.factors.front(), rng);
  for (size_t k = 1; k < s.factors.size(); ++k) y = sample_factor(s.factors[k], rng) * y;
  return y;
}

// Squared singular values, ascending.
inline std::vector<double> sq_singvals(const CMatrix& y) {
  Eigen::VectorXd sv = Eigen::BDCSVD<CMatrix>(y).singularValues();
  std::vector<double> out(sv.size());
  for (int i = 0; i < sv.size(); ++i) out[i] = sv[i] * sv[i];
  std::sort(out.begin(), out.end());
  return out;
}

struct SampleBatch {
  std::uint64_t seed = 0;
  int count = 0;
  std::vector<std::vector<double>> values;  // per draw, ascending
};

// Draw i uses substream (seed, i), so any sharding of the draws reproduces the batch.
inline SampleBatch sample_sq_singvals(const EnsembleSpec& s, int batch, std::uint64_t seed) {
  if (batch < 1) throw std::invalid_argument("sample_sq_singvals: batch must be >= 1");
  SampleBatch out;
  out.seed = seed;
  out.count = batch;
  out.values.reserve(batch);
  for (int i = 0; i < batch; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    out.values.push_back(sq_singvals(sample_product(s, rng)));
  }
  return out;
}

// Ascending coefficients of prod (x - x_j).
inline std::vector<double> monic_from_roots(const std::vector<double>& xs) {
  std::vector<double> c{1.0};
  for (double x : xs) {
    c.insert(c.begin(), 0.0);
    for (size_t k = 0; k + 1 < c.size(); ++k) c[k] -= x * c[k + 1];
  }
  return c;
}

struct CharPolyEstimate {
  int samples = 0;
  std::vector<double> mean;    // ascending, monic
  std::vector<double> stderr_;  // per coefficient
};

inline CharPolyEstimate mc_avg_charpoly(const EnsembleSpec& s, int batch, std::uint64_t seed) {
  if (batch < 2) throw std::invalid_argument("mc_avg_charpoly: batch must be >= 2");
  const int d = s.n + 1;
  std::vector<double> mean(d, 0.0), m2(d, 0.0);
  for (int i = 0; i < batch; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    auto c = monic_from_roots(sq_singvals(sample_product(s, rng)));
    for (int k = 0; k < d; ++k) {
      const double delta = c[k] - mean[k];
      mean[k] += delta / (i + 1);
      m2[k] += delta * (c[k] - mean[k]);
    }
  }
  CharPolyEstimate e;
  e.samples = batch;
  e.mean = mean;
  e.stderr_.resize(d);
  for (int k = 0; k < d; ++k) e.stderr_[k] = std::sqrt(m2[k] / (batch - 1) / batch);
  return e;
}

struct CharPolyComparison {
  double max_z = 0;                // max |mean - predicted| / stderr over non-degenerate coefficients
  std::vector<double> z;           // per coefficient; 0 where stderr vanishes and the match is exact
  bool within(double sigmas) const { return max_z <= sigmas; }
};

inline CharPolyComparison compare_charpoly(const CharPolyEstimate& e, const Poly& predicted_monic) {
  if (predicted_monic.degree() + 1 != static_cast<int>(e.mean.size()))
    throw std::invalid_argument("compare_charpoly: degree mismatch");
  CharPolyComparison out;
  for (size_t k = 0; k < e.mean.size(); ++k) {
    const double diff = std::fabs(e.mean[k] - predicted_monic[static_cast<int>(k)].get_d());
    double z;
    if (e.stderr_[k] > 0) z = diff / e.stderr_[k];
    else z = diff <= 1e-12 * (1 + std::fabs(e.mean[k])) ? 0.0 : INFINITY;
    out.z.push_back(z);
    out.max_z = std::max(out.max_z, z);
  }
  return out;
}

struct SpectrumComparison {
  int samples = 0;
  double scale = 1;     // values were divided by this
  double ks = 0;        // upper bound on the KS distance
  double ks_lower = 0;  // lower bound; equal to ks when every point is a CDF node
};

// KS distance between pooled squared singular values divided by n^{p-q} and
// the model CDF. The CDF is evaluated at up to max_nodes sorted sample points;
// monotonicity brackets it in between, which gives the two bounds.
inline SpectrumComparison ks_against_model(std::vector<double> xs, const DensityModel& model,
                                           const QuadConfig& cfg = {}, int max_nodes = 400) {
  if (xs.empty()) throw std::invalid_argument("ks_against_model: no samples");
  std::sort(xs.begin(), xs.end());
  const auto iv = support(model);
  auto cdf = [&](double x) {
    if (x <= iv.lo) return 0.0;
    if (x >= iv.hi * (1 - 1e-9)) return 1.0;  // atoms at the right edge sample as 1 - O(eps)
    return density_cdf(model, x, cfg);
  };
  const size_t N = xs.size();
  const size_t stride = std::max<size_t>(1, (N + max_nodes - 1) / max_nodes);
  std::vector<size_t> nodes;
  for (size_t i = 0; i < N; i += stride) nodes.push_back(i);
  if (nodes.back() != N - 1) nodes.push_back(N - 1);
  std::vector<double> F(nodes.size());
  for (size_t k = 0; k < nodes.size(); ++k) F[k] = cdf(xs[nodes[k]]);
  SpectrumComparison out;
  out.samples = static_cast<int>(N);
  const double n = static_cast<double>(N);
  size_t k = 0;
  for (size_t i = 0; i < N; ++i) {
    while (k + 1 < nodes.size() && nodes[k + 1] <= i) ++k;
    const bool at_node = nodes[k] == i;
    const double lo = F[k], hi = at_node ? F[k] : F[k + 1];
    out.ks = std::max({out.ks, hi - i / n, (i + 1) / n - lo});
    out.ks_lower = std::max({out.ks_lower, lo - i / n, (i + 1) / n - hi});
  }
  return out;
}

inline SpectrumComparison compare_spectrum(const EnsembleSpec& s, int batch, std::uint64_t seed,
                                           const DensityModel& model, const QuadConfig& cfg = {},
                                           int max_nodes = 400) {
  const int pq = s.kind == EnsembleKind::Custom ? 0 : s.p() - s.q();
  const double scale = std::pow(static_cast<double>(s.n), pq);
  std::vector<double> xs;
  for (const auto& v : sample_sq_singvals(s, batch, seed).values)
    for (double x : v) xs.push_back(x / scale);
  auto out = ks_against_model(std::move(xs), model, cfg, max_nodes);
  out.scale = scale;
  return out;
}

}  // namespace hypmop
