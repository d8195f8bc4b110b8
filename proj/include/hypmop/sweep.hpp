#pragma once

#include <random>
#include <utility>
#include <vector>

#include "hypmop/freeconv.hpp"
#include "hypmop/mop.hpp"
#include "hypmop/random_params.hpp"

namespace hypmop {

inline const std::vector<std::pair<int, int>>& default_settings() {
  static const std::vector<std::pair<int, int>> s = {{1, 1}, {2, 2}, {1, 0}, {2, 1}, {3, 1}, {0, 1}, {1, 2}, {2, 3}};
  return s;
}

inline std::vector<ParamSystem> default_sweep(std::uint64_t seed = 2024, int draws = 3) {
  std::mt19937_64 rng(seed);
  std::vector<ParamSystem> out;
  for (auto [p, q] : default_settings())
    for (int d = 0; d < draws; ++d) out.push_back(random_system(rng, p, q));
  return out;
}

struct VerifyOptions {
  bool type2 = true, type1 = true, decomposition = true, pearson = true;
};

// Exact checks for every near-diagonal index of size <= max_size: type II
// orthogonality and oracle agreement, type I moments, the convolution
// decompositions and the Pearson relations.
inline Report verify_system(const ParamSystem& sys, int max_size, VerifyOptions opt = {}) {
  Report rep;
  rep.subject = std::string(setting_name(sys.setting())) + " " + sys.str();
  const bool laguerre = sys.setting() == Setting::Laguerre;
  for (const auto& n : near_diagonal_indices(sys, max_size)) {
    const std::string tag = "n=" + n.str() + " ";
    if (opt.type2) {
      auto t2 = type2_construct(sys, n);
      for (const auto& c : verify_orthogonality(t2, sys, n).checks) rep.checks.push_back({tag + "type II " + c.name, c.passed, c.residual});
      rep.add(tag + "type II equals oracle up to scalar", proportionality(type2_oracle(sys, n), t2.poly).has_value(), "");
    }
    if (opt.type1 && (laguerre || sys.hypotheses().closed_form_type1())) {
      auto t1 = type1_construct(sys, n, laguerre);
      for (const auto& c : verify_orthogonality(t1, sys, n).checks) rep.checks.push_back({tag + "type I " + c.name, c.passed, c.residual});
    }
    if (opt.decomposition) {
      auto d = verify_decomposition(sys, n);
      for (const auto& c : d.report.checks) rep.checks.push_back({tag + c.name, c.passed, c.residual});
    }
  }
  if (opt.pearson && sys.hypotheses().b_distinct) rep.append(pearson_verify(sys, pearson_data(sys)));
  return rep;
}

}  // namespace hypmop
