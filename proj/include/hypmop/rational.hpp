#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hypmop {

using Rat = mpq_class;
using Int = mpz_class;
using RatVec = std::vector<Rat>;

inline Rat rat(long num, long den = 1) {
  if (den == 0) throw std::domain_error("rat: zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Accepts "p/q", integers and plain decimals such as "0.25" or "-1.5".
inline Rat parse_rat(std::string_view s) {
  std::string t(s);
  while (!t.empty() && t.front() == ' ') t.erase(t.begin());
  while (!t.empty() && t.back() == ' ') t.pop_back();
  if (t.empty()) throw std::invalid_argument("parse_rat: empty string");
  auto dot = t.find('.');
  Rat r;
  if (dot != std::string::npos) {
    if (t.find('/') != std::string::npos) throw std::invalid_argument("parse_rat: mixed '/' and '.': " + t);
    bool neg = t[0] == '-';
    std::string body = (neg || t[0] == '+') ? t.substr(1) : t;
    dot = body.find('.');
    std::string digits = body.substr(0, dot) + body.substr(dot + 1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("parse_rat: bad decimal: " + t);
    Int num(digits, 10);
    Int den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, body.size() - dot - 1);
    r = Rat(num, den);
    if (neg) r = -r;
  } else {
    if (t[0] == '+') t.erase(t.begin());
    if (r.set_str(t, 10) != 0) throw std::invalid_argument("parse_rat: bad rational: " + t);
    if (r.get_den() == 0) throw std::invalid_argument("parse_rat: zero denominator: " + t);
  }
  r.canonicalize();
  return r;
}

inline RatVec parse_rat_list(std::string_view s) {
  RatVec out;
  if (s.empty()) return out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t comma = s.find(',', start);
    if (comma == std::string_view::npos) comma = s.size();
    out.push_back(parse_rat(s.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

inline bool is_integer(const Rat& r) { return r.get_den() == 1; }

inline bool is_nonpos_integer(const Rat& r) { return is_integer(r) && sgn(r) <= 0; }

inline Int lcm_of_denominators(const RatVec& v) {
  Int l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

inline double to_double(const Rat& r) { return r.get_d(); }

// Two-term split so that long double keeps its extra bits.
inline long double to_ldouble(const Rat& r) {
  double hi = r.get_d();
  Rat rest = r - Rat(hi);
  return static_cast<long double>(hi) + static_cast<long double>(rest.get_d());
}

}  // namespace hypmop
