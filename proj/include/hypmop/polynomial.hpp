#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypmop/rational.hpp"

namespace hypmop {

// Dense polynomial over Q, coefficients in ascending order. The zero
// polynomial has an empty coefficient list and degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(RatVec coeffs) : c_(std::move(coeffs)) { trim(); }
  Poly(std::initializer_list<Rat> coeffs) : c_(coeffs) { trim(); }

  static Poly constant(const Rat& v) { return Poly(RatVec{v}); }
  static Poly monomial(int k, const Rat& v = 1) {
    RatVec c(k + 1, Rat(0));
    c[k] = v;
    return Poly(std::move(c));
  }
  // (x - root)
  static Poly linear_root(const Rat& root) { return Poly(RatVec{-root, Rat(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const RatVec& coeffs() const { return c_; }
  Rat operator[](int k) const { return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : Rat(0); }
  Rat leading() const { return c_.empty() ? Rat(0) : c_.back(); }

  void set(int k, const Rat& v) {
    if (k >= static_cast<int>(c_.size())) c_.resize(k + 1, Rat(0));
    c_[k] = v;
    trim();
  }

  Rat eval(const Rat& x) const {
    Rat acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    RatVec d(c_.size() - 1);
    for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
    return Poly(std::move(d));
  }

  // p(x + h), by repeated synthetic division.
  Poly taylor_shift(const Rat& h) const {
    RatVec a = c_;
    const int n = static_cast<int>(a.size());
    for (int i = 0; i < n - 1; ++i)
      for (int k = n - 2; k >= i; --k) a[k] += h * a[k + 1];
    return Poly(std::move(a));
  }

  // p(s * x)
  Poly scale_arg(const Rat& s) const {
    RatVec a = c_;
    Rat pw = 1;
    for (auto& v : a) {
      v *= pw;
      pw *= s;
    }
    return Poly(std::move(a));
  }

  Poly monic() const {
    if (is_zero()) throw std::domain_error("monic of zero polynomial");
    return *this * (Rat(1) / leading());
  }

  // Divide by the first nonzero coefficient.
  Poly normalized() const {
    if (is_zero()) return *this;
    auto it = std::find_if(c_.begin(), c_.end(), [](const Rat& v) { return sgn(v) != 0; });
    return *this * (Rat(1) / *it);
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }
  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
    for (size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) { return *this += -o; }
  Poly& operator*=(const Rat& s) {
    if (sgn(s) == 0) {
      c_.clear();
      return *this;
    }
    for (auto& v : c_) v *= s;
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Rat& s) { return a *= s; }
  friend Poly operator*(const Rat& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    RatVec r(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(r));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  // Quotient and remainder.
  friend std::pair<Poly, Poly> divmod(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw std::domain_error("polynomial division by zero");
    RatVec r = num.c_;
    const int dd = den.degree();
    if (num.degree() < dd) return {Poly(), num};
    RatVec q(num.degree() - dd + 1, Rat(0));
    const Rat lead = den.leading();
    for (int k = num.degree() - dd; k >= 0; --k) {
      Rat t = r[k + dd] / lead;
      q[k] = t;
      if (sgn(t) == 0) continue;
      for (int i = 0; i <= dd; ++i) r[k + i] -= t * den.c_[i];
    }
    return {Poly(std::move(q)), Poly(std::move(r))};
  }

  Poly pow(int e) const {
    Poly r = Poly::constant(1);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  std::string str(const std::string& var = "x") const {
    if (is_zero()) return "0";
    std::string out;
    for (size_t k = 0; k < c_.size(); ++k) {
      if (sgn(c_[k]) == 0) continue;
      if (!out.empty()) out += (sgn(c_[k]) < 0) ? " - " : " + ";
      else if (sgn(c_[k]) < 0) out += "-";
      Rat mag = abs(c_[k]);
      if (k == 0) out += to_string(mag);
      else {
        if (mag != 1) out += to_string(mag) + "*";
        out += var;
        if (k > 1) out += "^" + std::to_string(k);
      }
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
  }
  RatVec c_;
};

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

// Returns s with a == s*b when the two are proportional (b nonzero).
inline std::optional<Rat> proportionality(const Poly& a, const Poly& b) {
  if (b.is_zero()) return a.is_zero() ? std::optional<Rat>(Rat(1)) : std::nullopt;
  if (a.degree() != b.degree()) return std::nullopt;
  Rat s = a.leading() / b.leading();
  if (a == b * s) return s;
  return std::nullopt;
}

}  // namespace hypmop
