#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "hypmop/rational.hpp"

namespace hypmop {

struct Check {
  std::string name;
  bool passed = false;
  std::string residual;  // exact "num/den" for exact checks, %.17g otherwise
};

struct Report {
  std::string subject;
  std::vector<Check> checks;

  bool ok() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  void add(std::string name, bool passed, std::string residual) {
    checks.push_back({std::move(name), passed, std::move(residual)});
  }
  void add_exact_zero(std::string name, const Rat& residual) {
    checks.push_back({std::move(name), sgn(residual) == 0, to_string(residual)});
  }
  void append(const Report& other) {
    for (const auto& c : other.checks) checks.push_back({other.subject.empty() ? c.name : other.subject + ": " + c.name, c.passed, c.residual});
  }
  const Check* first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return &c;
    return nullptr;
  }
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace hypmop
