#include "infogeo/deformed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace infogeo {

Family parse_family(std::string_view name) {
  if (name == "balanced") return Family::balanced;
  if (name == "kaniadakis") return Family::kaniadakis;
  throw DomainError("unknown deformed family '" + std::string(name) + "'");
}

std::string_view to_string(Family f) {
  return f == Family::balanced ? "balanced" : "kaniadakis";
}

namespace {

using Poly = std::vector<__int128>;

__int128 checked_mul(__int128 a, __int128 b) {
  __int128 r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw NumericalError("rational derivative coefficients overflow");
  }
  return r;
}

__int128 checked_add(__int128 a, __int128 b) {
  __int128 r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw NumericalError("rational derivative coefficients overflow");
  }
  return r;
}

Poly mul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = checked_add(r[i + j], checked_mul(a[i], b[j]));
  return r;
}

Poly add(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = checked_add(a[i], b[i]);
  return a;
}

Poly scale(Poly a, __int128 s) {
  for (auto& c : a) c = checked_mul(c, s);
  return a;
}

Poly trim(Poly a) {
  while (a.size() > 1 && a.back() == 0) a.pop_back();
  return a;
}

Poly derive(const Poly& a) {
  if (a.size() <= 1) return Poly{0};
  Poly r(a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = checked_mul(a[i], i);
  return r;
}

double horner(const Poly& p, double y) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    acc = acc * y + static_cast<double>(*it);
  }
  return acc;
}

std::vector<RationalFunction> build_table(Family family) {
  RationalFunction first;
  if (family == Family::balanced) {
    first = {Poly{0, 1}, Poly{1, 1}, 1};  // y / (1 + y)
  } else {
    first = {Poly{0, 0, 2}, Poly{1, 0, 1}, 1};  // 2 y^2 / (1 + y^2)
  }
  std::vector<RationalFunction> table{first};
  for (int n = 2; n <= DeformedExp::kMaxOrder; ++n) {
    table.push_back(table.back().derivative().times(first));
  }
  return table;
}

const std::vector<RationalFunction>& table_for(Family family) {
  static const std::vector<RationalFunction> balanced = build_table(Family::balanced);
  static const std::vector<RationalFunction> kaniadakis =
      build_table(Family::kaniadakis);
  return family == Family::balanced ? balanced : kaniadakis;
}

// Solve e^w + w = 1 + a for w = log psi(a) by Newton, falling back to
// bisection on the bracket derived from the definition of log_d.
double balanced_psi_newton(double a) {
  if (std::isnan(a)) return a;
  if (a == std::numeric_limits<double>::infinity()) return a;
  double lo, hi;
  if (a >= 0.0) {
    lo = std::log1p(0.5 * a);
    hi = std::log1p(a);
  } else {
    lo = a;
    hi = 0.5 * a;
  }
  double w;
  if (a > 2.0) {
    const double y = 1.0 + a - std::log1p(a);
    w = std::log(y);
  } else if (a < -2.0) {
    w = a + 1.0 - std::exp(a + 1.0);
  } else {
    w = 0.5 * a;  // log_d is ~2(y-1) near y = 1
  }
  w = std::clamp(w, lo, hi);
  const double target = 1.0 + a;
  for (int it = 0; it < 100; ++it) {
    const double ew = std::exp(w);
    const double g = ew + w - target;
    if (g > 0.0) hi = std::min(hi, w); else lo = std::max(lo, w);
    double next = w - g / (ew + 1.0);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - w);
    w = next;
    if (step <= 4e-16 * std::max(1.0, std::abs(w)) || lo >= hi) break;
  }
  return std::exp(w);
}

// Fritsch's iteration for y + log y = c (y = W(e^c)), from Winitzki's global
// approximation. Returns NaN when the result cannot be certified.
double balanced_psi_fast(double a) {
  const double c = 1.0 + a;
  const double L = c > 0.0 ? c + std::log1p(std::exp(-c)) : std::log1p(std::exp(c));
  if (!(L > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  double y = L * (1.0 - std::log1p(L) / (2.0 + L));
  for (int it = 0; it < 4; ++it) {
    const double z = c - std::log(y) - y;
    const double q = 2.0 * (1.0 + y) * (1.0 + y + 2.0 * z / 3.0);
    const double eps = z / (1.0 + y) * (q - z) / (q - 2.0 * z);
    y *= 1.0 + eps;
    // quartic convergence: the next correction would be below rounding
    if (std::abs(eps) <= 1e-4) break;
  }
  return y;
}

double balanced_psi(double a) {
  if (std::isnan(a)) return a;
  if (a == std::numeric_limits<double>::infinity()) return a;
  if (a == 0.0) return 1.0;
  const double y = balanced_psi_fast(a);
  // accept only inside the analytic bracket and at full accuracy
  const bool in_bracket = a >= 0.0 ? (y >= 1.0 + 0.5 * a && y <= 1.0 + a)
                                   : (y >= std::exp(a) && y <= std::exp(0.5 * a));
  if (in_bracket && std::abs(y - 1.0 + std::log(y) - a) <= 1e-13 * std::max(1.0, std::abs(a))) {
    return y;
  }
  return balanced_psi_newton(a);
}

}  // namespace

double RationalFunction::operator()(double y) const {
  const double b = horner(base, y);
  double den = 1.0;
  for (int i = 0; i < exponent; ++i) den *= b;
  return horner(numerator, y) / den;
}

RationalFunction RationalFunction::derivative() const {
  // (P / B^e)' = (P' B - e P B') / B^(e+1)
  Poly top = add(mul(derive(numerator), base),
                 scale(mul(numerator, derive(base)), -exponent));
  return {trim(std::move(top)), base, exponent + 1};
}

RationalFunction RationalFunction::times(const RationalFunction& other) const {
  return {trim(mul(numerator, other.numerator)), base, exponent + other.exponent};
}

DeformedExp::DeformedExp(Family family)
    : family_(family), table_(&table_for(family)) {}

double DeformedExp::log(double y) const {
  if (!(y > 0.0)) {
    throw DomainError("deformed logarithm needs y > 0, got " + std::to_string(y));
  }
  if (family_ == Family::balanced) return y - 1.0 + std::log(y);
  return 0.5 * (y - 1.0 / y);
}

double DeformedExp::psi(double a) const {
  if (family_ == Family::balanced) return balanced_psi(a);
  const double root = std::hypot(1.0, a);
  return a >= 0.0 ? a + root : 1.0 / (root - a);
}

const RationalFunction& DeformedExp::rational(int n) const {
  if (n < 1 || n > kMaxOrder) {
    throw DomainError("derivative order must be in 1.." +
                      std::to_string(kMaxOrder) + ", got " + std::to_string(n));
  }
  return (*table_)[n - 1];
}

double DeformedExp::deriv_at_value(int n, double y) const {
  if (n == 0) return y;
  return rational(n)(y);
}

double DeformedExp::deriv(int n, double a) const {
  return deriv_at_value(n, psi(a));
}

double transition_tau(double z) {
  static const DeformedExp balanced(Family::balanced);
  static const DeformedExp kaniadakis(Family::kaniadakis);
  return balanced.log(kaniadakis.psi(z));
}

}  // namespace infogeo
