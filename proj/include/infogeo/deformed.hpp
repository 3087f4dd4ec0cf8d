#pragma once

#include "infogeo/core.hpp"

#include <string_view>
#include <vector>

namespace infogeo {

enum class Family { balanced, kaniadakis };

Family parse_family(std::string_view name);
std::string_view to_string(Family f);

/// P(y) / B(y)^e with integer coefficients; B is 1 + y (balanced) or 1 + y^2
/// (Kaniadakis). Coefficients are stored lowest degree first.
struct RationalFunction {
  std::vector<__int128> numerator;
  std::vector<__int128> base;
  int exponent = 0;

  double operator()(double y) const;
  /// d/dy of this function, in the same representation.
  RationalFunction derivative() const;
  /// Product with another rational function sharing the same base.
  RationalFunction times(const RationalFunction& other) const;
};

/// A deformed exponential psi with its deformed logarithm and exact
/// derivatives of every order up to kMaxOrder.
///
/// Balanced: log_d(y) = y - 1 + log(y), psi = log_d^{-1}, psi' = psi/(1+psi).
/// Kaniadakis: log_K(y) = (y^2 - 1)/(2y), psi_K(z) = z + sqrt(1 + z^2),
/// psi_K' = 2 psi_K^2/(1 + psi_K^2).
///
/// Derivatives are rational functions of psi: R_{n+1} = R_n' * R_1, built once
/// per family and shared. Evaluation is pure and thread-safe.
class DeformedExp {
 public:
  static constexpr int kMaxOrder = 12;

  explicit DeformedExp(Family family = Family::balanced);

  Family family() const { return family_; }

  double log(double y) const;
  double psi(double a) const;
  /// n-th derivative of psi at a; n = 0 gives psi itself.
  double deriv(int n, double a) const;
  /// n-th derivative expressed through the value y = psi(a).
  double deriv_at_value(int n, double y) const;
  const RationalFunction& rational(int n) const;

  template <class Derived>
  Vector psi(const Eigen::MatrixBase<Derived>& a) const {
    return a.unaryExpr([this](double v) { return psi(v); }).eval();
  }
  template <class Derived>
  Vector log(const Eigen::MatrixBase<Derived>& y) const {
    return y.unaryExpr([this](double v) { return log(v); }).eval();
  }
  /// Derivative field psi^{(n)}(a) from precomputed values y = psi(a).
  template <class Derived>
  Vector deriv_at_value(int n, const Eigen::MatrixBase<Derived>& y) const {
    return y.unaryExpr([this, n](double v) { return deriv_at_value(n, v); }).eval();
  }

 private:
  Family family_;
  const std::vector<RationalFunction>* table_;
};

/// Balanced-chart value of the Kaniadakis exponential: log_d(psi_K(z)).
double transition_tau(double z);

}  // namespace infogeo
