#pragma once

#include "infogeo/core.hpp"

#include <array>
#include <cstdint>
#include <cmath>
#include <span>

namespace infogeo::numerics {

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1] (QUADPACK constants).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> kronrod15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[i];
    const double s = f(c - dx) + f(c + dx);
    kronrod += kKronrodWeights[i] * s;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * s;
  }
  return {kronrod * h, std::abs((kronrod - gauss) * h)};
}

template <class F>
double adaptive(F& f, double a, double b, double whole, double tol, int depth) {
  auto [value, err] = kronrod15(f, a, b);
  if (err <= tol * std::max(std::abs(whole), 1e-300) || depth == 0 ||
      std::abs(b - a) < 1e-14 * std::max(1.0, std::abs(a))) {
    return value;
  }
  const double mid = 0.5 * (a + b);
  return adaptive(f, a, mid, whole, tol, depth - 1) +
         adaptive(f, mid, b, whole, tol, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (G7/K15) quadrature of f over [a, b].
template <class F>
double integrate(F f, double a, double b, double rel_tol = 1e-14,
                 int max_depth = 40) {
  const auto [whole, err] = detail::kronrod15(f, a, b);
  (void)err;
  return detail::adaptive(f, a, b, whole, rel_tol, max_depth);
}

/// Bisection on a sign-changing bracket, run to floating-point resolution.
template <class F>
double bisect(F f, double lo, double hi) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (!(flo * fhi < 0.0)) {
    throw NumericalError("bisect: bracket does not change sign");
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Finite-difference weights for the `order`-th derivative at x0 from samples
/// at `offsets` (Fornberg's recursion).
inline Vector fd_weights(int order, std::span<const double> offsets,
                         double x0 = 0.0) {
  const auto n = static_cast<Eigen::Index>(offsets.size());
  if (order < 0 || n <= order) {
    throw DomainError("fd_weights: need more points than the derivative order");
  }
  Matrix c = Matrix::Zero(n, order + 1);
  double c1 = 1.0;
  double c4 = offsets[0] - x0;
  c(0, 0) = 1.0;
  for (Eigen::Index i = 1; i < n; ++i) {
    const auto mn = std::min<Eigen::Index>(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = offsets[i] - x0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double c3 = offsets[i] - offsets[j];
      c2 *= c3;
      if (j == i - 1) {
        for (auto k = mn; k >= 1; --k) {
          c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        }
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (auto k = mn; k >= 1; --k) {
        c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      }
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c.col(order);
}

/// splitmix64 finalizer; used to derive independent per-trial seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace infogeo::numerics
