#pragma once

#include "infogeo/deformed.hpp"
#include "infogeo/measure.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace infogeo {

/// Smooth step: 1 on [0, 1/2], 0 on [1, inf), built from exp(-1/s).
double bump_transition(double s);
/// phi(y) = y S(|y|): equal to y for |y| <= 1/2, zero for |y| >= 1.
double bump(double y);

/// Series a = zeta1 + sum_n alpha^n phi(n (x - sigma_n)) on the line, with
/// sigma_n = n^{1/t} and alpha = exp(2 / ((k' + 1) lambda - 1)), k' = k unless
/// alpha_order overrides it.
struct CounterexampleConfig {
  int k = 2;
  double lambda = 2.0;
  double t = 1.0;
  MeasureVariant variant = MeasureVariant::simple;
  int m = 2;       ///< first index; must exceed z_t + 1
  int terms = 30;  ///< n = m .. m + terms - 1
  double zeta1 = -1.0;
  double zeta2 = -0.1;
  int nodes = 401;  ///< local subgrid size per term (odd)
  std::optional<int> alpha_order;
  Family family = Family::balanced;
};

struct DahlbergTerm {
  int n;
  double sigma;
  double A;  ///< sum_{j <= k} E_mu |D^j (alpha^n phi(n(x - sigma_n)))|^lambda
  double B;  ///< E_mu |D^k psi(a)|^lambda restricted to T_n
  double ratio_A;  ///< A_n / A_{n-1}; NaN for the first term
  double ratio_B;
  double partial_A;  ///< sum of A up to n
  double partial_B;
  /// Ratios with the polynomial factor (n / (n-1))^{k lambda - 1} divided out.
  double compensated_A;
  double compensated_B;
};

struct DahlbergSeries {
  CounterexampleConfig config;
  double alpha = 0.0;
  double epsilon = 0.0;  ///< min |psi^(k)| sampled on [zeta1, zeta2]
  double limit_A = 0.0;  ///< alpha^lambda / e
  double limit_B = 0.0;  ///< alpha^{k lambda - 1} / e
  std::vector<DahlbergTerm> terms;
};

/// Per-term contributions, each integrated by Simpson's rule on a local
/// subgrid and checked against the same rule on the once-refined subgrid
/// (NumericalError on more than 1% disagreement). Supports are checked to be
/// disjoint first.
DahlbergSeries dahlberg_terms(const CounterexampleConfig& cfg);

struct EmbeddingTrendConfig {
  int k = 2;
  double lambda = 1.0;
  int samples = 10;
  int n0 = 601;  ///< coarsest grid; levels n0, 2 n0 - 1, 4 n0 - 3
  int levels = 3;
  double L = 30.0;
  double t = 1.0;
  MeasureVariant variant = MeasureVariant::smooth;
  double amplitude = 1.0;
  std::uint64_t seed = 1;
  double growth_tol = 0.01;
  bool include_zero = false;  ///< sample 0 is a = 0
};

struct EmbeddingSample {
  std::vector<double> norms;  ///< ||psi(a)|| in W^{k,(nu,...,nu)} per level
  double gf_norm = 0.0;       ///< ||a|| in W^{k,(lambda,...,lambda)} on the finest grid
  double growth = 0.0;        ///< relative change between the two finest levels
};

struct EmbeddingTrend {
  double nu = 0.0;
  std::vector<int> grid_sizes;
  std::vector<EmbeddingSample> samples;
  double max_growth = 0.0;
  bool bounded = false;
};

/// nu = (lambda + 1) / k. Requires k in {2, 3} and lambda >= k - 1.
EmbeddingTrend nu_embedding_trend(const EmbeddingTrendConfig& cfg);

}  // namespace infogeo
