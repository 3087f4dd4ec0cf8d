#pragma once

#include "infogeo/core.hpp"

#include <string_view>

namespace infogeo {

enum class MeasureVariant { simple, smooth };

MeasureVariant parse_variant(std::string_view name);
std::string_view to_string(MeasureVariant v);

/// Product reference probability measure mu_t(dx) = exp(l(x)) dx on R^d with
/// l(x) = sum_i (C - theta(|x_i|)).
///
/// theta(z) = c + z^t for z >= z_t. The simple variant has z_t = c = 0. The
/// smooth variant patches theta(z) = alpha (1 - cos(beta z)) on [0, z_t],
/// z_t = 2 - t, with beta and alpha fixed by C^1 matching at z_t; the patch
/// makes z -> theta(|z|) twice differentiable at the origin.
class ReferenceMeasure {
 public:
  /// Builds all matching constants and the normalizer C.
  /// Throws DomainError for t outside (0, 2], or simple with t < 1.
  static ReferenceMeasure make(double t, MeasureVariant variant);

  double exponent() const { return t_; }
  MeasureVariant variant() const { return variant_; }
  double patch_end() const { return z_; }       ///< z_t
  double offset() const { return c_; }          ///< c_t
  double log_normalizer() const { return C_; }  ///< C_t
  double amplitude() const { return alpha_; }   ///< alpha_t (smooth only)
  double frequency() const { return beta_; }    ///< beta_t (smooth only)
  bool has_patch() const { return z_ > 0.0; }

  double theta(double z) const;
  double theta_d1(double z) const;
  double theta_d2(double z) const;
  /// One-sided derivative limits at z_t, from the patch and from the power law.
  std::pair<double, double> theta_d1_at_patch_end() const;

  // Per-axis factors of l.
  double axis_log_density(double x) const { return C_ - theta(std::abs(x)); }
  double axis_dlog(double x) const;
  double axis_d2log(double x) const;

  double log_density(const Point& x) const;
  double density(const Point& x) const;
  /// At x_i = 0 for the simple t = 1 measure the kink has no derivative; the
  /// symmetric subgradient 0 is returned (see `is_kink`).
  Point grad_log_density(const Point& x) const;
  Point hess_log_density_diag(const Point& x) const;
  /// True if some coordinate sits on the simple t <= 1 kink at 0.
  bool is_kink(const Point& x) const;

  /// 2 * int_0^inf exp(C - theta(z)) dz - 1, by adaptive quadrature.
  double normalization_residual() const;

  struct ConvexityReport {
    bool theta_convex = true;
    bool neg_sqrt_theta_convex = true;
    double min_theta_d2 = 0.0;
    double min_neg_sqrt_theta_d2 = 0.0;
  };
  /// Samples theta'' and (-sqrt(theta))'' on (0, zmax] by second differences.
  ConvexityReport check_convexity(double zmax = 10.0, int samples = 4000) const;

 private:
  ReferenceMeasure() = default;
  double tail_integral() const;

  double t_ = 2.0;
  MeasureVariant variant_ = MeasureVariant::simple;
  double z_ = 0.0;
  double c_ = 0.0;
  double C_ = 0.0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

inline ReferenceMeasure make_reference(double t, MeasureVariant variant) {
  return ReferenceMeasure::make(t, variant);
}

}  // namespace infogeo
