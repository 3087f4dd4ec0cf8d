#include "infogeo/measure.hpp"

#include "infogeo/numerics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace infogeo {

MeasureVariant parse_variant(std::string_view name) {
  if (name == "simple") return MeasureVariant::simple;
  if (name == "smooth") return MeasureVariant::smooth;
  throw DomainError("unknown measure variant '" + std::string(name) + "'");
}

std::string_view to_string(MeasureVariant v) {
  return v == MeasureVariant::simple ? "simple" : "smooth";
}

ReferenceMeasure ReferenceMeasure::make(double t, MeasureVariant variant) {
  if (!(t > 0.0 && t <= 2.0)) {
    throw DomainError("measure exponent t must lie in (0, 2], got " +
                      std::to_string(t));
  }
  if (variant == MeasureVariant::simple && t < 1.0) {
    throw DomainError("simple reference measure requires t in [1, 2]");
  }
  ReferenceMeasure m;
  m.t_ = t;
  m.variant_ = variant;
  if (variant == MeasureVariant::smooth && t < 2.0) {
    m.z_ = 2.0 - t;
    double w;  // beta * z_t, root of (t-1) tan w = w in (0, pi)
    if (t == 1.0) {
      w = 0.5 * std::numbers::pi;
    } else {
      // (t-1) sin w - w cos w has the same roots away from pi/2 and no pole.
      auto f = [t](double x) { return (t - 1.0) * std::sin(x) - x * std::cos(x); };
      const double half = 0.5 * std::numbers::pi;
      w = t > 1.0 ? numerics::bisect(f, 1e-6, half)
                  : numerics::bisect(f, half, std::numbers::pi);
      if (!(w > 0.0 && w < std::numbers::pi)) {
        throw NumericalError("smooth measure: tan-equation root not found");
      }
    }
    m.beta_ = w / m.z_;
    m.alpha_ = t * std::pow(m.z_, t - 1.0) / (m.beta_ * std::sin(w));
    m.c_ = m.alpha_ * (1.0 - std::cos(w)) - std::pow(m.z_, t);
  }
  // z_t = 2 - t = 0 for t = 2: the smooth variant coincides with the simple one.
  m.C_ = -std::log(2.0 * m.tail_integral());
  return m;
}

double ReferenceMeasure::tail_integral() const {
  // int_0^inf exp(-theta(z)) dz. The power-law part is mapped by w = z^t.
  double patch = 0.0;
  if (has_patch()) {
    patch = numerics::integrate(
        [this](double z) { return std::exp(-alpha_ * (1.0 - std::cos(beta_ * z))); },
        0.0, z_);
  }
  const double w0 = std::pow(z_, t_);
  auto power = [this](double w) {
    return std::exp(-c_ - w) * std::pow(w, 1.0 / t_ - 1.0) / t_;
  };
  double tail = 0.0;
  // Integrand of w has an integrable singularity at 0 when t > 1 and w0 = 0.
  double lo = w0;
  if (lo == 0.0) {
    // int_0^eps w^(1/t-1) e^{-w} / t dw handled on a geometric sequence of panels.
    double hi = 1.0;
    for (int i = 0; i < 60; ++i) {
      const double a = hi * 0.5;
      tail += numerics::integrate(power, a, hi);
      hi = a;
    }
    tail += std::pow(hi, 1.0 / t_) * std::exp(-c_);  // remaining sliver, O(hi^(1/t))
    lo = 1.0;
  }
  for (double a = lo; a < lo + 800.0; a += 8.0) {
    tail += numerics::integrate(power, a, a + 8.0);
  }
  return patch + tail;
}

double ReferenceMeasure::theta(double z) const {
  if (z < z_) return alpha_ * (1.0 - std::cos(beta_ * z));
  return c_ + std::pow(z, t_);
}

double ReferenceMeasure::theta_d1(double z) const {
  if (z < z_) return alpha_ * beta_ * std::sin(beta_ * z);
  if (z == 0.0) return t_ == 1.0 ? 1.0 : 0.0;  // right derivative
  return t_ * std::pow(z, t_ - 1.0);
}

double ReferenceMeasure::theta_d2(double z) const {
  if (z < z_) return alpha_ * beta_ * beta_ * std::cos(beta_ * z);
  if (t_ == 1.0) return 0.0;
  if (t_ == 2.0) return 2.0;
  if (z == 0.0) return std::numeric_limits<double>::infinity();
  return t_ * (t_ - 1.0) * std::pow(z, t_ - 2.0);
}

std::pair<double, double> ReferenceMeasure::theta_d1_at_patch_end() const {
  const double left = alpha_ * beta_ * std::sin(beta_ * z_);
  const double right = z_ > 0.0 ? t_ * std::pow(z_, t_ - 1.0) : theta_d1(0.0);
  return {left, right};
}

double ReferenceMeasure::axis_dlog(double x) const {
  if (x == 0.0) return 0.0;
  const double s = x > 0.0 ? 1.0 : -1.0;
  return -s * theta_d1(std::abs(x));
}

double ReferenceMeasure::axis_d2log(double x) const {
  return -theta_d2(std::abs(x));
}

double ReferenceMeasure::log_density(const Point& x) const {
  double l = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) l += axis_log_density(x[i]);
  return l;
}

double ReferenceMeasure::density(const Point& x) const {
  return std::exp(log_density(x));
}

Point ReferenceMeasure::grad_log_density(const Point& x) const {
  Point g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = axis_dlog(x[i]);
  return g;
}

Point ReferenceMeasure::hess_log_density_diag(const Point& x) const {
  Point g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = axis_d2log(x[i]);
  return g;
}

bool ReferenceMeasure::is_kink(const Point& x) const {
  if (has_patch() || t_ > 1.0) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] == 0.0) return true;
  return false;
}

double ReferenceMeasure::normalization_residual() const {
  return 2.0 * std::exp(C_) * tail_integral() - 1.0;
}

ReferenceMeasure::ConvexityReport ReferenceMeasure::check_convexity(
    double zmax, int samples) const {
  ConvexityReport rep;
  rep.min_theta_d2 = std::numeric_limits<double>::infinity();
  rep.min_neg_sqrt_theta_d2 = std::numeric_limits<double>::infinity();
  const double dz = zmax / samples;
  auto neg_sqrt = [this](double z) { return -std::sqrt(theta(z)); };
  for (int i = 1; i < samples; ++i) {
    const double z = i * dz;
    const double d2 = (theta(z + dz) - 2.0 * theta(z) + theta(z - dz)) / (dz * dz);
    const double s2 =
        (neg_sqrt(z + dz) - 2.0 * neg_sqrt(z) + neg_sqrt(z - dz)) / (dz * dz);
    rep.min_theta_d2 = std::min(rep.min_theta_d2, d2);
    rep.min_neg_sqrt_theta_d2 = std::min(rep.min_neg_sqrt_theta_d2, s2);
  }
  // Second differences of exactly linear pieces carry rounding noise.
  const double noise = 1e-6;
  rep.theta_convex = rep.min_theta_d2 >= -noise;
  rep.neg_sqrt_theta_convex = rep.min_neg_sqrt_theta_d2 >= -noise;
  return rep;
}

}  // namespace infogeo
