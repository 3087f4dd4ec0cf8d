#pragma once

#include "infogeo/grid.hpp"
#include "infogeo/measure.hpp"

#include <memory>

namespace infogeo {

/// A grid paired with a reference measure: the discrete stand-in for
/// integration against mu on the truncated box.
///
/// Weights are the composite-trapezoid weights times r(x), rescaled so that the
/// discrete measure has unit mass. The unscaled total is kept as `raw_mass`;
/// its distance from 1 measures truncation plus quadrature error.
class WeightedGrid {
 public:
  WeightedGrid(GridPtr grid, ReferenceMeasure measure);

  const TensorGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const ReferenceMeasure& measure() const { return measure_; }
  const Vector& weights() const { return weights_; }
  double raw_mass() const { return raw_mass_; }
  Eigen::Index size() const { return grid_->size(); }

  /// E_mu u.
  double integrate(const Eigen::Ref<const Vector>& u) const;
  /// (E_mu |u|^lambda)^(1/lambda), lambda >= 1.
  double lp_norm(const Eigen::Ref<const Vector>& u, double lambda) const;

  /// r(x) = exp(l(x)) at every node.
  GridFunction density() const;
  /// dl/dx_axis and d^2 l/dx_axis^2 at every node (analytic).
  GridFunction dlog(int axis) const;
  GridFunction d2log(int axis) const;

 private:
  GridPtr grid_;
  ReferenceMeasure measure_;
  Vector weights_;
  double raw_mass_ = 0.0;
};

using WeightedGridPtr = std::shared_ptr<const WeightedGrid>;

WeightedGridPtr make_weighted_grid(GridPtr grid, const ReferenceMeasure& measure);

double integrate_mu(const WeightedGrid& wg, const Eigen::Ref<const Vector>& u);
double lp_norm(const WeightedGrid& wg, const Eigen::Ref<const Vector>& u,
               double lambda);

}  // namespace infogeo
