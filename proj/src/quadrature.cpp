#include "infogeo/quadrature.hpp"

#include <cmath>
#include <string>

namespace infogeo {

WeightedGrid::WeightedGrid(GridPtr grid, ReferenceMeasure measure)
    : grid_(std::move(grid)), measure_(measure) {
  if (!grid_) throw DomainError("WeightedGrid: null grid");
  weights_ = grid_->trapezoid_weights().cwiseProduct(density());
  raw_mass_ = weights_.sum();
  weights_ /= raw_mass_;
}

double WeightedGrid::integrate(const Eigen::Ref<const Vector>& u) const {
  grid_->check(u, "integrate_mu");
  return weights_.dot(u);
}

double WeightedGrid::lp_norm(const Eigen::Ref<const Vector>& u,
                             double lambda) const {
  if (!(lambda >= 1.0)) {
    throw DomainError("lp_norm: exponent must be >= 1, got " +
                      std::to_string(lambda));
  }
  grid_->check(u, "lp_norm");
  if (lambda == 1.0) return weights_.dot(u.cwiseAbs());
  if (lambda == 2.0) return std::sqrt(weights_.dot(u.cwiseAbs2()));
  const double s = weights_.dot(u.cwiseAbs().array().pow(lambda).matrix());
  return std::pow(s, 1.0 / lambda);
}

GridFunction WeightedGrid::density() const {
  return grid_->sample([this](const Point& x) { return measure_.density(x); });
}

GridFunction WeightedGrid::dlog(int axis) const {
  return grid_->sample(
      [this, axis](const Point& x) { return measure_.axis_dlog(x[axis]); });
}

GridFunction WeightedGrid::d2log(int axis) const {
  return grid_->sample(
      [this, axis](const Point& x) { return measure_.axis_d2log(x[axis]); });
}

WeightedGridPtr make_weighted_grid(GridPtr grid, const ReferenceMeasure& measure) {
  return std::make_shared<const WeightedGrid>(std::move(grid), measure);
}

double integrate_mu(const WeightedGrid& wg, const Eigen::Ref<const Vector>& u) {
  return wg.integrate(u);
}

double lp_norm(const WeightedGrid& wg, const Eigen::Ref<const Vector>& u,
               double lambda) {
  return wg.lp_norm(u, lambda);
}

}  // namespace infogeo
