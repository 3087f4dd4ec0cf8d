#include "infogeo/manifold.hpp"

#include <cmath>
#include <string>

namespace infogeo {

namespace {

std::string node_location(const TensorGrid& g, Eigen::Index i) {
  Point x = g.point(i);
  std::string s = "node " + std::to_string(i) + " (x = " + std::to_string(x[0]);
  if (x.size() > 1) s += ", " + std::to_string(x[1]);
  return s + ")";
}

}  // namespace

ManifoldPoint ManifoldPoint::from_chart(WeightedGridPtr space, DeformedExp family,
                                        Vector a) {
  if (!space) throw DomainError("manifold point: null space");
  space->grid().check(a, "chart");
  ManifoldPoint pt;
  pt.space_ = std::move(space);
  pt.family_ = family;
  pt.p_ = family.psi(a);
  pt.a_ = std::move(a);
  pt.mass_ = pt.space_->integrate(pt.p_);
  return pt;
}

ManifoldPoint ManifoldPoint::from_density(WeightedGridPtr space, DeformedExp family,
                                          const Eigen::Ref<const Vector>& p) {
  if (!space) throw DomainError("manifold point: null space");
  space->grid().check(p, "density");
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0)) {
      throw DomainError("density must be strictly positive; got " +
                        std::to_string(p[i]) + " at " +
                        node_location(space->grid(), i));
    }
  }
  ManifoldPoint pt;
  pt.space_ = std::move(space);
  pt.family_ = family;
  pt.p_ = p;
  pt.a_ = family.log(p);
  pt.mass_ = pt.space_->integrate(pt.p_);
  return pt;
}

ManifoldPoint ManifoldPoint::probability_from_density(
    WeightedGridPtr space, DeformedExp family, const Eigen::Ref<const Vector>& p) {
  ManifoldPoint pt = from_density(std::move(space), family, p);
  if (std::abs(pt.mass_ - 1.0) > 1e-8) {
    throw DomainError("probability density has mass " + std::to_string(pt.mass_));
  }
  const double z = pt.space_->integrate(pt.a_);
  pt.a0_ = pt.a_.array() - z;
  pt.z_ = z;
  return pt;
}

ManifoldPoint ManifoldPoint::from_centred(WeightedGridPtr space, DeformedExp family,
                                          Vector a0, double z) {
  ManifoldPoint pt = from_chart(std::move(space), family, a0.array() + z);
  pt.a0_ = std::move(a0);
  pt.z_ = z;
  return pt;
}

double ManifoldPoint::normalizer() const {
  if (!z_) throw DomainError("normalizer requested on a non-probability point");
  return *z_;
}

const Vector& ManifoldPoint::centred_chart() const {
  if (!z_) throw DomainError("centred chart requested on a non-probability point");
  return a0_;
}

ManifoldPoint normalize(WeightedGridPtr space, DeformedExp family,
                        const Eigen::Ref<const Vector>& a0_in,
                        const NormalizeOptions& opts) {
  if (!space) throw DomainError("normalize: null space");
  const WeightedGrid& wg = *space;
  wg.grid().check(a0_in, "normalize");
  Vector a0 = a0_in;
  const double shift = wg.integrate(a0);
  if (std::abs(shift) > opts.centre_tol) {
    if (!opts.recentre) {
      throw DomainError("normalize: chart is not centred (E_mu a0 = " +
                        std::to_string(shift) + ")");
    }
    a0.array() -= shift;
  }

  Vector p(a0.size());
  auto upsilon = [&](double z) {
    for (Eigen::Index i = 0; i < a0.size(); ++i) p[i] = family.psi(a0[i] + z);
    return wg.integrate(p) - 1.0;
  };
  auto slope = [&]() { return wg.integrate(family.deriv_at_value(1, p)); };

  double z = opts.warm_start.value_or(0.0);
  double g = upsilon(z);
  if (std::abs(g) <= opts.tol) {
    return ManifoldPoint::from_centred(std::move(space), family, std::move(a0), z);
  }

  // Upsilon is convex and increasing, so plain Newton converges from either
  // side; after at most one step it approaches the root from above
  {
    double zn = z, gn = g;
    for (int it = 0; it < 50; ++it) {
      const double d = slope();
      if (!(d > 0.0) || !std::isfinite(gn)) break;
      zn -= gn / d;
      gn = upsilon(zn);
      if (std::abs(gn) <= opts.tol) {
        return ManifoldPoint::from_centred(std::move(space), family, std::move(a0), zn);
      }
    }
  }
  g = upsilon(z);

  // bracket [lo, hi] with Upsilon(lo) < 1 < Upsilon(hi); Upsilon increases in z
  double lo = z, hi = z;
  {
    double width = 1.0;
    double glo = g, ghi = g;
    int doublings = 0;
    while (!(glo < 0.0)) {
      if (++doublings > 200) throw NumericalError("normalize: bracket search failed");
      hi = lo;
      lo = z - width;
      width *= 2.0;
      glo = upsilon(lo);
    }
    while (!(ghi > 0.0)) {
      if (++doublings > 200) throw NumericalError("normalize: bracket search failed");
      lo = std::max(lo, hi);
      hi = z + width;
      width *= 2.0;
      ghi = upsilon(hi);
    }
  }
  if (!(z > lo && z < hi)) z = 0.5 * (lo + hi);
  g = upsilon(z);

  for (int it = 0; it < 200; ++it) {
    if (std::abs(g) <= opts.tol) break;
    if (g < 0.0) lo = z; else hi = z;
    double next = z - g / slope();
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == z || hi - lo <= 4e-16 * std::max(1.0, std::abs(z))) {
      throw NumericalError("normalize: could not reach tolerance " +
                           std::to_string(opts.tol) + " (residual " +
                           std::to_string(g) + ")");
    }
    z = next;
    g = upsilon(z);
  }
  if (std::abs(g) > opts.tol) {
    throw NumericalError("normalize: no convergence (residual " + std::to_string(g) + ")");
  }
  return ManifoldPoint::from_centred(std::move(space), family, std::move(a0), z);
}

Vector escort_density(const ManifoldPoint& point) {
  Vector w = point.psi_deriv(1);
  return w / point.space().integrate(w);
}

double escort_mean(const ManifoldPoint& point, const Eigen::Ref<const Vector>& u) {
  const Vector w = point.psi_deriv(1);
  return point.space().integrate(w.cwiseProduct(u)) / point.space().integrate(w);
}

namespace {

void require_centred(const ManifoldPoint& point, const Eigen::Ref<const Vector>& u,
                     const char* what) {
  if (!point.is_probability()) {
    throw DomainError(std::string(what) + ": base point is not normalized");
  }
  const double m = point.space().integrate(u);
  if (std::abs(m) > 1e-8) {
    throw DomainError(std::string(what) + ": direction is not centred (E_mu u = " +
                      std::to_string(m) + ")");
  }
}

}  // namespace

double z_gradient(const ManifoldPoint& point, const Eigen::Ref<const Vector>& u) {
  require_centred(point, u, "z_gradient");
  return -escort_mean(point, u);
}

double z_hessian(const ManifoldPoint& point, const Eigen::Ref<const Vector>& u,
                 const Eigen::Ref<const Vector>& v) {
  require_centred(point, u, "z_hessian");
  require_centred(point, v, "z_hessian");
  const WeightedGrid& wg = point.space();
  const Vector d1 = point.psi_deriv(1);
  const Vector d2 = point.psi_deriv(2);
  const double norm = wg.integrate(d1);
  const double eu = wg.integrate(d1.cwiseProduct(u)) / norm;
  const double ev = wg.integrate(d1.cwiseProduct(v)) / norm;
  const Vector cu = u.array() - eu, cv = v.array() - ev;
  return -wg.integrate(d2.cwiseProduct(cu).cwiseProduct(cv)) / norm;
}

Vector m_rep(const ManifoldPoint& point) { return point.density().array() - 1.0; }

Vector e_rep(const ManifoldPoint& point) { return point.chart() - m_rep(point); }

Vector e_rep_centred(const ManifoldPoint& point) {
  Vector e = e_rep(point);
  return e.array() - point.space().integrate(e);
}

Vector m_rep_centred(const ManifoldPoint& point) {
  Vector m = m_rep(point);
  return m.array() - point.space().integrate(m);
}

Vector TangentRep::measure_density() const {
  Vector d1 = base->psi_deriv(1);
  if (!centred) return d1.cwiseProduct(u);
  return d1.cwiseProduct((u.array() - escort_mean(*base, u)).matrix());
}

double TangentRep::total_mass() const {
  return base->space().integrate(measure_density());
}

TangentRep make_tangent(const ManifoldPoint& base, Vector u, bool centred) {
  base.space().grid().check(u, "tangent");
  if (centred) require_centred(base, u, "tangent");
  return TangentRep{&base, std::move(u), centred};
}

double faa_di_bruno_residual(const TensorGrid& grid, const DeformedExp& family,
                             const Eigen::Ref<const Vector>& a, const MultiIndex& s,
                             double second_scale) {
  grid.check(a, "faa_di_bruno");
  if (s.dim() != grid.dim()) throw DomainError("faa_di_bruno: index dimension mismatch");
  const int w = s.weight();
  if (w == 0) return 0.0;
  if (w > 2) throw DomainError("faa_di_bruno: only |s| <= 2 is implemented");

  const Vector p = family.psi(a);
  const Vector d1 = family.deriv_at_value(1, p);
  const Vector lhs = diff(grid, p, s);
  Vector rhs = d1.cwiseProduct(diff(grid, a, s));
  if (w == 2) {
    // split s into two first-order indices
    MultiIndex first, second;
    if (grid.dim() == 1) {
      first = second = MultiIndex{1};
    } else if (s[0] == 2) {
      first = second = MultiIndex{1, 0};
    } else if (s[1] == 2) {
      first = second = MultiIndex{0, 1};
    } else {
      first = MultiIndex{1, 0};
      second = MultiIndex{0, 1};
    }
    const Vector d2 = family.deriv_at_value(2, p);
    rhs += second_scale *
           d2.cwiseProduct(diff(grid, a, first)).cwiseProduct(diff(grid, a, second));
  }
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

}  // namespace infogeo
