#pragma once

#include "infogeo/deformed.hpp"
#include "infogeo/grid.hpp"
#include "infogeo/quadrature.hpp"

#include <optional>

namespace infogeo {

/// A finite measure P on the grid, held through its chart a = log_d p.
///
/// Probability points also carry the centred chart a0 = a - E_mu a and the
/// normalizer Z with a = a0 + Z; the two are never conflated.
class ManifoldPoint {
 public:
  /// Point with chart a (density psi(a)); not normalized.
  static ManifoldPoint from_chart(WeightedGridPtr space, DeformedExp family,
                                  Vector a);
  /// a = log_d p. Throws DomainError naming the first node with p <= 0.
  static ManifoldPoint from_density(WeightedGridPtr space, DeformedExp family,
                                    const Eigen::Ref<const Vector>& p);
  /// As from_density, for a density with |E_mu p - 1| <= 1e-8; sets
  /// a0 = a - E_mu a and Z = E_mu a.
  static ManifoldPoint probability_from_density(WeightedGridPtr space,
                                                DeformedExp family,
                                                const Eigen::Ref<const Vector>& p);

  /// Probability point from a centred chart and its normalizer: density
  /// psi(a0 + z). The mass is recorded, not checked.
  static ManifoldPoint from_centred(WeightedGridPtr space, DeformedExp family,
                                    Vector a0, double z);

  const WeightedGrid& space() const { return *space_; }
  const WeightedGridPtr& space_ptr() const { return space_; }
  const DeformedExp& family() const { return family_; }

  /// Ambient chart phi(P).
  const Vector& chart() const { return a_; }
  const Vector& density() const { return p_; }
  double mass() const { return mass_; }

  bool is_probability() const { return z_.has_value(); }
  /// Throws if the point is not a probability point.
  double normalizer() const;
  const Vector& centred_chart() const;

  /// psi^{(n)}(a) at every node.
  Vector psi_deriv(int n) const { return family_.deriv_at_value(n, p_); }

 private:
  ManifoldPoint() = default;

  WeightedGridPtr space_;
  DeformedExp family_;
  Vector a_, p_, a0_;
  double mass_ = 0.0;
  std::optional<double> z_;
};

struct NormalizeOptions {
  /// Target |E_mu psi(a0 + Z) - 1|.
  double tol = 1e-12;
  /// Tolerance on |E_mu a0| before the input counts as not centred.
  double centre_tol = 1e-10;
  /// Subtract E_mu a0 instead of rejecting a non-centred input.
  bool recentre = false;
  /// Initial guess for Z (e.g. the previous value along a path).
  std::optional<double> warm_start;
};

/// Solves E_mu psi(a0 + Z) = 1 by bracket doubling and safeguarded Newton and
/// returns the probability point with chart a0 + Z.
ManifoldPoint normalize(WeightedGridPtr space, DeformedExp family,
                        const Eigen::Ref<const Vector>& a0,
                        const NormalizeOptions& opts = {});

/// Escort density of P_a with respect to mu: psi'(a) / E_mu psi'(a).
Vector escort_density(const ManifoldPoint& point);
/// E_{P_a} u.
double escort_mean(const ManifoldPoint& point, const Eigen::Ref<const Vector>& u);

/// First and second derivatives of Z at the centred chart of `point` along
/// centred directions: -E_{P_a}u and
/// -E_mu[psi''(a)(u - E_{P_a}u)(v - E_{P_a}v)] / E_mu psi'(a).
double z_gradient(const ManifoldPoint& point, const Eigen::Ref<const Vector>& u);
double z_hessian(const ManifoldPoint& point, const Eigen::Ref<const Vector>& u,
                 const Eigen::Ref<const Vector>& v);

/// Mixture and exponential representations: m = p - 1, e = a - m.
Vector m_rep(const ManifoldPoint& point);
Vector e_rep(const ManifoldPoint& point);
/// e - E_mu e.
Vector e_rep_centred(const ManifoldPoint& point);
/// m - E_mu m.
Vector m_rep_centred(const ManifoldPoint& point);

/// Tangent vector at a point, by its coordinate u = dU/dP~_a.
struct TangentRep {
  const ManifoldPoint* base = nullptr;
  Vector u;
  bool centred = false;

  /// Density of the tangent measure w.r.t. mu: psi'(a) u, or
  /// psi'(a)(u - E_{P_a}u) on the normalized submanifold.
  Vector measure_density() const;
  double total_mass() const;
};

/// Centred tangents require a probability base and |E_mu u| <= 1e-8.
TangentRep make_tangent(const ManifoldPoint& base, Vector u, bool centred);

/// Max-norm residual between diff(psi(a), s) and the chain-rule field F_s(a),
/// |s| <= 2. `second_scale` multiplies the psi'' term (1 for the true formula).
double faa_di_bruno_residual(const TensorGrid& grid, const DeformedExp& family,
                             const Eigen::Ref<const Vector>& a,
                             const MultiIndex& s, double second_scale = 1.0);

}  // namespace infogeo
