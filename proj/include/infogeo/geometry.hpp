#pragma once

#include "infogeo/manifold.hpp"

#include <string>

namespace infogeo {

/// D(P|Q) = Q(R^d) - P(R^d) + E_mu p log(p/q), for finite measures.
double kl(const ManifoldPoint& P, const ManifoldPoint& Q);

/// D_MO(Q|P) = 1/2 E_mu (q/p - 1)^2 p.
double chi2_mo(const ManifoldPoint& Q, const ManifoldPoint& P);

/// Metric in chart-velocity form: E_mu psi'(a)^2/psi(a) u v, which is
/// E_mu p/(1+p)^2 u v for the balanced family.
double fisher_rao(const ManifoldPoint& P, const Eigen::Ref<const Vector>& uphi,
                  const Eigen::Ref<const Vector>& vphi);

/// E_mu psi'(a)^3/psi(a)^2 u v w (E_mu p/(1+p)^3 u v w for balanced).
double amari_chentsov(const ManifoldPoint& P, const Eigen::Ref<const Vector>& uphi,
                      const Eigen::Ref<const Vector>& vphi,
                      const Eigen::Ref<const Vector>& wphi);

/// E_mu (m(P) - m(Q)) (e(R) - e(Q)).
double me_pairing(const ManifoldPoint& P, const ManifoldPoint& Q,
                  const ManifoldPoint& R);

/// D(P|R) - [D(P|Q) + D(Q|R) - <m(P) - m(Q), e(R) - e(Q)>]. Vanishes for the
/// balanced family, where e = log p.
double cosine_defect(const ManifoldPoint& P, const ManifoldPoint& Q,
                     const ManifoldPoint& R);

struct SymmetricBound {
  double symmetric_kl;  ///< D(P|Q) + D(Q|P)
  double pairing;       ///< <m(P) - m(Q), e(P) - e(Q)>
  double half_l2;       ///< 1/2 ||phi(P) - phi(Q)||^2_{L^2(mu)}
};
SymmetricBound symmetric_bound(const ManifoldPoint& P, const ManifoldPoint& Q);

struct EguchiResult {
  double fd;
  double metric;
};
/// Central cross-difference of (s, t) -> D(P_{a+s u} | P_{a+t v}) at 0, negated,
/// next to fisher_rao(P, u, v).
EguchiResult eguchi_check(const ManifoldPoint& P, const Eigen::Ref<const Vector>& uphi,
                          const Eigen::Ref<const Vector>& vphi, double step);

/// Analytic Lebesgue densities used by the geometry report and the tests.
struct DensitySpec {
  std::string kind = "gaussian";  ///< "gaussian" | "laplace" | "reference" | "constant"
  double mean = 0.0;
  double scale = 1.0;  ///< standard deviation (gaussian) or b (laplace)
  double value = 1.0;  ///< constant density w.r.t. mu
};

/// Density of the given law with respect to mu at every node (d = 1 uses the
/// spec directly; d = 2 takes the product of identical marginals).
GridFunction density_wrt_mu(const WeightedGrid& wg, const DensitySpec& spec);

}  // namespace infogeo
