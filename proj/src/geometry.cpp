#include "infogeo/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace infogeo {

namespace {

void same_space(const ManifoldPoint& P, const ManifoldPoint& Q, const char* what) {
  if (&P.space() != &Q.space() &&
      (P.space().size() != Q.space().size() ||
       P.space().grid().spacing() != Q.space().grid().spacing())) {
    throw DomainError(std::string(what) + ": points live on different grids");
  }
}

}  // namespace

double kl(const ManifoldPoint& P, const ManifoldPoint& Q) {
  same_space(P, Q, "kl");
  const Vector& p = P.density();
  const Vector& q = Q.density();
  // q f(p/q) with f(r) = r log r - r + 1 >= 0
  Vector f(p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double d = (p[i] - q[i]) / q[i];
    f[i] = q[i] * ((1.0 + d) * std::log1p(d) - d);
  }
  return P.space().integrate(f);
}

double chi2_mo(const ManifoldPoint& Q, const ManifoldPoint& P) {
  same_space(P, Q, "chi2_mo");
  const Vector& p = P.density();
  const Vector& q = Q.density();
  return 0.5 * P.space().integrate(((q - p).array().square() / p.array()).matrix());
}

double fisher_rao(const ManifoldPoint& P, const Eigen::Ref<const Vector>& uphi,
                  const Eigen::Ref<const Vector>& vphi) {
  const Vector d1 = P.psi_deriv(1);
  const Vector w = d1.array().square() / P.density().array();
  // u v is formed first so the result is exactly symmetric
  return P.space().integrate(w.cwiseProduct(uphi.cwiseProduct(vphi)));
}

double amari_chentsov(const ManifoldPoint& P, const Eigen::Ref<const Vector>& uphi,
                      const Eigen::Ref<const Vector>& vphi,
                      const Eigen::Ref<const Vector>& wphi) {
  const Vector d1 = P.psi_deriv(1);
  const Vector w = d1.array().cube() / P.density().array().square();
  // multiply each triple in sorted order so permutations agree exactly
  Vector uvw(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    std::array<double, 3> t{uphi[i], vphi[i], wphi[i]};
    std::sort(t.begin(), t.end());
    uvw[i] = t[0] * t[1] * t[2];
  }
  return P.space().integrate(w.cwiseProduct(uvw));
}

double me_pairing(const ManifoldPoint& P, const ManifoldPoint& Q,
                  const ManifoldPoint& R) {
  same_space(P, Q, "me_pairing");
  same_space(Q, R, "me_pairing");
  const Vector dm = P.density() - Q.density();
  const Vector de = e_rep(R) - e_rep(Q);
  return P.space().integrate(dm.cwiseProduct(de));
}

double cosine_defect(const ManifoldPoint& P, const ManifoldPoint& Q,
                     const ManifoldPoint& R) {
  return kl(P, R) - (kl(P, Q) + kl(Q, R) - me_pairing(P, Q, R));
}

SymmetricBound symmetric_bound(const ManifoldPoint& P, const ManifoldPoint& Q) {
  const double l2 = P.space().lp_norm(P.chart() - Q.chart(), 2.0);
  return {kl(P, Q) + kl(Q, P), me_pairing(P, Q, P), 0.5 * l2 * l2};
}

EguchiResult eguchi_check(const ManifoldPoint& P, const Eigen::Ref<const Vector>& uphi,
                          const Eigen::Ref<const Vector>& vphi, double step) {
  if (!(step >= 1e-4 && step <= 1e-2)) {
    throw DomainError("eguchi_check: step must lie in [1e-4, 1e-2]");
  }
  const auto& space = P.space_ptr();
  const auto& fam = P.family();
  auto at = [&](double s, const Eigen::Ref<const Vector>& dir) {
    return ManifoldPoint::from_chart(space, fam, P.chart() + s * dir);
  };
  const auto up = at(step, uphi), um = at(-step, uphi);
  const auto vp = at(step, vphi), vm = at(-step, vphi);
  const double fd =
      -(kl(up, vp) - kl(up, vm) - kl(um, vp) + kl(um, vm)) / (4.0 * step * step);
  return {fd, fisher_rao(P, uphi, vphi)};
}

GridFunction density_wrt_mu(const WeightedGrid& wg, const DensitySpec& spec) {
  const auto& m = wg.measure();
  auto log_marginal = [&](double x) {
    if (spec.kind == "gaussian") {
      const double z = (x - spec.mean) / spec.scale;
      return -0.5 * z * z - std::log(spec.scale * std::sqrt(2.0 * std::numbers::pi));
    }
    if (spec.kind == "laplace") {
      return -std::abs(x - spec.mean) / spec.scale - std::log(2.0 * spec.scale);
    }
    throw DomainError("unknown density kind '" + spec.kind + "'");
  };
  if (spec.kind == "reference") return Vector::Ones(wg.size());
  if (spec.kind == "constant") {
    if (!(spec.value > 0.0)) throw DomainError("constant density must be positive");
    return Vector::Constant(wg.size(), spec.value);
  }
  if (!(spec.scale > 0.0)) throw DomainError("density scale must be positive");
  return wg.grid().sample([&](const Point& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      s += log_marginal(x[i]) - m.axis_log_density(x[i]);
    }
    return std::exp(s);
  });
}

}  // namespace infogeo
