#include <doctest.h>

#include "infogeo/geometry.hpp"
#include "infogeo/sampling.hpp"

#include <cmath>
#include <random>

using namespace infogeo;

namespace {

WeightedGridPtr gauss(double L = 8.0, int n = 801) {
  return make_weighted_grid(build_grid(1, L, n), make_reference(2.0, MeasureVariant::simple));
}

WeightedGridPtr smooth1(double L = 30.0, int n = 1201) {
  return make_weighted_grid(build_grid(1, L, n), make_reference(1.0, MeasureVariant::smooth));
}

ManifoldPoint constant(const WeightedGridPtr& wg, double c, Family f = Family::balanced) {
  return ManifoldPoint::from_density(wg, DeformedExp(f), Vector::Constant(wg->size(), c));
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("constant-density closed forms") {
  auto wg = gauss();
  auto p1 = constant(wg, 1.0), p2 = constant(wg, 2.0), p3 = constant(wg, 3.0);
  const double ln2 = std::log(2.0);
  CHECK(kl(p2, p2) == 0.0);
  CHECK(std::abs(kl(p2, p1) - (2 * ln2 - 1)) < 1e-14);
  CHECK(std::abs(kl(p1, p2) - (1 - ln2)) < 1e-14);
  CHECK(std::abs(cosine_defect(p2, p1, p3)) < 1e-12);
  auto sb = symmetric_bound(p2, p1);
  CHECK(std::abs(sb.symmetric_kl - ln2) < 1e-14);
  CHECK(std::abs(sb.pairing - ln2) < 1e-14);
  CHECK(sb.symmetric_kl <= sb.half_l2);
}

TEST_CASE("chi-square examples") {
  auto wg = smooth1();
  std::mt19937_64 rng(1);
  DeformedExp b;
  auto P = normalize(wg, b, random_centred_field(*wg, rng, 2.0));
  CHECK(chi2_mo(P, P) == 0.0);
  auto Q = ManifoldPoint::from_density(wg, b, 2.0 * P.density());
  CHECK(std::abs(chi2_mo(Q, P) - 0.5) < 1e-12);
}

TEST_CASE("chi-square and KL share the quadratic term") {
  auto wg = smooth1();
  DeformedExp b;
  std::mt19937_64 rng(2);
  Vector u = random_centred_field(*wg, rng);
  auto P = normalize(wg, b, Vector::Zero(wg->size()));
  auto coeff = [&](auto div) {
    // quadratic fit through eps = +-1e-2
    double s = 0.0;
    for (double eps : {1e-2, -1e-2}) s += div(normalize(wg, b, eps * u));
    return s / (2 * 1e-4);
  };
  double ckl = coeff([&](const ManifoldPoint& Q) { return kl(Q, P); });
  double cchi = coeff([&](const ManifoldPoint& Q) { return chi2_mo(Q, P); });
  CHECK(std::abs(ckl - cchi) <= 0.05 * ckl);
}

TEST_CASE("Gaussian KL via both charts") {
  auto wg = smooth1();
  DeformedExp b;
  Vector p = density_wrt_mu(*wg, {.kind = "gaussian", .mean = 0.0, .scale = 1.0});
  Vector q = density_wrt_mu(*wg, {.kind = "gaussian", .mean = 0.5, .scale = 1.0});
  auto P = ManifoldPoint::from_density(wg, b, p);
  auto Q = ManifoldPoint::from_density(wg, b, q);
  CHECK(std::abs(kl(P, Q) - 0.125) < 1e-5);
  auto P0 = normalize(wg, b, P.chart(), {.tol = 1e-12, .recentre = true});
  auto Q0 = normalize(wg, b, Q.chart(), {.tol = 1e-12, .recentre = true});
  CHECK(std::abs(kl(P0, Q0) - 0.125) < 1e-5);
}

TEST_CASE("metric and tensor at the reference measure") {
  auto wg = gauss();
  DeformedExp b;
  auto mu = constant(wg, 1.0);
  std::mt19937_64 rng(3);
  Vector u = random_smooth_field(wg->grid(), rng), v = random_smooth_field(wg->grid(), rng),
         w = random_smooth_field(wg->grid(), rng);
  CHECK(fisher_rao(mu, u, v) ==
        doctest::Approx(0.25 * wg->integrate(u.cwiseProduct(v))).epsilon(1e-14));
  CHECK(amari_chentsov(mu, u, v, w) ==
        doctest::Approx(wg->integrate(u.cwiseProduct(v).cwiseProduct(w)) / 8).epsilon(1e-14));
  Vector x = wg->grid().coordinate(0);
  CHECK(std::abs(amari_chentsov(mu, x, x, x)) < 1e-15);
}

TEST_CASE("metric symmetry, scaling, positivity, domination") {
  auto wg = smooth1();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> c(-5, 5);
  for (Family f : {Family::balanced, Family::kaniadakis}) {
    DeformedExp e(f);
    for (int i = 0; i < 30; ++i) {
      auto P = ManifoldPoint::from_chart(wg, e, random_smooth_field(wg->grid(), rng, 3.0));
      Vector u = random_smooth_field(wg->grid(), rng), v = random_smooth_field(wg->grid(), rng),
             w = random_smooth_field(wg->grid(), rng);
      CHECK(fisher_rao(P, u, v) == fisher_rao(P, v, u));
      double s = c(rng);
      CHECK(fisher_rao(P, s * u, v) == doctest::Approx(s * fisher_rao(P, u, v)).epsilon(1e-14));
      CHECK(fisher_rao(P, u, u) > 0.0);
      double t = amari_chentsov(P, u, v, w);
      CHECK(amari_chentsov(P, v, w, u) == t);
      CHECK(amari_chentsov(P, w, v, u) == t);
      if (f == Family::balanced) {
        CHECK(fisher_rao(P, u, u) <= wg->integrate(u.cwiseAbs2()));
        Vector p = P.density();
        Vector wt = p.array() / (1 + p.array()).square();
        CHECK(fisher_rao(P, u, v) ==
              doctest::Approx(wg->integrate(wt.cwiseProduct(u).cwiseProduct(v))).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("cosine rule, symmetric identity and global bound") {
  auto wg = smooth1();
  DeformedExp b;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    auto P = ManifoldPoint::from_chart(wg, b, random_smooth_field(wg->grid(), rng, 2.0));
    auto Q = ManifoldPoint::from_chart(wg, b, random_smooth_field(wg->grid(), rng, 2.0));
    auto R = ManifoldPoint::from_chart(wg, b, random_smooth_field(wg->grid(), rng, 2.0));
    CHECK(std::abs(cosine_defect(P, Q, R)) <= 1e-8);
    auto sb = symmetric_bound(P, Q);
    CHECK(std::abs(sb.symmetric_kl - sb.pairing) <= 1e-8);
    CHECK(sb.symmetric_kl <= sb.half_l2);
    CHECK(kl(P, Q) >= 0.0);
  }
  // the identity is specific to e = log p
  DeformedExp k(Family::kaniadakis);
  auto P = ManifoldPoint::from_chart(wg, k, random_smooth_field(wg->grid(), rng, 2.0));
  auto Q = ManifoldPoint::from_chart(wg, k, random_smooth_field(wg->grid(), rng, 2.0));
  auto R = ManifoldPoint::from_chart(wg, k, random_smooth_field(wg->grid(), rng, 2.0));
  CHECK(std::abs(cosine_defect(P, Q, R)) > 1e-6);
}

TEST_CASE("Eguchi characterisation") {
  auto wg = gauss();
  DeformedExp b;
  auto mu = constant(wg, 1.0);
  Vector x = wg->grid().coordinate(0);
  auto r = eguchi_check(mu, x, x, 1e-3);
  CHECK(std::abs(r.metric - 0.125) < 1e-12);
  CHECK(std::abs(r.fd - 0.125) < 1e-4);

  Vector x2 = x.cwiseAbs2().array() - 0.5;
  CHECK(std::abs(eguchi_check(mu, x, x2, 1e-3).fd) < 1e-4);

  std::mt19937_64 rng(6);
  auto P = ManifoldPoint::from_chart(wg, b, random_smooth_field(wg->grid(), rng, 2.0));
  Vector u = random_smooth_field(wg->grid(), rng), v = random_smooth_field(wg->grid(), rng);
  v -= fisher_rao(P, u, v) / fisher_rao(P, u, u) * u;
  CHECK(std::abs(fisher_rao(P, u, v)) < 1e-12);
  CHECK(std::abs(eguchi_check(P, u, v, 1e-3).fd) < 1e-4);

  Vector w = random_smooth_field(wg->grid(), rng);
  auto coarse = eguchi_check(P, u, w, 1e-2);
  auto fine = eguchi_check(P, u, w, 5e-3);
  double e1 = std::abs(coarse.fd - coarse.metric), e2 = std::abs(fine.fd - fine.metric);
  CHECK(e1 <= std::max(1e-4, 10 * 1e-4));
  CHECK(e1 / e2 > 3.0);
  CHECK(e1 / e2 < 5.0);
  CHECK_THROWS_AS(eguchi_check(P, u, w, 0.1), DomainError);
}

TEST_CASE("analytic densities") {
  auto wg = smooth1();
  Vector lap = density_wrt_mu(*wg, {.kind = "laplace", .mean = 0.3, .scale = 2.0});
  CHECK(std::abs(wg->integrate(lap) * wg->raw_mass() - 1.0) < 1e-4);
  CHECK_THROWS_AS(density_wrt_mu(*wg, {.kind = "cauchy"}), DomainError);
  CHECK_THROWS_AS(density_wrt_mu(*wg, {.kind = "gaussian", .scale = 0.0}), DomainError);
  CHECK(density_wrt_mu(*wg, {.kind = "reference"}) == Vector::Ones(wg->size()));
}

}
