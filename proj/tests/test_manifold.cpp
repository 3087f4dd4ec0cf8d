#include <doctest.h>

#include "infogeo/manifold.hpp"
#include "infogeo/sampling.hpp"

#include <cmath>
#include <random>

using namespace infogeo;

namespace {

WeightedGridPtr smooth1(double L = 30.0, int n = 1201) {
  return make_weighted_grid(build_grid(1, L, n), make_reference(1.0, MeasureVariant::smooth));
}

WeightedGridPtr gauss(double L = 8.0, int n = 801) {
  return make_weighted_grid(build_grid(1, L, n), make_reference(2.0, MeasureVariant::simple));
}

}  // namespace

TEST_SUITE("manifold") {

TEST_CASE("from_density examples") {
  auto wg = smooth1();
  DeformedExp b;
  auto mu = ManifoldPoint::from_density(wg, b, Vector::Ones(wg->size()));
  CHECK(mu.chart().cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(mu.mass() - 1.0) < 1e-14);
  auto two = ManifoldPoint::from_density(wg, b, Vector::Constant(wg->size(), 2.0));
  CHECK((two.chart().array() - (1 + std::log(2.0))).abs().maxCoeff() < 1e-15);
  CHECK(std::abs(two.mass() - 2.0) < 1e-14);
  Vector bad = Vector::Ones(wg->size());
  bad[17] = 0.0;
  CHECK_THROWS_WITH_AS(ManifoldPoint::from_density(wg, b, bad), doctest::Contains("node 17"),
                       DomainError);
}

TEST_CASE("density of a chart") {
  auto wg = smooth1();
  DeformedExp b;
  auto zero = ManifoldPoint::from_chart(wg, b, Vector::Zero(wg->size()));
  CHECK((zero.density().array() - 1.0).abs().maxCoeff() == 0.0);
  Vector x = wg->grid().coordinate(0);
  auto pt = ManifoldPoint::from_chart(wg, b, -x.cwiseAbs2());
  CHECK(pt.mass() > 0.0);
  CHECK(pt.mass() < 1.0);
  CHECK(std::abs(pt.mass() - 0.6029337314157846) < 1e-6);
  // psi(-900) underflows, so the round trip uses a box where it does not
  auto narrow = smooth1(20.0, 801);
  Vector xn = narrow->grid().coordinate(0);
  auto pn = ManifoldPoint::from_chart(narrow, b, -xn.cwiseAbs2());
  auto back = ManifoldPoint::from_density(narrow, b, pn.density());
  CHECK((back.chart() + xn.cwiseAbs2()).cwiseAbs().maxCoeff() <= 1e-12 * 400);
}

TEST_CASE("chart bijection on random fields") {
  auto wg = gauss();
  std::mt19937_64 rng(1);
  for (Family f : {Family::balanced, Family::kaniadakis}) {
    DeformedExp e(f);
    for (int i = 0; i < 10; ++i) {
      Vector a = random_smooth_field(wg->grid(), rng, 3.0);
      auto pt = ManifoldPoint::from_chart(wg, e, a);
      CHECK((pt.density().array() > 0).all());
      auto again = ManifoldPoint::from_density(wg, e, pt.density());
      CHECK((again.chart() - a).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK((again.density() - pt.density()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("normalize examples") {
  DeformedExp b, k(Family::kaniadakis);
  auto wg = smooth1();
  auto p0 = normalize(wg, b, Vector::Zero(wg->size()));
  CHECK(p0.normalizer() == 0.0);
  CHECK(normalize(wg, k, Vector::Zero(wg->size())).normalizer() == 0.0);

  Vector x = wg->grid().coordinate(0);
  auto px = normalize(wg, b, x);
  CHECK(px.normalizer() < 0.0);
  CHECK(std::abs(px.normalizer() + 0.26318111387876256) < 1e-6);
  CHECK(std::abs(px.mass() - 1.0) <= 1e-12);

  auto g = gauss();
  Vector xg = g->grid().coordinate(0);
  CHECK(std::abs(normalize(g, b, xg).normalizer() + 0.06330144535575471) < 1e-9);
  Vector q = 3.0 * xg.cwiseAbs2().array() - 1.5;
  CHECK(std::abs(normalize(g, b, q, {.recentre = true}).normalizer() + 0.44320716239745863) <
        1e-8);
}

TEST_CASE("normalize rejects non-centred input unless asked") {
  auto wg = gauss();
  DeformedExp b;
  Vector a = Vector::Constant(wg->size(), 0.3);
  CHECK_THROWS_AS(normalize(wg, b, a), DomainError);
  auto pt = normalize(wg, b, a, {.recentre = true});
  CHECK(pt.normalizer() == 0.0);
  CHECK(pt.centred_chart().cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("normalize accuracy, idempotence and warm start") {
  auto wg = smooth1();
  std::mt19937_64 rng(2);
  for (Family f : {Family::balanced, Family::kaniadakis}) {
    DeformedExp e(f);
    for (int i = 0; i < 20; ++i) {
      Vector a0 = random_centred_field(*wg, rng, 4.0);
      auto pt = normalize(wg, e, a0);
      CHECK(std::abs(pt.mass() - 1.0) <= 1e-12);
      CHECK(std::abs(wg->integrate(pt.centred_chart())) <= 1e-10);
      auto re = ManifoldPoint::probability_from_density(wg, e, pt.density());
      CHECK(std::abs(re.normalizer() - pt.normalizer()) < 1e-10);
      auto warm = normalize(wg, e, a0, {.warm_start = pt.normalizer() + 0.3});
      CHECK(std::abs(warm.normalizer() - pt.normalizer()) < 1e-10);
      auto again = normalize(wg, e, re.centred_chart(), {.warm_start = re.normalizer()});
      CHECK(std::abs(again.normalizer() - re.normalizer()) < 1e-10);
    }
  }
}

TEST_CASE("Z is bounded on bounded sets") {
  auto wg = gauss();
  DeformedExp b;
  std::mt19937_64 rng(9);
  for (double radius : {1.0, 4.0, 16.0}) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      Vector a0 = random_centred_field(*wg, rng, radius);
      worst = std::max(worst, std::abs(normalize(wg, b, a0).normalizer()));
    }
    // Jensen: Z <= 0; and Z >= -sup|a0| since psi(a0 + Z) <= psi(sup a0 + Z)
    CHECK(worst <= 8.0 * radius);
  }
}

TEST_CASE("Z derivatives against finite differences") {
  auto wg = smooth1();
  std::mt19937_64 rng(4);
  DeformedExp b;
  auto zof = [&](const Vector& a) { return normalize(wg, b, a).normalizer(); };
  for (int i = 0; i < 20; ++i) {
    Vector a0 = random_centred_field(*wg, rng, 2.0);
    Vector u = random_centred_field(*wg, rng), v = random_centred_field(*wg, rng);
    auto pt = normalize(wg, b, a0);
    double eps = 1e-4;
    double fd = (zof(a0 + eps * u) - zof(a0 - eps * u)) / (2 * eps);
    CHECK(std::abs(fd - z_gradient(pt, u)) < 1e-6);
    double fd2 = (zof(a0 + eps * (u + v)) - zof(a0 + eps * (u - v)) - zof(a0 - eps * (u - v)) +
                  zof(a0 - eps * (u + v))) /
                 (4 * eps * eps);
    CHECK(std::abs(fd2 - z_hessian(pt, u, v)) < 1e-4);
  }
  auto mu = normalize(wg, b, Vector::Zero(wg->size()));
  Vector u = random_centred_field(*wg, rng);
  CHECK(std::abs(z_gradient(mu, u)) < 1e-14);
  CHECK((escort_density(mu).array() - 1.0).abs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(z_gradient(mu, u.array() + 1.0), DomainError);
  auto free = ManifoldPoint::from_chart(wg, b, Vector::Zero(wg->size()));
  CHECK_THROWS_AS(z_gradient(free, u), DomainError);
}

TEST_CASE("m and e representations") {
  auto wg = gauss();
  DeformedExp b;
  auto mu = ManifoldPoint::from_density(wg, b, Vector::Ones(wg->size()));
  CHECK(m_rep(mu).cwiseAbs().maxCoeff() == 0.0);
  CHECK(e_rep(mu).cwiseAbs().maxCoeff() == 0.0);
  auto two = ManifoldPoint::from_density(wg, b, Vector::Constant(wg->size(), 2.0));
  CHECK((m_rep(two).array() - 1.0).abs().maxCoeff() == 0.0);
  CHECK((e_rep(two).array() - std::log(2.0)).abs().maxCoeff() < 1e-15);
  std::mt19937_64 rng(6);
  Vector a = random_smooth_field(wg->grid(), rng, 3.0);
  auto pt = ManifoldPoint::from_chart(wg, b, a);
  CHECK((m_rep(pt) + e_rep(pt) - a).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((e_rep(pt) - pt.density().array().log().matrix()).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(std::abs(wg->integrate(e_rep_centred(pt))) < 1e-14);
  CHECK(std::abs(wg->integrate(m_rep_centred(pt))) < 1e-14);
}

TEST_CASE("centred tangents have zero total mass") {
  auto wg = smooth1();
  DeformedExp b;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 10; ++i) {
    auto pt = normalize(wg, b, random_centred_field(*wg, rng, 2.0));
    auto t = make_tangent(pt, random_centred_field(*wg, rng), true);
    CHECK(std::abs(t.total_mass()) < 1e-8);
    // the tangent density is the derivative of the normalized density
    double eps = 1e-6;
    auto plus = normalize(wg, b, pt.centred_chart() + eps * t.u);
    auto minus = normalize(wg, b, pt.centred_chart() - eps * t.u);
    Vector fd = (plus.density() - minus.density()) / (2 * eps);
    CHECK((fd - t.measure_density()).cwiseAbs().maxCoeff() < 1e-6);
  }
  auto free = ManifoldPoint::from_chart(wg, b, Vector::Zero(wg->size()));
  CHECK_THROWS_AS(make_tangent(free, Vector::Zero(wg->size()), true), DomainError);
}

TEST_CASE("chain rule fields") {
  DeformedExp b;
  auto g = build_grid(1, 30.0, 6001);
  CHECK(faa_di_bruno_residual(*g, b, Vector::Constant(g->size(), 0.7), {2}) < 1e-9);
  Vector x = g->coordinate(0);
  Vector s = x.array().sin();
  CHECK(faa_di_bruno_residual(*g, b, s, {1}) <= 1e-5);
  CHECK(faa_di_bruno_residual(*g, b, s, {2}) <= 1e-5);
  CHECK(faa_di_bruno_residual(*g, b, s, {2}, 1.01) > 1e-3);

  auto small = build_grid(1, 3.0, 601);
  Vector xs = small->coordinate(0);
  CHECK(faa_di_bruno_residual(*small, b, xs.cwiseAbs2(), {2}) <= 1e-8);

  auto g2 = build_grid(2, 3.0, 121);
  Vector a2 = g2->sample([](const Point& p) { return std::sin(p[0]) * std::cos(0.5 * p[1]); });
  for (auto idx : {MultiIndex{1, 0}, MultiIndex{0, 1}, MultiIndex{2, 0}, MultiIndex{1, 1},
                   MultiIndex{0, 2}}) {
    CHECK(faa_di_bruno_residual(*g2, b, a2, idx) <= 1e-4);
  }
  CHECK_THROWS_AS(faa_di_bruno_residual(*g, b, s, {3}), DomainError);
}

}
