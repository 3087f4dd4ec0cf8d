#include <doctest.h>

#include "infogeo/measure.hpp"
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>

using namespace infogeo;
using std::numbers::pi;

namespace {

// 30-digit values from an independent arbitrary-precision computation.
struct Frozen {
  double t, beta, alpha, c, C;
};
constexpr Frozen kSmooth[] = {
    {0.5, 1.22439813543475048, 0.345563063151778836, -0.788408575802151548,
     -2.11885972158002070},
    {1.0, 1.57079632679489662, 0.636619772367581343, -0.363380227632418657,
     -0.983857166621995342},
    {1.5, 2.33112237041442261, 0.495097899333565779, -0.0536403465836290167,
     -0.635603034169087413},
};

Point pt(double x) {
  Point p(1);
  p << x;
  return p;
}

}  // namespace

TEST_SUITE("measure") {

TEST_CASE("smooth t = 1 constants") {
  auto m = make_reference(1.0, MeasureVariant::smooth);
  CHECK(m.patch_end() == 1.0);
  CHECK(std::abs(m.frequency() - pi / 2) < 1e-12);
  CHECK(std::abs(m.amplitude() - 2 / pi) < 1e-12);
  CHECK(std::abs(m.offset() - (2 / pi - 1)) < 1e-12);
}

TEST_CASE("smooth constants against frozen oracle") {
  for (const auto& f : kSmooth) {
    CAPTURE(f.t);
    auto m = make_reference(f.t, MeasureVariant::smooth);
    CHECK(m.patch_end() == doctest::Approx(2.0 - f.t).epsilon(1e-15));
    CHECK(std::abs(m.frequency() - f.beta) < 1e-12);
    CHECK(std::abs(m.amplitude() - f.alpha) < 1e-12);
    CHECK(std::abs(m.offset() - f.c) < 1e-12);
    CHECK(std::abs(m.log_normalizer() - f.C) < 1e-10);
  }
}

TEST_CASE("simple constants") {
  auto m1 = make_reference(1.0, MeasureVariant::simple);
  CHECK(std::abs(m1.log_normalizer() + std::log(2.0)) < 1e-12);
  auto m2 = make_reference(2.0, MeasureVariant::simple);
  CHECK(std::abs(m2.log_normalizer() + std::log(std::sqrt(pi))) < 1e-12);
  CHECK(m2.patch_end() == 0.0);
  CHECK(m2.offset() == 0.0);
}

TEST_CASE("t = 2 smooth is the simple measure") {
  auto a = make_reference(2.0, MeasureVariant::smooth);
  auto b = make_reference(2.0, MeasureVariant::simple);
  CHECK(a.log_normalizer() == b.log_normalizer());
  CHECK_FALSE(a.has_patch());
  for (double z : {0.0, 0.3, 2.0}) CHECK(a.theta(z) == b.theta(z));
}

TEST_CASE("rejections") {
  CHECK_THROWS_AS(make_reference(0.0, MeasureVariant::smooth), DomainError);
  CHECK_THROWS_AS(make_reference(2.5, MeasureVariant::smooth), DomainError);
  CHECK_THROWS_AS(make_reference(0.8, MeasureVariant::simple), DomainError);
  CHECK_THROWS_AS(parse_variant("fancy"), DomainError);
}

TEST_CASE("log-density derivatives at the origin and at z_t") {
  auto m = make_reference(1.0, MeasureVariant::smooth);
  CHECK(m.log_density(pt(0.0)) == m.log_normalizer());
  CHECK(m.grad_log_density(pt(0.0))[0] == 0.0);
  CHECK(std::abs(m.hess_log_density_diag(pt(0.0))[0] + pi / 2) < 1e-14);
  auto [left, right] = m.theta_d1_at_patch_end();
  CHECK(std::abs(left - 1.0) < 1e-14);
  CHECK(std::abs(right - 1.0) < 1e-14);

  auto kink = make_reference(1.0, MeasureVariant::simple);
  CHECK(kink.grad_log_density(pt(0.0))[0] == 0.0);
  CHECK(kink.is_kink(pt(0.0)));
  CHECK_FALSE(kink.is_kink(pt(0.5)));
}

TEST_CASE("C1 matching for all exponents") {
  for (double t : {0.1, 0.5, 0.9, 1.0, 1.3, 1.5, 1.9, 2.0}) {
    auto m = make_reference(t, MeasureVariant::smooth);
    auto [l, r] = m.theta_d1_at_patch_end();
    CAPTURE(t);
    CHECK(std::abs(l - r) < 1e-10);
    if (m.has_patch()) {
      double z = m.patch_end();
      CHECK(std::abs(m.theta(z * (1 - 1e-12)) - m.theta(z * (1 + 1e-12))) < 1e-10);
    }
  }
}

TEST_CASE("one-dimensional normalization") {
  for (double t : {0.3, 0.5, 1.0, 1.5, 2.0}) {
    for (auto v : {MeasureVariant::simple, MeasureVariant::smooth}) {
      if (v == MeasureVariant::simple && t < 1.0) continue;
      auto m = make_reference(t, v);
      CAPTURE(t);
      CHECK(std::abs(m.normalization_residual()) < 1e-8);
      // independent check by direct quadrature of the density
      double tail = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          [&](double z) { return std::exp(m.axis_log_density(z)); },
                              0.0, std::numeric_limits<double>::infinity(), 15, 1e-13);
      CHECK(std::abs(2 * tail - 1.0) < 1e-8);
    }
  }
}

TEST_CASE("gradient matches finite differences") {
  for (double t : {0.5, 1.0, 1.5, 2.0}) {
    auto m = make_reference(t, MeasureVariant::smooth);
    for (double x = -4.05; x < 4.0; x += 0.3) {
      if (std::abs(std::abs(x) - m.patch_end()) < 0.02) continue;
      double e = 1e-5;
      double fd = (m.log_density(pt(x + e)) - m.log_density(pt(x - e))) / (2 * e);
      CHECK(std::abs(fd - m.grad_log_density(pt(x))[0]) < 1e-6);
      double fd2 = (m.axis_dlog(x + e) - m.axis_dlog(x - e)) / (2 * e);
      CHECK(std::abs(fd2 - m.hess_log_density_diag(pt(x))[0]) < 1e-5);
    }
  }
}

TEST_CASE("theta is increasing from 0 and C2 at the origin for smooth") {
  for (double t : {0.5, 1.0, 1.5}) {
    auto m = make_reference(t, MeasureVariant::smooth);
    CHECK(m.theta(0.0) == 0.0);
    CHECK(m.theta_d1(0.0) == 0.0);
    double prev = 0.0;
    for (double z = 0.01; z < 20; z += 0.01) {
      double th = m.theta(z);
      REQUIRE(th > prev);
      prev = th;
    }
    Point x(2);
    x << 0.7, -3.0;
    CHECK(m.log_density(x) <= 2 * m.log_normalizer());
  }
}

TEST_CASE("convexity check reports") {
  for (double t : {1.2, 1.5, 2.0}) {
    auto rep = make_reference(t, MeasureVariant::smooth).check_convexity();
    CAPTURE(t);
    CHECK(rep.theta_convex);
  }
  auto simple2 = make_reference(2.0, MeasureVariant::simple).check_convexity();
  CHECK(simple2.theta_convex);
  CHECK(simple2.neg_sqrt_theta_convex);
}

}
