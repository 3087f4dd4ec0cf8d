#include <doctest.h>

#include "infogeo/diagnostics.hpp"

#include <cmath>

using namespace infogeo;

TEST_SUITE("diagnostics") {

TEST_CASE("bump profile") {
  for (double y : {-0.5, -0.3, 0.0, 0.2, 0.5}) CHECK(bump(y) == y);
  for (double y : {-3.0, -1.0, 1.0, 1.7}) CHECK(bump(y) == 0.0);
  double prev = 1.0;
  for (int i = 0; i <= 100; ++i) {
    const double s = 0.5 + 0.5 * i / 100.0;
    const double v = bump_transition(s);
    CHECK(v <= prev);
    CHECK(v >= 0.0);
    prev = v;
  }
  CHECK(bump_transition(0.75) == doctest::Approx(0.5));
  CHECK(bump(-0.8) == -bump(0.8));
}

TEST_CASE("series constants") {
  auto s = dahlberg_terms({});
  CHECK(s.alpha == doctest::Approx(std::exp(0.4)).epsilon(1e-15));
  CHECK(s.limit_A == doctest::Approx(std::exp(-0.2)).epsilon(1e-14));
  CHECK(s.limit_B == doctest::Approx(std::exp(0.2)).epsilon(1e-14));
  REQUIRE(s.terms.size() == 30);
  CHECK(s.terms.front().n == 2);
  CHECK(s.terms.back().n == 31);
  CHECK(std::isnan(s.terms.front().ratio_A));

  // psi'' = y / (1 + y)^3 peaks at y = 1/2, so on [-1, -0.1] the minimum is
  // at the right end, below psi''(-1)
  DeformedExp b;
  CHECK(s.epsilon == doctest::Approx(b.deriv(2, -0.1)).epsilon(1e-12));
  CHECK(b.deriv(2, -1.0) > s.epsilon);

  CounterexampleConfig cfg;
  cfg.alpha_order = 1;
  CHECK(dahlberg_terms(cfg).alpha == doctest::Approx(std::exp(2.0 / 3.0)).epsilon(1e-15));
}

TEST_CASE("linear core of the bump on T_n") {
  const double alpha = std::exp(0.4);
  for (int n : {2, 10, 30}) {
    const double slope = n * std::pow(alpha, n);
    const double width = 0.9 / slope;
    for (int i = 0; i <= 50; ++i) {
      const double off = width * i / 50.0;
      const double a = -1.0 + std::pow(alpha, n) * bump(n * off);
      CHECK(a == doctest::Approx(-1.0 + slope * off).epsilon(1e-14));
      CHECK(a <= -0.1 + 1e-12);
    }
  }
}

TEST_CASE("ratios follow the exponential rates once the polynomial factor is removed") {
  auto s = dahlberg_terms({});
  for (const auto& t : s.terms) {
    if (t.n < 15) continue;
    CAPTURE(t.n);
    CHECK(std::abs(t.compensated_A / s.limit_A - 1.0) < 1e-3);
    CHECK(std::abs(t.compensated_B / s.limit_B - 1.0) < 1e-3);
    const double poly = std::pow(t.n / (t.n - 1.0), 3.0);
    CHECK(t.ratio_A == doctest::Approx(t.compensated_A * poly).epsilon(1e-14));
  }
}

TEST_CASE("B partial sums diverge geometrically") {
  auto s = dahlberg_terms({});
  const DahlbergTerm* at15 = nullptr;
  const DahlbergTerm* at30 = nullptr;
  for (std::size_t i = 1; i < s.terms.size(); ++i) {
    const auto& t = s.terms[i];
    if (t.n >= 15) CHECK(t.partial_B / s.terms[i - 1].partial_B >= 1.15);
    if (t.n == 15) at15 = &t;
    if (t.n == 30) at30 = &t;
  }
  REQUIRE(at15);
  REQUIRE(at30);
  CHECK(at30->partial_B / at15->partial_B >= 10.0);
  // the A terms eventually decrease
  CHECK(s.terms.back().A < at15->A);
}

TEST_CASE("configuration checks") {
  CounterexampleConfig overlap;
  overlap.t = 2.0;  // sigma_n = sqrt(n) packs the spheres too tightly
  CHECK_THROWS_AS(dahlberg_terms(overlap), DomainError);
  CounterexampleConfig start;
  start.variant = MeasureVariant::smooth;  // z_t = 1 needs m > 2
  CHECK_THROWS_AS(dahlberg_terms(start), DomainError);
  start.m = 3;
  CHECK_NOTHROW(dahlberg_terms(start));
  CounterexampleConfig window;
  window.zeta2 = 0.5;
  CHECK_THROWS_AS(dahlberg_terms(window), DomainError);
  CounterexampleConfig flat;
  flat.lambda = 1.0;
  CHECK_THROWS_AS(dahlberg_terms(flat), DomainError);
  CounterexampleConfig even;
  even.nodes = 400;
  CHECK_THROWS_AS(dahlberg_terms(even), DomainError);
}

TEST_CASE("nu embedding of the zero chart") {
  EmbeddingTrendConfig cfg;
  cfg.samples = 1;
  cfg.include_zero = true;
  cfg.n0 = 301;
  auto tr = nu_embedding_trend(cfg);
  for (double v : tr.samples[0].norms) CHECK(std::abs(v - 1.0) < 1e-12);
  CHECK(tr.bounded);
}

TEST_CASE("nu embedding trend is bounded") {
  for (double lambda : {1.0, 2.0}) {
    CAPTURE(lambda);
    EmbeddingTrendConfig cfg;
    cfg.lambda = lambda;
    cfg.samples = 3;
    auto tr = nu_embedding_trend(cfg);
    CHECK(tr.nu == doctest::Approx((lambda + 1) / 2));
    CHECK(tr.grid_sizes == std::vector<int>{601, 1201, 2401});
    CHECK(tr.bounded);
    for (const auto& s : tr.samples) CHECK(std::isfinite(s.gf_norm));
  }
  EmbeddingTrendConfig bad;
  bad.k = 4;
  CHECK_THROWS_AS(nu_embedding_trend(bad), DomainError);
  bad.k = 3;
  bad.lambda = 1.5;
  CHECK_THROWS_AS(nu_embedding_trend(bad), DomainError);
}

}  // TEST_SUITE
