#include "verify.hpp"

#include "config.hpp"
#include "log.hpp"
#include "runner.hpp"

#include "infogeo/diagnostics.hpp"
#include "infogeo/filter.hpp"
#include "infogeo/geometry.hpp"
#include "infogeo/numerics.hpp"
#include "infogeo/sampling.hpp"
#include "infogeo/sobolev.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace infogeo::cli {

using nlohmann::json;

Fault parse_fault(const std::string& name) {
  if (name == "none") return Fault::none;
  if (name == "psi2") return Fault::psi2;
  throw DomainError("unknown fault '" + name + "' (expected none or psi2)");
}

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

// Passes when value <= bound; the detail records both.
PropertyResult at_most(double value, double bound, const std::string& what) {
  return {value <= bound, what + " = " + sci(value) + " (bound " + sci(bound) + ")"};
}

PropertyResult all(std::initializer_list<PropertyResult> parts) {
  PropertyResult out{true, ""};
  for (const auto& p : parts) {
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += p.detail;
    out.ok = out.ok && p.ok;
  }
  return out;
}

std::mt19937_64 rng_for(const VerifyContext& ctx, std::uint64_t salt) {
  return std::mt19937_64(numerics::splitmix64(ctx.seed ^ (salt * 0x9e3779b97f4a7c15ULL)));
}

double psi2_scale(const VerifyContext& ctx) { return ctx.fault == Fault::psi2 ? 1.01 : 1.0; }

WeightedGridPtr smooth1(double L = 10.0, int n = 801) {
  return make_weighted_grid(build_grid(1, L, n), make_reference(1.0, MeasureVariant::smooth));
}

WeightedGridPtr gauss1(double L = 8.0, int n = 801) {
  return make_weighted_grid(build_grid(1, L, n), make_reference(2.0, MeasureVariant::simple));
}

// ---------------------------------------------------------------- grid

PropertyResult grid_linearity(const VerifyContext& ctx) {
  auto g = build_grid(1, 8.0, 161);
  auto rng = rng_for(ctx, 1);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    Vector u = random_smooth_field(*g, rng), v = random_smooth_field(*g, rng);
    const double a = std::uniform_real_distribution<double>(-2, 2)(rng);
    for (int k = 1; k <= 2; ++k) {
      Vector lhs = diff(*g, a * u + v, {k});
      Vector rhs = a * diff(*g, u, {k}) + diff(*g, v, {k});
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff() /
                                  std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    }
  }
  return at_most(worst, 1e-12, "relative defect");
}

PropertyResult grid_mixed_partials(const VerifyContext& ctx) {
  auto g = build_grid(2, 4.0, 41);
  auto rng = rng_for(ctx, 2);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    Vector u = random_smooth_field(*g, rng);
    Vector xy = diff(*g, diff(*g, u, {1, 0}), {0, 1});
    Vector yx = diff(*g, diff(*g, u, {0, 1}), {1, 0});
    Vector both = diff(*g, u, {1, 1});
    worst = std::max({worst, (xy - yx).cwiseAbs().maxCoeff(), (xy - both).cwiseAbs().maxCoeff()});
  }
  return at_most(worst, 1e-10, "max |Dx Dy u - Dy Dx u|");
}

PropertyResult grid_integration_by_parts(const VerifyContext&) {
  auto defect = [](int n) {
    auto g = build_grid(1, 8.0, n);
    WeightedGrid w(g, make_reference(2.0, MeasureVariant::simple));
    Vector x = g->coordinate(0);
    Vector u = (-x.array().square()).exp() * x.array().sin();
    Vector v = (-x.array().square()).exp() * (1.0 + x.array());
    Vector dl = w.dlog(0);
    return std::abs(w.integrate(diff(*g, u, {1}).cwiseProduct(v)) +
                    w.integrate(u.cwiseProduct(diff(*g, v, {1}))) +
                    w.integrate(u.cwiseProduct(v).cwiseProduct(dl)));
  };
  const double d1 = defect(81), d2 = defect(161);
  return all({at_most(d1, 1e-3, "defect(81)"), at_most(d2, d1 / 8.0, "defect(161)")});
}

PropertyResult grid_refinement(const VerifyContext&) {
  // E_mu x^2 under the smooth t = 1 measure, which is only C^2 at |x| = 1
  const auto m = make_reference(1.0, MeasureVariant::smooth);
  const double exact =
      2.0 * (numerics::integrate([&](double z) { return z * z * std::exp(m.axis_log_density(z)); },
                                 0.0, 1.0) +
             numerics::integrate([&](double z) { return z * z * std::exp(m.axis_log_density(z)); },
                                 1.0, 60.0));
  auto err = [&](int n) {
    auto w = smooth1(30.0, n);
    Vector x = w->grid().coordinate(0);
    return std::abs(w->integrate(x.cwiseAbs2()) - exact);
  };
  const double e1 = err(401), e2 = err(801), e3 = err(1601);
  return all({at_most(e3, 1e-5, "error(1601)"), at_most(e2, e1, "error(801) vs error(401)"),
              at_most(e3, e2, "error(1601) vs error(801)")});
}

// ---------------------------------------------------------------- measure

PropertyResult measure_c1_matching(const VerifyContext&) {
  double worst = 0.0;
  for (double t : {0.5, 1.0, 1.5, 2.0}) {
    const auto m = make_reference(t, MeasureVariant::smooth);
    const auto [left, right] = m.theta_d1_at_patch_end();
    worst = std::max(worst, std::abs(left - right));
  }
  return at_most(worst, 1e-10, "max |theta'(z_t-) - theta'(z_t+)|");
}

PropertyResult measure_normalization(const VerifyContext&) {
  double worst = 0.0;
  for (double t : {0.5, 1.0, 1.5, 2.0}) {
    worst = std::max(worst, std::abs(make_reference(t, MeasureVariant::smooth).normalization_residual()));
  }
  for (double t : {1.0, 1.5, 2.0}) {
    worst = std::max(worst, std::abs(make_reference(t, MeasureVariant::simple).normalization_residual()));
  }
  return at_most(worst, 1e-10, "max |mass - 1|");
}

PropertyResult measure_grad_fd(const VerifyContext& ctx) {
  auto rng = rng_for(ctx, 3);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  double worst = 0.0;
  for (double t : {0.5, 1.0, 1.5, 2.0}) {
    const auto m = make_reference(t, MeasureVariant::smooth);
    for (int i = 0; i < 50; ++i) {
      Point x(2);
      x << u(rng), u(rng);
      // keep the stencil off the patch end, where theta'' jumps
      bool near = false;
      for (int k = 0; k < 2; ++k) near = near || std::abs(std::abs(x[k]) - m.patch_end()) < 1e-2;
      if (near) continue;
      const Point g = m.grad_log_density(x);
      for (int k = 0; k < 2; ++k) {
        const double h = 1e-5;
        Point xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        const double fd = (m.log_density(xp) - m.log_density(xm)) / (2 * h);
        worst = std::max(worst, std::abs(fd - g[k]) / std::max(1.0, std::abs(g[k])));
      }
    }
  }
  return at_most(worst, 1e-6, "relative gradient error");
}

PropertyResult measure_c2_at_zero(const VerifyContext&) {
  double worst = 0.0;
  for (double t : {0.5, 1.0, 1.5, 2.0}) {
    const auto m = make_reference(t, MeasureVariant::smooth);
    worst = std::max({worst, std::abs(m.theta_d1(0.0)),
                      std::abs(m.axis_d2log(1e-7) - m.axis_d2log(-1e-7)),
                      std::abs(m.axis_dlog(1e-7) + m.axis_dlog(-1e-7))});
  }
  return at_most(worst, 1e-9, "max jump of l' or l'' at 0");
}

// ---------------------------------------------------------------- deformed

PropertyResult deformed_round_trip(const VerifyContext&) {
  double worst = 0.0;
  for (Family f : {Family::balanced, Family::kaniadakis}) {
    DeformedExp e(f);
    for (int i = 0; i < 1000; ++i) {
      const double a = -30.0 + 60.0 * i / 999.0;
      worst = std::max(worst, std::abs(e.log(e.psi(a)) - a));
    }
  }
  return at_most(worst, 1e-12, "max |log_d(psi(a)) - a|");
}

PropertyResult deformed_monotone_convex(const VerifyContext& ctx) {
  auto rng = rng_for(ctx, 4);
  std::uniform_real_distribution<double> u(-700.0, 1000.0);
  DeformedExp b, k(Family::kaniadakis);
  int bad = 0;
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng), c = a / 100.0;
    if (!(b.deriv(1, a) > 0.0) || !(b.deriv(2, a) > 0.0)) ++bad;
    if (!(k.deriv(1, c) > 0.0) || !(k.deriv(2, c) > 0.0)) ++bad;
  }
  return {bad == 0, std::to_string(bad) + " samples with psi' <= 0 or psi'' <= 0"};
}

PropertyResult deformed_bounded(const VerifyContext& ctx) {
  auto rng = rng_for(ctx, 5);
  std::uniform_real_distribution<double> u(-700.0, 1000.0);
  DeformedExp b;
  double worst = 0.0;
  int bad = 0;
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng);
    const double d1 = b.deriv(1, a);
    if (!(d1 > 0.0 && d1 < 1.0)) ++bad;
    for (int n = 2; n <= 6; ++n) worst = std::max(worst, std::abs(b.deriv(n, a)));
  }
  return {bad == 0 && worst <= 1.0,
          std::to_string(bad) + " samples with psi' outside (0,1); max |psi^(n)|, n=2..6, = " +
              sci(worst)};
}

PropertyResult deformed_derivative_fd(const VerifyContext& ctx) {
  const double s2 = psi2_scale(ctx);
  double worst = 0.0;
  int worst_n = 0;
  for (Family f : {Family::balanced, Family::kaniadakis}) {
    DeformedExp e(f);
    auto d = [&](int n, double a) { return e.deriv(n, a) * (n == 2 ? s2 : 1.0); };
    for (int n = 1; n <= 6; ++n) {
      for (double a = -5.0; a <= 5.0; a += 0.25) {
        const double h = 1e-3;
        const double fd =
            (-d(n - 1, a + 2 * h) + 8 * d(n - 1, a + h) - 8 * d(n - 1, a - h) + d(n - 1, a - 2 * h)) /
            (12 * h);
        const double ex = d(n, a);
        const double rel = std::abs(fd - ex) / std::max(std::abs(ex), 1e-3);
        if (rel > worst) {
          worst = rel;
          worst_n = n;
        }
      }
    }
  }
  return at_most(worst, 1e-6, "max relative error (order " + std::to_string(worst_n) + ")");
}

PropertyResult deformed_lipschitz(const VerifyContext& ctx) {
  auto rng = rng_for(ctx, 6);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  DeformedExp b, k(Family::kaniadakis);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double a = u(rng), c = u(rng);
    if (a == c) continue;
    worst = std::max({worst, std::abs(b.psi(a) - b.psi(c)) / std::abs(a - c),
                      0.5 * std::abs(k.psi(a) - k.psi(c)) / std::abs(a - c)});
  }
  return at_most(worst, 1.0 + 1e-12, "max difference quotient / Lipschitz constant");
}

// ---------------------------------------------------------------- sobolev

PropertyResult sobolev_norm_axioms(const VerifyContext& ctx) {
  auto wg = gauss1(8.0, 401);
  auto rng = rng_for(ctx, 7);
  const std::vector<MixedNormSpec> specs = {MixedNormSpec::hilbert(2), MixedNormSpec::fixed(2, 1.5),
                                            MixedNormSpec::mixed(2, 4.0, 2.0)};
  double hom = 0.0, tri = 0.0, zero = 0.0;
  for (const auto& spec : specs) {
    zero = std::max(zero, mixed_norm(*wg, Vector::Zero(wg->size()), spec));
    for (int i = 0; i < 10; ++i) {
      Vector u = random_smooth_field(wg->grid(), rng), v = random_smooth_field(wg->grid(), rng);
      const double c = std::uniform_real_distribution<double>(-3, 3)(rng);
      const double nu = mixed_norm(*wg, u, spec), nv = mixed_norm(*wg, v, spec);
      hom = std::max(hom, std::abs(mixed_norm(*wg, c * u, spec) - std::abs(c) * nu) / nu);
      tri = std::max(tri, mixed_norm(*wg, u + v, spec) - nu - nv);
    }
  }
  return all({at_most(zero, 0.0, "norm of 0"), at_most(hom, 1e-12, "homogeneity defect"),
              at_most(tri, 1e-12, "triangle excess")});
}

PropertyResult sobolev_refinement(const VerifyContext&) {
  const auto spec = MixedNormSpec::hilbert(2);
  auto norm = [&](int n) {
    auto wg = smooth1(20.0, n);
    Vector x = wg->grid().coordinate(0);
    return mixed_norm(*wg, x.array().sin().matrix(), spec);
  };
  const double n1 = norm(201), n2 = norm(401), n3 = norm(801);
  const double d1 = std::abs(n2 - n1), d2 = std::abs(n3 - n2);
  return all({at_most(d2, d1, "|N(801) - N(401)| vs |N(401) - N(201)|"),
              at_most(d2 / n3, 1e-3, "relative change at the finest level")});
}

PropertyResult sobolev_lp_monotone(const VerifyContext& ctx) {
  auto wg = smooth1(10.0, 401);
  auto rng = rng_for(ctx, 8);
  double worst = -1.0;
  for (int i = 0; i < 20; ++i) {
    Vector u = random_smooth_field(wg->grid(), rng);
    const double l1 = wg->lp_norm(u, 1.0), l2 = wg->lp_norm(u, 2.0), l4 = wg->lp_norm(u, 4.0);
    worst = std::max({worst, l1 - l2, l2 - l4});
  }
  return at_most(worst, 1e-12, "max(||u||_1 - ||u||_2, ||u||_2 - ||u||_4)");
}

// ---------------------------------------------------------------- manifold

PropertyResult manifold_chart_bijection(const VerifyContext& ctx) {
  auto wg = smooth1(20.0, 401);
  auto rng = rng_for(ctx, 9);
  double worst = 0.0;
  for (Family f : {Family::balanced, Family::kaniadakis}) {
    DeformedExp e(f);
    for (int i = 0; i < 10; ++i) {
      Vector a = random_smooth_field(wg->grid(), rng, 5.0);
      auto P = ManifoldPoint::from_chart(wg, e, a);
      auto back = ManifoldPoint::from_density(wg, e, P.density());
      worst = std::max(worst, (back.chart() - a).cwiseAbs().maxCoeff());
    }
  }
  return at_most(worst, 1e-11, "max |phi(psi(a)) - a|");
}

PropertyResult manifold_normalize_idempotent(const VerifyContext& ctx) {
  auto wg = smooth1(30.0, 1201);
  auto rng = rng_for(ctx, 10);
  DeformedExp b;
  double mass = 0.0, again = 0.0;
  const double z0 = normalize(wg, b, Vector::Zero(wg->size())).normalizer();
  for (int i = 0; i < 20; ++i) {
    Vector a0 = random_centred_field(*wg, rng, 4.0);
    auto P = normalize(wg, b, a0);
    auto Q = normalize(wg, b, P.centred_chart());
    mass = std::max(mass, std::abs(P.mass() - 1.0));
    again = std::max(again, std::abs(Q.normalizer() - P.normalizer()));
  }
  return all({{z0 == 0.0, "Z(0) = " + sci(z0)}, at_most(mass, 1e-12, "max |E psi(a+Z) - 1|"),
              at_most(again, 1e-10, "max |Z(a0) after renormalizing|")});
}

PropertyResult manifold_z_derivatives_fd(const VerifyContext& ctx) {
  auto wg = smooth1(30.0, 1201);
  auto rng = rng_for(ctx, 11);
  DeformedExp b;
  auto zof = [&](const Vector& a) { return normalize(wg, b, a).normalizer(); };
  double g1 = 0.0, g2 = 0.0;
  for (int i = 0; i < 5; ++i) {
    Vector a0 = random_centred_field(*wg, rng, 2.0);
    Vector u = random_centred_field(*wg, rng), v = random_centred_field(*wg, rng);
    auto pt = normalize(wg, b, a0);
    const double eps = 1e-4;
    const double fd = (zof(a0 + eps * u) - zof(a0 - eps * u)) / (2 * eps);
    const double fd2 = (zof(a0 + eps * (u + v)) - zof(a0 + eps * (u - v)) -
                        zof(a0 - eps * (u - v)) + zof(a0 - eps * (u + v))) /
                       (4 * eps * eps);
    g1 = std::max(g1, std::abs(fd - z_gradient(pt, u)));
    g2 = std::max(g2, std::abs(fd2 - z_hessian(pt, u, v)));
  }
  return all({at_most(g1, 1e-6, "gradient error"), at_most(g2, 1e-4, "hessian error")});
}

PropertyResult manifold_mass_positive(const VerifyContext& ctx) {
  auto wg = smooth1(20.0, 401);
  auto rng = rng_for(ctx, 12);
  DeformedExp b;
  double minp = INFINITY, escort = 0.0;
  for (int i = 0; i < 10; ++i) {
    auto P = normalize(wg, b, random_centred_field(*wg, rng, 20.0));
    minp = std::min(minp, P.density().minCoeff());
    escort = std::max(escort, std::abs(wg->integrate(escort_density(P)) - 1.0));
  }
  return all({{minp > 0.0, "min density = " + sci(minp)},
              at_most(escort, 1e-12, "escort mass defect")});
}

PropertyResult manifold_faa_di_bruno(const VerifyContext& ctx) {
  const double s2 = psi2_scale(ctx);
  DeformedExp b;
  auto g1 = build_grid(1, 30.0, 6001);
  Vector s = g1->coordinate(0).array().sin();
  double worst = std::max(faa_di_bruno_residual(*g1, b, s, {1}, s2),
                          faa_di_bruno_residual(*g1, b, s, {2}, s2));
  auto g2 = build_grid(2, 3.0, 121);
  Vector a2 = g2->sample([](const Point& p) { return std::sin(p[0]) * std::cos(0.5 * p[1]); });
  double worst2 = 0.0;
  for (auto idx : {MultiIndex{1, 0}, MultiIndex{0, 1}, MultiIndex{2, 0}, MultiIndex{1, 1},
                   MultiIndex{0, 2}}) {
    worst2 = std::max(worst2, faa_di_bruno_residual(*g2, b, a2, idx, s2));
  }
  return all({at_most(worst, 1e-5, "1-D chain rule residual"),
              at_most(worst2, 1e-4, "2-D chain rule residual")});
}

// ---------------------------------------------------------------- geometry

struct Triple {
  ManifoldPoint P, Q, R;
};

Triple random_triple(const WeightedGridPtr& wg, std::mt19937_64& rng) {
  DeformedExp b;
  auto pt = [&] { return ManifoldPoint::from_chart(wg, b, random_smooth_field(wg->grid(), rng, 2.0)); };
  return {pt(), pt(), pt()};
}

PropertyResult geometry_kl_nonnegative(const VerifyContext& ctx) {
  auto wg = smooth1();
  auto rng = rng_for(ctx, 13);
  double minkl = INFINITY, self = 0.0;
  for (int i = 0; i < 20; ++i) {
    auto t = random_triple(wg, rng);
    minkl = std::min(minkl, kl(t.P, t.Q));
    self = std::max(self, std::abs(kl(t.P, t.P)));
  }
  return all({{minkl >= 0.0, "min D(P|Q) = " + sci(minkl)}, at_most(self, 1e-14, "max |D(P|P)|")});
}

PropertyResult geometry_cosine_rule(const VerifyContext& ctx) {
  auto wg = smooth1();
  auto rng = rng_for(ctx, 14);
  double worst = 0.0, sym = 0.0;
  for (int i = 0; i < 20; ++i) {
    auto t = random_triple(wg, rng);
    worst = std::max(worst, std::abs(cosine_defect(t.P, t.Q, t.R)));
    const auto sb = symmetric_bound(t.P, t.Q);
    sym = std::max(sym, std::abs(sb.symmetric_kl - sb.pairing));
  }
  return all({at_most(worst, 1e-8, "cosine defect"), at_most(sym, 1e-8, "symmetric identity")});
}

PropertyResult geometry_global_bound(const VerifyContext& ctx) {
  auto wg = smooth1();
  auto rng = rng_for(ctx, 15);
  double worst = -INFINITY;
  for (int i = 0; i < 20; ++i) {
    auto t = random_triple(wg, rng);
    const auto sb = symmetric_bound(t.P, t.Q);
    worst = std::max(worst, sb.symmetric_kl - sb.half_l2);
  }
  return at_most(worst, 0.0, "max(D(P|Q) + D(Q|P) - ||dphi||^2/2)");
}

PropertyResult geometry_fisher_positive(const VerifyContext& ctx) {
  auto wg = smooth1();
  auto rng = rng_for(ctx, 16);
  double minratio = INFINITY, excess = -INFINITY;
  for (int i = 0; i < 20; ++i) {
    auto t = random_triple(wg, rng);
    Vector u = random_smooth_field(wg->grid(), rng);
    const double g = fisher_rao(t.P, u, u);
    const double l2 = wg->integrate(u.cwiseAbs2());
    minratio = std::min(minratio, g / l2);
    excess = std::max(excess, g - l2);
  }
  return all({{minratio > 0.0, "min <U,U>/E(U^2) = " + sci(minratio)},
              at_most(excess, 0.0, "max(<U,U> - E(U^2))")});
}

PropertyResult geometry_bilinearity(const VerifyContext& ctx) {
  auto wg = smooth1();
  auto rng = rng_for(ctx, 17);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    auto t = random_triple(wg, rng);
    Vector u = random_smooth_field(wg->grid(), rng), v = random_smooth_field(wg->grid(), rng),
           w = random_smooth_field(wg->grid(), rng);
    const double a = 1.7, c = -0.4;
    const double lhs = fisher_rao(t.P, a * u + c * v, w);
    const double rhs = a * fisher_rao(t.P, u, w) + c * fisher_rao(t.P, v, w);
    worst = std::max({worst, std::abs(lhs - rhs),
                      std::abs(fisher_rao(t.P, u, w) - fisher_rao(t.P, w, u))});
  }
  return at_most(worst, 1e-12, "bilinearity and symmetry defect");
}

PropertyResult geometry_eguchi(const VerifyContext& ctx) {
  auto wg = gauss1();
  auto rng = rng_for(ctx, 18);
  const double step = 1e-3;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    auto t = random_triple(wg, rng);
    Vector u = random_smooth_field(wg->grid(), rng), v = random_smooth_field(wg->grid(), rng);
    const auto r = eguchi_check(t.P, u, v, step);
    worst = std::max(worst, std::abs(r.fd - r.metric));
  }
  return at_most(worst, std::max(1e-4, 10 * step * step), "|cross-difference - metric|");
}

// ---------------------------------------------------------------- filter

PropertyResult filter_operator_route(const VerifyContext&) {
  auto wg = smooth1(10.0, 3201);
  FilterSetup setup(FilterModel::double_well(1.0, 1.0, 0.0), wg);
  const Vector a = DeformedExp().log(
      density_wrt_mu(*wg, {.kind = "gaussian", .mean = 0.3, .scale = 0.9}));
  const Vector p = DeformedExp().psi(a);
  const Vector dens = ((1.0 + p.array()) / p.array() * setup.forward_operator(p).array()).matrix();
  const Vector chart = setup.drift_u(a);
  const Vector& x = setup.x();
  const double reach = 2.0 * wg->grid().spacing() + 1e-12;
  double worst = 0.0;
  for (Eigen::Index i = 2; i < x.size() - 2; ++i) {
    if (p[i] <= 1e-6 || std::abs(std::abs(x[i]) - 1.0) <= reach) continue;
    worst = std::max(worst, std::abs(chart[i] - dens[i]));
  }
  return at_most(worst, 1e-4, "max |u(a) - (1+p)/p A p|");
}

PropertyResult filter_renormalized_mass(const VerifyContext& ctx) {
  FilterSetup setup(FilterModel::linear(-1.0, 1.0, 1.0), smooth1());
  auto path = simulate_sde(setup.model(), {0.0, 1.0}, 0.1, 1e-4, ctx.seed);
  const Vector p0 = prior_density(setup, {0.0, 1.0});
  auto run = run_dense_filter(setup, path, p0, {.dt = 1e-4, .out_dt = 0.01, .renormalize = true});
  double worst = 0.0;
  for (const auto& m : run.moments) worst = std::max(worst, std::abs(m.mass - 1.0));
  return at_most(worst, 1e-12, "max |mass - 1|");
}

PropertyResult filter_homogeneity(const VerifyContext& ctx) {
  FilterSetup setup(FilterModel::linear(-1.0, 1.0, 1.0), smooth1());
  auto path = simulate_sde(setup.model(), {0.0, 1.0}, 0.2, 1e-4, ctx.seed);
  const Vector p0 = prior_density(setup, {0.0, 1.0});
  auto one = run_dense_filter(setup, path, p0, {.dt = 1e-4, .out_dt = 0.05});
  auto two = run_dense_filter(setup, path, 2.0 * p0, {.dt = 1e-4, .out_dt = 0.05});
  double worst = 0.0;
  for (std::size_t i = 0; i < one.density.size(); ++i) {
    worst = std::max(worst, (two.density[i] - 2.0 * one.density[i]).cwiseAbs().maxCoeff() /
                                one.density[i].cwiseAbs().maxCoeff());
  }
  return at_most(worst, 1e-10, "relative defect of 2 pi_0 -> 2 pi_t");
}

PropertyResult filter_grid_basis_matches_dense(const VerifyContext& ctx) {
  auto wg = smooth1(8.0, 81);
  FilterSetup setup(FilterModel::linear(-1.0, 1.0, 1.0), wg);
  const Prior prior{0.0, 1.0};
  auto basis = SubmanifoldBasis::grid_indicators(wg);
  const Vector p0 = prior_density(setup, prior);
  auto path = simulate_sde(setup.model(), prior, 0.2, 1e-4, ctx.seed);
  auto dense = run_dense_filter(setup, path, p0, {.dt = 1e-4, .out_dt = 0.05});
  auto proj = run_projection_filter(setup, basis, path, prior_coefficients(basis, p0),
                                    {.dt = 1e-4, .out_dt = 0.05});
  double kl_worst = 0.0, mean_worst = 0.0;
  for (const auto& r : evaluate_run(setup, dense, proj, nullptr)) {
    kl_worst = std::max(kl_worst, r.kl_dp);
    mean_worst = std::max(mean_worst, std::abs(r.mean_proj - r.mean_dense));
  }
  return all({at_most(kl_worst, 1e-4, "max KL(dense|proj)"),
              at_most(mean_worst, 5e-3, "max mean difference")});
}

PropertyResult filter_seed_determinism(const VerifyContext& ctx) {
  const auto model = FilterModel::linear(-1.0, 1.0, 1.0);
  auto a = simulate_sde(model, {0.0, 1.0}, 0.5, 1e-3, ctx.seed);
  auto b = simulate_sde(model, {0.0, 1.0}, 0.5, 1e-3, ctx.seed);
  auto c = simulate_sde(model, {0.0, 1.0}, 0.5, 1e-3, ctx.seed + 1);
  const bool same = a.X == b.X && a.dY == b.dY;
  const bool differs = a.dY != c.dY;
  return {same && differs, std::string("same seed ") + (same ? "identical" : "differs") +
                               ", next seed " + (differs ? "differs" : "identical")};
}

// ---------------------------------------------------------------- diagnostics

PropertyResult diagnostics_disjoint_supports(const VerifyContext&) {
  const CounterexampleConfig cfg;
  double gap = INFINITY;
  for (int n = cfg.m; n < cfg.m + cfg.terms; ++n) {
    const double s0 = std::pow(n, 1.0 / cfg.t), s1 = std::pow(n + 1, 1.0 / cfg.t);
    gap = std::min(gap, (s1 - 1.0 / (n + 1)) - (s0 + 1.0 / n));
  }
  bool rejects = false;
  try {
    CounterexampleConfig overlap;
    overlap.t = 2.0;
    dahlberg_terms(overlap);
  } catch (const DomainError&) {
    rejects = true;
  }
  return {gap > 0.0 && rejects, "min gap between spheres = " + sci(gap) +
                                    (rejects ? "; overlap rejected" : "; overlap NOT rejected")};
}

PropertyResult diagnostics_b_growth(const VerifyContext&) {
  const auto series = dahlberg_terms(CounterexampleConfig{});
  double worst = INFINITY;
  for (std::size_t i = 1; i < series.terms.size(); ++i) {
    if (series.terms[i].n < 15) continue;
    worst = std::min(worst, series.terms[i].partial_B / series.terms[i - 1].partial_B);
  }
  return {worst >= 1.15, "min partial-sum growth for n >= 15 = " + sci(worst) + " (need 1.15)"};
}

PropertyResult diagnostics_epsilon_positive(const VerifyContext&) {
  const CounterexampleConfig cfg;
  const auto series = dahlberg_terms(cfg);
  DeformedExp b;
  double minval = INFINITY;
  for (int i = 0; i <= 200; ++i) {
    const double z = cfg.zeta1 + (cfg.zeta2 - cfg.zeta1) * i / 200.0;
    minval = std::min(minval, std::abs(b.deriv(cfg.k, z)));
  }
  return {series.epsilon > 0.0 && series.epsilon <= minval * (1 + 1e-12),
          "epsilon = " + sci(series.epsilon) + ", min |psi^(k)| on window = " + sci(minval)};
}

// ---------------------------------------------------------------- cli

PropertyResult cli_config_round_trip(const VerifyContext&) {
  RunConfig c;
  c.model.name = "double_well";
  c.model.params = {{"theta", 1.0}, {"sigma", 0.5}, {"H", 1.0}};
  c.basis.m = 3;
  c.geometry.densities = {{"constant", 0.0, 1.0, 2.0}, {"laplace", 0.2, 0.7, 1.0}};
  c.counterexample.alpha_order = 3;
  int bad = 0;
  for (const RunConfig& cfg : {RunConfig{}, c}) {
    const RunConfig once = parse_config(to_json(cfg));
    if (!(once == cfg) || !(parse_config(to_json(once)) == once)) ++bad;
  }
  return {bad == 0, std::to_string(bad) + " configs changed after parse(serialize(.))"};
}

PropertyResult cli_deterministic_outputs(const VerifyContext& ctx) {
  RunConfig cfg;
  cfg.grid = {8.0, 161};
  cfg.time.T = 0.1;
  auto render = [&](int threads) {
    const auto ex = run_filter_experiment(cfg, ctx.seed, 3, threads);
    std::string out = filter_summary(ex).dump();
    for (const auto& t : ex.trials) out += rows_csv(t.rows);
    return out;
  };
  const std::string a = render(1), b = render(1), c = render(2);
  return {a == b && a == c, std::string("repeat ") + (a == b ? "identical" : "differs") +
                                ", two threads " + (a == c ? "identical" : "differs")};
}

}  // namespace

const std::vector<Property>& property_registry() {
  static const std::vector<Property> reg = {
      {"grid", "linearity", grid_linearity},
      {"grid", "mixed_partials", grid_mixed_partials},
      {"grid", "integration_by_parts", grid_integration_by_parts},
      {"grid", "refinement", grid_refinement},
      {"measure", "c1_matching", measure_c1_matching},
      {"measure", "normalization", measure_normalization},
      {"measure", "grad_fd", measure_grad_fd},
      {"measure", "c2_at_zero", measure_c2_at_zero},
      {"deformed", "round_trip", deformed_round_trip},
      {"deformed", "monotone_convex", deformed_monotone_convex},
      {"deformed", "bounded", deformed_bounded},
      {"deformed", "derivative_fd", deformed_derivative_fd},
      {"deformed", "lipschitz", deformed_lipschitz},
      {"sobolev", "norm_axioms", sobolev_norm_axioms},
      {"sobolev", "refinement", sobolev_refinement},
      {"sobolev", "lp_monotone", sobolev_lp_monotone},
      {"manifold", "chart_bijection", manifold_chart_bijection},
      {"manifold", "normalize_idempotent", manifold_normalize_idempotent},
      {"manifold", "z_derivatives_fd", manifold_z_derivatives_fd},
      {"manifold", "mass_positive", manifold_mass_positive},
      {"manifold", "faa_di_bruno", manifold_faa_di_bruno},
      {"geometry", "kl_nonnegative", geometry_kl_nonnegative},
      {"geometry", "cosine_rule", geometry_cosine_rule},
      {"geometry", "global_bound", geometry_global_bound},
      {"geometry", "fisher_positive", geometry_fisher_positive},
      {"geometry", "bilinearity", geometry_bilinearity},
      {"geometry", "eguchi", geometry_eguchi},
      {"filter", "operator_route", filter_operator_route},
      {"filter", "renormalized_mass", filter_renormalized_mass},
      {"filter", "homogeneity", filter_homogeneity},
      {"filter", "grid_basis_matches_dense", filter_grid_basis_matches_dense},
      {"filter", "seed_determinism", filter_seed_determinism},
      {"diagnostics", "disjoint_supports", diagnostics_disjoint_supports},
      {"diagnostics", "b_growth", diagnostics_b_growth},
      {"diagnostics", "epsilon_positive", diagnostics_epsilon_positive},
      {"cli", "config_round_trip", cli_config_round_trip},
      {"cli", "deterministic_outputs", cli_deterministic_outputs},
  };
  return reg;
}

VerifyReport run_verify(const std::string& module, const VerifyContext& ctx) {
  const auto& reg = property_registry();
  if (!module.empty()) {
    bool known = false;
    for (const auto& p : reg) known = known || p.module == module;
    if (!known) throw DomainError("unknown module '" + module + "'");
  }
  VerifyReport rep;
  json results = json::array(), failures = json::array();
  for (const auto& p : reg) {
    if (!module.empty() && p.module != module) continue;
    const std::string id = p.module + "." + p.name;
    log(LogLevel::info, "running " + id);
    PropertyResult r;
    try {
      r = p.run(ctx);
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    json entry = {{"property", id}, {"ok", r.ok}, {"detail", r.detail}};
    results.push_back(entry);
    if (r.ok) {
      ++rep.passed;
    } else {
      ++rep.failed;
      failures.push_back(entry);
    }
  }
  rep.json = {{"module", module.empty() ? "all" : module},
              {"seed", ctx.seed},
              {"passed", rep.passed},
              {"failed", rep.failed},
              {"failures", failures},
              {"results", results}};
  return rep;
}

}  // namespace infogeo::cli
