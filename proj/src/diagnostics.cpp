#include "infogeo/diagnostics.hpp"

#include "infogeo/grid.hpp"
#include "infogeo/numerics.hpp"
#include "infogeo/quadrature.hpp"
#include "infogeo/sampling.hpp"
#include "infogeo/sobolev.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace infogeo {

namespace {

double smooth_off(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

// Composite Simpson on uniform samples (odd count).
double simpson(const Vector& f, double h) {
  const Eigen::Index n = f.size();
  double s = f[0] + f[n - 1];
  for (Eigen::Index i = 1; i < n - 1; ++i) s += (i % 2 ? 4.0 : 2.0) * f[i];
  return s * h / 3.0;
}

// Integrates with n and 2n - 1 nodes; throws when they disagree by > 1%.
template <class Eval>
double checked(Eval eval, int n, const std::string& what) {
  const double coarse = eval(n);
  const double fine = eval(2 * n - 1);
  if (std::abs(fine - coarse) > 0.01 * std::abs(fine)) {
    throw NumericalError(what + ": local subgrid too coarse (" + std::to_string(coarse) +
                         " vs " + std::to_string(fine) + " after refinement)");
  }
  return fine;
}

}  // namespace

double bump_transition(double s) {
  if (s <= 0.5) return 1.0;
  if (s >= 1.0) return 0.0;
  const double on = smooth_off(1.0 - s), off = smooth_off(s - 0.5);
  return on / (on + off);
}

double bump(double y) { return y * bump_transition(std::abs(y)); }

DahlbergSeries dahlberg_terms(const CounterexampleConfig& cfg) {
  if (cfg.k < 1 || cfg.k > 4) throw DomainError("counterexample: k must be in 1..4");
  if (!(cfg.lambda > 1.0)) throw DomainError("counterexample: lambda must exceed 1");
  if (cfg.terms < 2) throw DomainError("counterexample: need at least two terms");
  if (cfg.nodes < 201 || cfg.nodes % 2 == 0) {
    throw DomainError("counterexample: local subgrid needs an odd node count >= 201");
  }
  if (!(cfg.zeta1 < cfg.zeta2 && cfg.zeta2 < cfg.zeta1 + 1.0)) {
    throw DomainError("counterexample: need zeta1 < zeta2 < zeta1 + 1");
  }
  const ReferenceMeasure mu = make_reference(cfg.t, cfg.variant);
  if (!(cfg.m > mu.patch_end() + 1.0)) {
    throw DomainError("counterexample: start index m must exceed z_t + 1 = " +
                      std::to_string(mu.patch_end() + 1.0));
  }
  const int last = cfg.m + cfg.terms - 1;
  auto sigma = [&](int n) { return std::pow(static_cast<double>(n), 1.0 / cfg.t); };
  for (int n = cfg.m; n < last; ++n) {
    if (!(sigma(n) + 1.0 / n < sigma(n + 1) - 1.0 / (n + 1))) {
      throw DomainError("counterexample: spheres S_" + std::to_string(n) + " and S_" +
                        std::to_string(n + 1) + " overlap");
    }
  }

  const DeformedExp fam(cfg.family);
  DahlbergSeries out;
  out.config = cfg;
  const int ka = cfg.alpha_order.value_or(cfg.k);
  out.alpha = std::exp(2.0 / ((ka + 1) * cfg.lambda - 1.0));
  const double log_alpha = std::log(out.alpha);
  out.limit_A = std::exp(cfg.lambda * log_alpha - 1.0);
  out.limit_B = std::exp((cfg.k * cfg.lambda - 1.0) * log_alpha - 1.0);

  out.epsilon = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 2000; ++i) {
    const double z = cfg.zeta1 + (cfg.zeta2 - cfg.zeta1) * i / 2000.0;
    out.epsilon = std::min(out.epsilon, std::abs(fam.deriv(cfg.k, z)));
  }
  if (!(out.epsilon > 0.0)) {
    throw DomainError("counterexample: psi^(k) vanishes on [zeta1, zeta2]");
  }

  const double lam = cfg.lambda;
  // j-th derivative profile integral over the sphere, in y = n (x - sigma_n)
  auto a_term = [&](int n, int j, int nodes) {
    const double h = 2.0 / (nodes - 1);
    Vector y = Vector::LinSpaced(nodes, -1.0, 1.0);
    Vector phi = y.unaryExpr([](double v) { return bump(v); });
    Vector dj = j == 0 ? phi : diff_1d(phi, h, j);
    Vector f(nodes);
    for (int i = 0; i < nodes; ++i) {
      const double x = sigma(n) + y[i] / n;
      f[i] = std::pow(std::abs(dj[i]), lam) * std::exp(mu.axis_log_density(x));
    }
    const double scale = std::exp(lam * n * log_alpha + (j * lam - 1.0) * std::log(n));
    return scale * simpson(f, h);
  };
  // a is affine on T_n, so D^k psi(a) = psi^(k)(a) (n alpha^n)^k there
  auto b_term = [&](int n, int nodes) {
    const double slope = n * std::exp(n * log_alpha);
    const double width = (cfg.zeta2 - cfg.zeta1) / slope;
    if (!(width <= 0.5 / n)) {
      throw DomainError("counterexample: T_" + std::to_string(n) +
                        " leaves the linear core of the bump");
    }
    const double h = width / (nodes - 1);
    Vector f(nodes);
    for (int i = 0; i < nodes; ++i) {
      const double off = i * h;
      const double a = cfg.zeta1 + std::exp(n * log_alpha) * bump(n * off);
      f[i] = std::pow(std::abs(fam.deriv(cfg.k, a)), lam) *
             std::exp(mu.axis_log_density(sigma(n) + off));
    }
    return std::pow(slope, cfg.k * lam) * simpson(f, h);
  };

  double pa = 0.0, pb = 0.0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int n = cfg.m; n <= last; ++n) {
    DahlbergTerm term{};
    term.n = n;
    term.sigma = sigma(n);
    term.A = 0.0;
    for (int j = 0; j <= cfg.k; ++j) {
      term.A += checked([&](int nodes) { return a_term(n, j, nodes); }, cfg.nodes,
                        "A_" + std::to_string(n));
    }
    term.B = checked([&](int nodes) { return b_term(n, nodes); }, cfg.nodes,
                     "B_" + std::to_string(n));
    pa += term.A;
    pb += term.B;
    term.partial_A = pa;
    term.partial_B = pb;
    if (out.terms.empty()) {
      term.ratio_A = term.ratio_B = term.compensated_A = term.compensated_B = nan;
    } else {
      const auto& prev = out.terms.back();
      term.ratio_A = term.A / prev.A;
      term.ratio_B = term.B / prev.B;
      const double poly = std::pow(static_cast<double>(n) / (n - 1), cfg.k * lam - 1.0);
      term.compensated_A = term.ratio_A / poly;
      term.compensated_B = term.ratio_B / poly;
    }
    out.terms.push_back(term);
  }
  return out;
}

EmbeddingTrend nu_embedding_trend(const EmbeddingTrendConfig& cfg) {
  if (cfg.k != 2 && cfg.k != 3) throw DomainError("embedding trend: k must be 2 or 3");
  if (!(cfg.lambda >= cfg.k - 1)) {
    throw DomainError("embedding trend: need lambda >= k - 1");
  }
  if (cfg.levels < 2 || cfg.samples < 1) {
    throw DomainError("embedding trend: need at least two levels and one sample");
  }
  EmbeddingTrend out;
  out.nu = (cfg.lambda + 1.0) / cfg.k;
  const MixedNormSpec target = MixedNormSpec::fixed(cfg.k, out.nu);
  const MixedNormSpec source = MixedNormSpec::fixed(cfg.k, std::max(cfg.lambda, 1.0));
  const ReferenceMeasure mu = make_reference(cfg.t, cfg.variant);
  const DeformedExp fam;

  std::vector<WeightedGridPtr> grids;
  int n = cfg.n0;
  for (int l = 0; l < cfg.levels; ++l) {
    grids.push_back(make_weighted_grid(build_grid(1, cfg.L, n), mu));
    out.grid_sizes.push_back(n);
    n = 2 * n - 1;
  }

  for (int s = 0; s < cfg.samples; ++s) {
    EmbeddingSample sample;
    const bool zero = cfg.include_zero && s == 0;
    const std::uint64_t seed = numerics::splitmix64(cfg.seed + static_cast<std::uint64_t>(s));
    for (const auto& wg : grids) {
      // reseeding draws the same function on every level
      std::mt19937_64 rng(seed);
      const Vector a = zero ? Vector::Zero(wg->size())
                            : random_smooth_field(wg->grid(), rng, cfg.amplitude);
      sample.norms.push_back(mixed_norm(*wg, fam.psi(a), target));
      if (&wg == &grids.back()) sample.gf_norm = mixed_norm(*wg, a, source);
    }
    const double prev = sample.norms[sample.norms.size() - 2];
    sample.growth = (sample.norms.back() - prev) / prev;
    out.max_growth = std::max(out.max_growth, sample.growth);
    out.samples.push_back(std::move(sample));
  }
  out.bounded = out.max_growth <= cfg.growth_tol;
  return out;
}

}  // namespace infogeo
