#include "infogeo/sobolev.hpp"

#include <cmath>
#include <string>

namespace infogeo {

SpaceKind parse_space_kind(std::string_view name) {
  if (name == "Gm") return SpaceKind::Gm;
  if (name == "Gf") return SpaceKind::Gf;
  if (name == "Hk") return SpaceKind::Hk;
  if (name == "Gs") return SpaceKind::Gs;
  if (name == "Gms") return SpaceKind::Gms;
  if (name == "custom") return SpaceKind::custom;
  throw DomainError("unknown space kind '" + std::string(name) + "'");
}

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Gm: return "Gm";
    case SpaceKind::Gf: return "Gf";
    case SpaceKind::Hk: return "Hk";
    case SpaceKind::Gs: return "Gs";
    case SpaceKind::Gms: return "Gms";
    case SpaceKind::custom: break;
  }
  return "custom";
}

MixedNormSpec MixedNormSpec::mixed(int k, double lambda0, double lambda1) {
  MixedNormSpec s{SpaceKind::Gm, k, std::vector<double>(k + 1)};
  s.lambda[0] = lambda0;
  for (int j = 1; j <= k; ++j) s.lambda[j] = lambda1 / j;
  s.validate();
  return s;
}

MixedNormSpec MixedNormSpec::fixed(int k, double lambda) {
  MixedNormSpec s{SpaceKind::Gf, k, std::vector<double>(k + 1, lambda)};
  s.validate();
  return s;
}

MixedNormSpec MixedNormSpec::hilbert(int k) {
  MixedNormSpec s{SpaceKind::Hk, k, std::vector<double>(k + 1, 2.0)};
  s.validate();
  return s;
}

MixedNormSpec MixedNormSpec::sparse() {
  MixedNormSpec s{SpaceKind::Gs, 2, {1.0, 1.0, 1.0}};
  s.validate();
  return s;
}

MixedNormSpec MixedNormSpec::sparse_mixed(double lambda0) {
  MixedNormSpec s{SpaceKind::Gms, 2, {lambda0, 1.0, 1.0}};
  s.validate();
  return s;
}

MixedNormSpec MixedNormSpec::custom(std::vector<double> lambda) {
  if (lambda.empty()) throw DomainError("space: empty exponent sequence");
  MixedNormSpec s{SpaceKind::custom, static_cast<int>(lambda.size()) - 1,
                  std::move(lambda)};
  s.validate();
  return s;
}

MixedNormSpec MixedNormSpec::from_kind(SpaceKind kind, int k, double lambda0,
                                       double lambda1) {
  switch (kind) {
    case SpaceKind::Gm: return mixed(k, lambda0, lambda1);
    case SpaceKind::Gf: return fixed(k, lambda0);
    case SpaceKind::Hk: return hilbert(k);
    case SpaceKind::Gs: return sparse();
    case SpaceKind::Gms: return sparse_mixed(lambda0);
    case SpaceKind::custom: break;
  }
  throw DomainError("space: kind 'custom' needs an explicit exponent list");
}

void MixedNormSpec::validate() const {
  if (k < 0 || k > 4) throw DomainError("space: k must be in 0..4, got " + std::to_string(k));
  if (lambda.size() != static_cast<std::size_t>(k + 1)) {
    throw DomainError("space: need k + 1 exponents");
  }
  for (int j = 0; j <= k; ++j) {
    if (!std::isfinite(lambda[j]) || lambda[j] < 1.0) {
      throw DomainError("space: exponent lambda_" + std::to_string(j) +
                        " must be finite and >= 1");
    }
    if (j > 0 && lambda[j] > lambda[j - 1]) {
      throw DomainError("space: exponents must be non-increasing");
    }
  }
  if (kind == SpaceKind::Gm && k >= 1 && lambda[1] < k) {
    throw DomainError("space: Gm needs lambda_1 >= k");
  }
  if ((kind == SpaceKind::Gs || kind == SpaceKind::Gms) && k != 2) {
    throw DomainError("space: Gs and Gms have k = 2");
  }
}

std::vector<MultiIndex> multi_indices(int d, int k) {
  if (d < 1 || d > 2) throw DomainError("multi_indices: d must be 1 or 2");
  std::vector<MultiIndex> out;
  for (int w = 0; w <= k; ++w) {
    if (d == 1) {
      out.push_back(MultiIndex{w});
    } else {
      for (int i = w; i >= 0; --i) out.push_back(MultiIndex{i, w - i});
    }
  }
  return out;
}

double mixed_norm(const WeightedGrid& wg, const Eigen::Ref<const Vector>& a,
                  const MixedNormSpec& spec) {
  spec.validate();
  const double l0 = spec.lambda[0];
  double sum = 0.0;
  for (const auto& s : multi_indices(wg.grid().dim(), spec.k)) {
    const double term =
        s.weight() == 0 ? wg.lp_norm(a, l0)
                        : wg.lp_norm(diff(wg.grid(), a, s), spec.lambda[s.weight()]);
    sum += std::pow(term, l0);
  }
  return std::pow(sum, 1.0 / l0);
}

double hk_inner(const WeightedGrid& wg, const Eigen::Ref<const Vector>& u,
                const Eigen::Ref<const Vector>& v, int k) {
  if (k < 0 || k > 4) throw DomainError("hk_inner: k must be in 0..4");
  double sum = wg.integrate(u.cwiseProduct(v));
  for (const auto& s : multi_indices(wg.grid().dim(), k)) {
    if (s.weight() == 0) continue;
    sum += wg.integrate(diff(wg.grid(), u, s).cwiseProduct(diff(wg.grid(), v, s)));
  }
  return sum;
}

int smoothness_order(double lambda0, double lambda1, double beta, double t) {
  if (!(beta >= 1.0) || !(lambda0 >= beta)) {
    throw DomainError("smoothness_order: need lambda0 >= beta >= 1");
  }
  double q = lambda0 / beta;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-12 * q) q = r;
  const bool e1 = t > 1.0 && t <= 2.0 && lambda1 == lambda0;
  return e1 ? static_cast<int>(std::floor(q)) : static_cast<int>(std::ceil(q)) - 1;
}

}  // namespace infogeo
