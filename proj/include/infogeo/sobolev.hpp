#pragma once

#include "infogeo/grid.hpp"
#include "infogeo/quadrature.hpp"

#include <string_view>
#include <vector>

namespace infogeo {

enum class SpaceKind { Gm, Gf, Hk, Gs, Gms, custom };

SpaceKind parse_space_kind(std::string_view name);
std::string_view to_string(SpaceKind kind);

/// Exponent sequence (lambda_0, ..., lambda_k) of a mixed-norm Sobolev space
/// W^{k,Lambda}(mu), tagged with the named family it belongs to.
struct MixedNormSpec {
  SpaceKind kind = SpaceKind::custom;
  int k = 0;
  std::vector<double> lambda;  ///< size k + 1

  /// G_m: lambda_0 >= lambda_1 >= k, lambda_j = lambda_1 / j for j >= 2.
  static MixedNormSpec mixed(int k, double lambda0, double lambda1);
  /// G_f: every exponent equal to lambda.
  static MixedNormSpec fixed(int k, double lambda);
  /// H^k: every exponent equal to 2.
  static MixedNormSpec hilbert(int k);
  /// G_s = W^{2,(1,1,1)}.
  static MixedNormSpec sparse();
  /// G_ms = W^{2,(lambda_0,1,1)}.
  static MixedNormSpec sparse_mixed(double lambda0);
  static MixedNormSpec custom(std::vector<double> lambda);

  /// Builds a spec from config-style fields; lambda1 is ignored where the kind
  /// fixes it.
  static MixedNormSpec from_kind(SpaceKind kind, int k, double lambda0,
                                 double lambda1);

  /// Throws DomainError unless 1 <= lambda_k <= ... <= lambda_0 < inf, k <= 4,
  /// and the kind-specific shape holds.
  void validate() const;
};

/// S_0 = { s in {0..k}^d : |s| <= k }, ordered by weight then lexicographically.
std::vector<MultiIndex> multi_indices(int d, int k);

/// (sum_{s in S_0} ||D^s a||_{L^{lambda_|s|}(mu)}^{lambda_0})^{1/lambda_0}.
double mixed_norm(const WeightedGrid& wg, const Eigen::Ref<const Vector>& a,
                  const MixedNormSpec& spec);

/// sum_{s in S_0} <D^s u, D^s v>_{L^2(mu)}.
double hk_inner(const WeightedGrid& wg, const Eigen::Ref<const Vector>& u,
                const Eigen::Ref<const Vector>& v, int k);

/// Order N of continuous differentiability of the chart maps:
/// floor(lambda0/beta) when t in (1,2] and lambda1 == lambda0, otherwise
/// ceil(lambda0/beta) - 1.
int smoothness_order(double lambda0, double lambda1, double beta, double t);

}  // namespace infogeo
