#pragma once

#include "infogeo/deformed.hpp"
#include "infogeo/manifold.hpp"
#include "infogeo/quadrature.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace infogeo {

/// Scalar signal/observation pair
///   dX = f(X) dt + g(X) dV,   dY = h(X) dt + dW.
/// Registry: linear(F, sigma, H), double_well(theta, sigma, H), cubic_sensor(sigma).
/// All registered models have constant g, so Gamma = g^2 is constant.
class FilterModel {
 public:
  static FilterModel linear(double F, double sigma, double H);
  static FilterModel double_well(double theta, double sigma, double H);
  static FilterModel cubic_sensor(double sigma);
  /// Looks up `name` and reads its parameters; unknown names or keys throw.
  static FilterModel from_registry(const std::string& name,
                                   const std::map<std::string, double>& params);

  const std::string& name() const { return name_; }
  const std::map<std::string, double>& params() const { return params_; }
  bool is_linear() const { return name_ == "linear"; }

  double f(double x) const;
  double f_d1(double x) const;
  double g(double) const { return sigma_; }
  double gamma(double) const { return sigma_ * sigma_; }
  double gamma_d1(double) const { return 0.0; }
  double gamma_d2(double) const { return 0.0; }
  double h(double x) const;

  /// Throws DomainError if Gamma vanishes (simulation alone allows it).
  void require_nondegenerate() const;

 private:
  std::string name_;
  std::map<std::string, double> params_;
  double drift_ = 0.0;  // F or theta
  double sigma_ = 0.0;
  double obs_ = 0.0;    // H
};

/// Gaussian law of X_0.
struct Prior {
  double mean = 0.0;
  double var = 1.0;
};

/// F1 = Gamma l' + Gamma' - f and
/// F0 = Gamma''/2 + Gamma' l' + Gamma (l'' + l'^2)/2 - f l' - f'.
struct CoefficientFields {
  Vector F1;
  Vector F0;
};

CoefficientFields coefficient_fields(const FilterModel& model, const WeightedGrid& wg);

/// Model, grid and every per-node field the filters need, built once.
class FilterSetup {
 public:
  /// Rejects 2-D grids, degenerate models, and simple measures with t < 2
  /// (their log-density has no second derivative at 0).
  FilterSetup(FilterModel model, WeightedGridPtr space);

  const FilterModel& model() const { return model_; }
  const WeightedGrid& space() const { return *space_; }
  const WeightedGridPtr& space_ptr() const { return space_; }
  const CoefficientFields& fields() const { return fields_; }
  const Vector& h() const { return h_; }
  const Vector& gamma() const { return gamma_; }
  const Vector& x() const { return x_; }
  /// Number of nodes at either end where the dense solver freezes the
  /// differential part (the reach of the central stencil).
  int boundary_layer() const { return 2; }

  /// h-bar(p) = E_mu[p h] / E_mu p.
  double hbar(const Eigen::Ref<const Vector>& p) const;

  /// A pi = Gamma pi''/2 + F1 pi' + F0 pi (expanded form).
  Vector forward_operator(const Eigen::Ref<const Vector>& pi) const;
  /// A pi = (Gamma r pi)''/(2r) - (f r pi)'/r with finite differences of the
  /// products; independent of F0 and F1.
  Vector forward_operator_conservative(const Eigen::Ref<const Vector>& pi) const;

  /// Chart-space drift and diffusion (balanced family):
  ///   u = Gamma/2 [a'' + a'^2/(1+psi)^2] + F1 a' + (1+psi) F0 - (h - hbar)^2/2,
  ///   v = (1+psi)(h - hbar), with psi = psi(a) and hbar = hbar(psi(a)).
  Vector drift_u(const Eigen::Ref<const Vector>& a) const;
  Vector diffusion_v(const Eigen::Ref<const Vector>& a) const;
  /// As drift_u with a', a'' and p = psi(a) supplied by the caller.
  Vector drift_u(const Eigen::Ref<const Vector>& a1, const Eigen::Ref<const Vector>& a2,
                 const Eigen::Ref<const Vector>& p, double hbar) const;

 private:
  FilterModel model_;
  WeightedGridPtr space_;
  CoefficientFields fields_;
  Vector x_, h_, f_, gamma_, r_;
};

/// Finite basis eta_1..eta_m of centred functions spanning the submanifold
/// chart, with the Gram matrix of the H^{k_proj}(mu) inner product.
class SubmanifoldBasis {
 public:
  static constexpr double kMaxCondition = 1e12;

  /// eta_i = x^i - E_mu x^i, i = 1..m.
  static SubmanifoldBasis polynomial(WeightedGridPtr space, int m, int k_proj = 0);
  /// polynomial(m) plus exp(-x^2/2) - E_mu exp(-x^2/2); dimension m + 1.
  static SubmanifoldBasis poly_plus_bump(WeightedGridPtr space, int m, int k_proj = 0);
  /// Centred node indicators 1_j - w_j with the last node dropped (the full
  /// set sums to zero). Diagnostic mode for small grids.
  static SubmanifoldBasis grid_indicators(WeightedGridPtr space, int k_proj = 0);
  /// Columns of `eta` are the basis functions; they are centred here.
  static SubmanifoldBasis from_functions(WeightedGridPtr space, Matrix eta, int k_proj,
                                         std::string name);
  /// Dispatch on "polynomial" | "poly_plus_bump" | "grid".
  static SubmanifoldBasis from_registry(WeightedGridPtr space, const std::string& name,
                                        int m, int k_proj);

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(eta_.cols()); }
  int k_proj() const { return k_proj_; }
  const WeightedGrid& space() const { return *space_; }
  const Matrix& functions() const { return eta_; }
  /// d^j eta / dx^j, j = 0..max(k_proj, 2), column-wise.
  const Matrix& derivative(int j) const { return deriv_.at(j); }
  const Matrix& gram() const { return gram_; }
  double condition_number() const { return cond_; }

  /// Coefficients c with gram c = b, b_i = <eta_i, w>_{H^{k_proj}(mu)}.
  Vector project(const Eigen::Ref<const Vector>& w) const;
  /// sum_i alpha_i eta_i.
  Vector combine(const Eigen::Ref<const Vector>& alpha) const { return eta_ * alpha; }

 private:
  SubmanifoldBasis() = default;
  void finish();

  std::string name_;
  WeightedGridPtr space_;
  int k_proj_ = 0;
  Matrix eta_;
  std::vector<Matrix> deriv_;
  std::vector<Matrix> weighted_;  // (D^j eta)^T W
  Matrix gram_;
  Eigen::LDLT<Matrix> ldlt_;
  double cond_ = 0.0;
};

Vector project_hk(const Eigen::Ref<const Vector>& w, const SubmanifoldBasis& basis);

/// Signal and observation increments on the simulation step.
struct SdePath {
  double dt_sim = 0.0;
  double T = 0.0;
  std::uint64_t seed = 0;
  Vector X;   ///< X at 0, dt_sim, ..., T (steps + 1 values)
  Vector dY;  ///< h(X_j) dt_sim + sqrt(dt_sim) xi_j
  Vector xi;  ///< recorded observation normals

  Eigen::Index steps() const { return dY.size(); }
  /// Sum of `count` simulation increments starting at `first`.
  double increment(Eigen::Index first, Eigen::Index count) const {
    return dY.segment(first, count).sum();
  }
};

/// Euler-Maruyama with std::mt19937_64 seeded by `seed`; X_0 from the prior.
/// Per step the signal normal is drawn before the observation normal.
SdePath simulate_sde(const FilterModel& model, const Prior& prior, double T,
                     double dt_sim, std::uint64_t seed);

/// Number of simulation steps per filter step; throws unless dt is an
/// integer multiple of dt_sim.
Eigen::Index steps_per(double dt, double dt_sim);

struct Moments {
  double mass = 0.0;
  double mean = 0.0;
  double var = 0.0;
};
/// Mass, mean and variance of the measure with density p w.r.t. mu.
Moments density_moments(const FilterSetup& setup, const Eigen::Ref<const Vector>& p);

struct DenseOptions {
  double dt = 1e-4;
  double out_dt = 1e-2;
  bool renormalize = false;
};

struct DenseTrajectory {
  std::vector<double> times;
  std::vector<Vector> density;  ///< pi_t at each output time
  std::vector<Moments> moments;
  long floored = 0;             ///< nodes lifted to 1e-300 over the run
};

/// Explicit Euler-Maruyama for
///   d pi = A pi dt + pi (h - hbar(pi)) (dY - hbar(pi) dt).
/// Requires dt <= h^2 / (2 max Gamma).
DenseTrajectory run_dense_filter(const FilterSetup& setup, const SdePath& path,
                                 const Eigen::Ref<const Vector>& pi0,
                                 const DenseOptions& opts);

struct ProjectionOptions {
  double dt = 1e-3;
  double out_dt = 1e-2;
  double blowup = 1e6;
};

struct ProjectionTrajectory {
  std::vector<double> times;
  std::vector<Vector> alpha;
  std::vector<Vector> density;
  std::vector<Moments> moments;
  std::vector<double> normalizer;
};

/// Thrown when the coefficient norm exceeds the blow-up threshold.
class FilterBlowUp : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Coefficient SDE on the normalized submanifold: with a0 = sum alpha_i eta_i
/// and a = a0 + Z(a0),
///   alpha <- alpha + P(u(a)) dt + P(v(a)) (dY - hbar dt).
ProjectionTrajectory run_projection_filter(const FilterSetup& setup,
                                           const SubmanifoldBasis& basis,
                                           const SdePath& path,
                                           const Eigen::Ref<const Vector>& alpha0,
                                           const ProjectionOptions& opts);

/// Centred balanced chart of the prior and its projection onto the basis.
Vector prior_density(const FilterSetup& setup, const Prior& prior);
Vector prior_coefficients(const SubmanifoldBasis& basis, const Eigen::Ref<const Vector>& p0);

struct KalmanTrajectory {
  std::vector<double> times;
  std::vector<double> mean;
  std::vector<double> var;
};

/// Euler scheme for dm = F m dt + P H (dY - H m dt), dP = (2FP + sigma^2 - P^2 H^2) dt.
KalmanTrajectory kalman_bucy(const FilterModel& model, const Prior& prior,
                             const SdePath& path, double dt, double out_dt);

struct RunRow {
  double t;
  double mass;  ///< mass of the projected density
  double mean_proj, var_proj;
  double mean_dense, var_dense;
  double mean_kb, var_kb;  ///< NaN for non-linear models
  double kl_dp;            ///< KL(dense | proj)
  double kl_pd;            ///< KL(proj | dense)
  double dmo;              ///< chi-square D_MO(proj | dense)
};

/// Aligns the trajectories on their common output times; the dense density
/// is rescaled to unit mass before divergences are taken.
std::vector<RunRow> evaluate_run(const FilterSetup& setup, const DenseTrajectory& dense,
                                 const ProjectionTrajectory& proj,
                                 const KalmanTrajectory* kb);

struct IncrementResidual {
  double residual;  ///< max |chart-route increment - density-route increment|
  double h;
  double dt;
};

/// One step of size dt with innovation sqrt(dt): compares
/// psi(a + u dt + v dI) - psi(a) with A pi dt + pi (h - hbar) dI at p = psi(a).
IncrementResidual increment_residual(const FilterSetup& setup,
                                     const Eigen::Ref<const Vector>& a, double dt);

}  // namespace infogeo
