#include "infogeo/filter.hpp"

#include "infogeo/geometry.hpp"
#include "infogeo/sobolev.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace infogeo {

namespace {

double param(const std::map<std::string, double>& params, const std::string& key,
             double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const std::map<std::string, double>& params, const std::string& model,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw DomainError("model " + model + ": unknown parameter '" + key + "'");
    if (!std::isfinite(value)) {
      throw DomainError("model " + model + ": parameter '" + key + "' is not finite");
    }
  }
}

}  // namespace

FilterModel FilterModel::linear(double F, double sigma, double H) {
  FilterModel m;
  m.name_ = "linear";
  m.params_ = {{"F", F}, {"sigma", sigma}, {"H", H}};
  m.drift_ = F;
  m.sigma_ = sigma;
  m.obs_ = H;
  return m;
}

FilterModel FilterModel::double_well(double theta, double sigma, double H) {
  FilterModel m;
  m.name_ = "double_well";
  m.params_ = {{"theta", theta}, {"sigma", sigma}, {"H", H}};
  m.drift_ = theta;
  m.sigma_ = sigma;
  m.obs_ = H;
  return m;
}

FilterModel FilterModel::cubic_sensor(double sigma) {
  FilterModel m;
  m.name_ = "cubic_sensor";
  m.params_ = {{"sigma", sigma}};
  m.sigma_ = sigma;
  return m;
}

FilterModel FilterModel::from_registry(const std::string& name,
                                       const std::map<std::string, double>& params) {
  if (name == "linear") {
    reject_unknown(params, name, {"F", "sigma", "H"});
    return linear(param(params, "F", -1.0), param(params, "sigma", 1.0),
                  param(params, "H", 1.0));
  }
  if (name == "double_well") {
    reject_unknown(params, name, {"theta", "sigma", "H"});
    return double_well(param(params, "theta", 1.0),
                       param(params, "sigma", 1.0), param(params, "H", 1.0));
  }
  if (name == "cubic_sensor") {
    reject_unknown(params, name, {"sigma"});
    return cubic_sensor(param(params, "sigma", 1.0));
  }
  throw DomainError("unknown model '" + name + "'");
}

double FilterModel::f(double x) const {
  if (name_ == "linear") return drift_ * x;
  if (name_ == "double_well") return drift_ * (x - x * x * x);
  return 0.0;
}

double FilterModel::f_d1(double x) const {
  if (name_ == "linear") return drift_;
  if (name_ == "double_well") return drift_ * (1.0 - 3.0 * x * x);
  return 0.0;
}

double FilterModel::h(double x) const {
  if (name_ == "cubic_sensor") return x * x * x;
  return obs_ * x;
}

void FilterModel::require_nondegenerate() const {
  if (!(sigma_ * sigma_ > 0.0)) {
    throw DomainError("model " + name_ + ": Gamma = sigma^2 must be positive");
  }
}

CoefficientFields coefficient_fields(const FilterModel& model, const WeightedGrid& wg) {
  const auto& m = wg.measure();
  if (m.variant() == MeasureVariant::simple && m.exponent() < 2.0) {
    throw DomainError("coefficient fields need a twice differentiable log-density; "
                      "the simple measure with t < 2 has a singularity at 0");
  }
  if (wg.grid().dim() != 1) throw DomainError("coefficient fields: filtering is 1-D");
  const Vector& x = wg.grid().nodes();
  CoefficientFields out{Vector(x.size()), Vector(x.size())};
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double l1 = m.axis_dlog(x[i]), l2 = m.axis_d2log(x[i]);
    const double G = model.gamma(x[i]), G1 = model.gamma_d1(x[i]),
                 G2 = model.gamma_d2(x[i]);
    const double f = model.f(x[i]), f1 = model.f_d1(x[i]);
    out.F1[i] = G * l1 + G1 - f;
    out.F0[i] = 0.5 * G2 + G1 * l1 + 0.5 * G * (l2 + l1 * l1) - f * l1 - f1;
  }
  return out;
}

FilterSetup::FilterSetup(FilterModel model, WeightedGridPtr space)
    : model_(std::move(model)), space_(std::move(space)) {
  if (!space_) throw DomainError("filter: null space");
  model_.require_nondegenerate();
  fields_ = coefficient_fields(model_, *space_);
  x_ = space_->grid().nodes();
  h_ = x_.unaryExpr([this](double v) { return model_.h(v); });
  f_ = x_.unaryExpr([this](double v) { return model_.f(v); });
  gamma_ = x_.unaryExpr([this](double v) { return model_.gamma(v); });
  r_ = space_->density();
}

double FilterSetup::hbar(const Eigen::Ref<const Vector>& p) const {
  const double mass = space_->integrate(p);
  if (!(mass > 0.0)) throw DomainError("hbar: density has non-positive mass");
  return space_->integrate(p.cwiseProduct(h_)) / mass;
}

Vector FilterSetup::forward_operator(const Eigen::Ref<const Vector>& pi) const {
  const auto& g = space_->grid();
  return (0.5 * gamma_.array() * diff(g, pi, {2}).array() +
          fields_.F1.array() * diff(g, pi, {1}).array() + fields_.F0.array() * pi.array())
      .matrix();
}

Vector FilterSetup::forward_operator_conservative(const Eigen::Ref<const Vector>& pi) const {
  const auto& g = space_->grid();
  const Vector grp = gamma_.cwiseProduct(r_).cwiseProduct(pi);
  const Vector frp = f_.cwiseProduct(r_).cwiseProduct(pi);
  return (0.5 * diff(g, grp, {2}).array() / r_.array() -
          diff(g, frp, {1}).array() / r_.array())
      .matrix();
}

Vector FilterSetup::drift_u(const Eigen::Ref<const Vector>& a1,
                            const Eigen::Ref<const Vector>& a2,
                            const Eigen::Ref<const Vector>& p, double hb) const {
  const auto one_p = 1.0 + p.array();
  const auto dh = h_.array() - hb;
  return (0.5 * gamma_.array() * (a2.array() + a1.array().square() / one_p.square()) +
          fields_.F1.array() * a1.array() + one_p * fields_.F0.array() - 0.5 * dh.square())
      .matrix();
}

Vector FilterSetup::drift_u(const Eigen::Ref<const Vector>& a) const {
  const auto& g = space_->grid();
  const Vector p = DeformedExp().psi(a);
  return drift_u(diff(g, a, {1}), diff(g, a, {2}), p, hbar(p));
}

Vector FilterSetup::diffusion_v(const Eigen::Ref<const Vector>& a) const {
  const Vector p = DeformedExp().psi(a);
  const double hb = hbar(p);
  return ((1.0 + p.array()) * (h_.array() - hb)).matrix();
}

SubmanifoldBasis SubmanifoldBasis::from_functions(WeightedGridPtr space, Matrix eta,
                                                  int k_proj, std::string name) {
  if (!space) throw DomainError("basis: null space");
  if (space->grid().dim() != 1) throw DomainError("basis: filtering is 1-D");
  if (eta.rows() != space->size() || eta.cols() < 1) {
    throw DomainError("basis: need at least one function sampled on the grid");
  }
  if (k_proj < 0 || k_proj > 4) throw DomainError("basis: k_proj must be in 0..4");
  SubmanifoldBasis b;
  b.name_ = std::move(name);
  b.space_ = std::move(space);
  b.k_proj_ = k_proj;
  for (Eigen::Index j = 0; j < eta.cols(); ++j) {
    eta.col(j).array() -= b.space_->integrate(eta.col(j));
  }
  b.eta_ = std::move(eta);
  b.finish();
  return b;
}

void SubmanifoldBasis::finish() {
  const auto& g = space_->grid();
  const int orders = std::max(k_proj_, 2);
  deriv_.assign(orders + 1, Matrix(eta_.rows(), eta_.cols()));
  deriv_[0] = eta_;
  for (int j = 1; j <= orders; ++j) {
    for (Eigen::Index c = 0; c < eta_.cols(); ++c) {
      deriv_[j].col(c) = diff(g, eta_.col(c), {j});
    }
  }
  const Vector& w = space_->weights();
  weighted_.clear();
  gram_ = Matrix::Zero(eta_.cols(), eta_.cols());
  for (int j = 0; j <= k_proj_; ++j) {
    Matrix wt = (deriv_[j].array().colwise() * w.array()).matrix().transpose();
    gram_ += wt * deriv_[j];
    weighted_.push_back(std::move(wt));
  }
  gram_ = 0.5 * (gram_ + gram_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
  cond_ = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(cond_ <= kMaxCondition)) {
    throw NumericalError("basis '" + name_ + "': Gram matrix is singular or ill-conditioned "
                         "(condition number " + std::to_string(cond_) + ", eigenvalues in [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "])");
  }
  ldlt_.compute(gram_);
}

SubmanifoldBasis SubmanifoldBasis::polynomial(WeightedGridPtr space, int m, int k_proj) {
  if (m < 1) throw DomainError("basis: polynomial degree must be >= 1");
  const Vector& x = space->grid().nodes();
  Matrix eta(x.size(), m);
  for (int i = 1; i <= m; ++i) eta.col(i - 1) = x.array().pow(i).matrix();
  return from_functions(std::move(space), std::move(eta), k_proj,
                        "polynomial(" + std::to_string(m) + ")");
}

SubmanifoldBasis SubmanifoldBasis::poly_plus_bump(WeightedGridPtr space, int m, int k_proj) {
  if (m < 1) throw DomainError("basis: polynomial degree must be >= 1");
  const Vector& x = space->grid().nodes();
  Matrix eta(x.size(), m + 1);
  for (int i = 1; i <= m; ++i) eta.col(i - 1) = x.array().pow(i).matrix();
  eta.col(m) = (-0.5 * x.array().square()).exp().matrix();
  return from_functions(std::move(space), std::move(eta), k_proj,
                        "poly_plus_bump(" + std::to_string(m) + ")");
}

SubmanifoldBasis SubmanifoldBasis::grid_indicators(WeightedGridPtr space, int k_proj) {
  const Eigen::Index n = space->size();
  Matrix eta = Matrix::Identity(n, n - 1);
  return from_functions(std::move(space), std::move(eta), k_proj, "grid");
}

SubmanifoldBasis SubmanifoldBasis::from_registry(WeightedGridPtr space,
                                                 const std::string& name, int m,
                                                 int k_proj) {
  if (name == "polynomial") return polynomial(std::move(space), m, k_proj);
  if (name == "poly_plus_bump") return poly_plus_bump(std::move(space), m, k_proj);
  if (name == "grid") return grid_indicators(std::move(space), k_proj);
  throw DomainError("unknown basis '" + name + "'");
}

Vector SubmanifoldBasis::project(const Eigen::Ref<const Vector>& w) const {
  space_->grid().check(w, "project");
  Vector b = weighted_[0] * w;
  for (int j = 1; j <= k_proj_; ++j) b += weighted_[j] * diff(space_->grid(), w, {j});
  return ldlt_.solve(b);
}

Vector project_hk(const Eigen::Ref<const Vector>& w, const SubmanifoldBasis& basis) {
  return basis.project(w);
}

SdePath simulate_sde(const FilterModel& model, const Prior& prior, double T,
                     double dt_sim, std::uint64_t seed) {
  if (!(dt_sim > 0.0) || !(T > 0.0)) throw DomainError("simulate_sde: need T, dt > 0");
  if (!(prior.var >= 0.0)) throw DomainError("simulate_sde: prior variance must be >= 0");
  const double ratio = T / dt_sim;
  const auto n = static_cast<Eigen::Index>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(n)) > 1e-6 * ratio) {
    throw DomainError("simulate_sde: T must be a multiple of dt_sim");
  }
  SdePath path;
  path.dt_sim = dt_sim;
  path.T = T;
  path.seed = seed;
  path.X.resize(n + 1);
  path.dY.resize(n);
  path.xi.resize(n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sq = std::sqrt(dt_sim);
  double x = prior.mean + std::sqrt(prior.var) * normal(rng);
  path.X[0] = x;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double dv = normal(rng);
    const double xi = normal(rng);
    path.xi[j] = xi;
    path.dY[j] = model.h(x) * dt_sim + sq * xi;
    x += model.f(x) * dt_sim + model.g(x) * sq * dv;
    path.X[j + 1] = x;
  }
  return path;
}

Eigen::Index steps_per(double dt, double dt_sim) {
  if (!(dt > 0.0) || !(dt_sim > 0.0)) throw DomainError("time steps must be positive");
  const double ratio = dt / dt_sim;
  const auto k = static_cast<Eigen::Index>(std::llround(ratio));
  if (k < 1 || std::abs(ratio - static_cast<double>(k)) > 1e-6 * ratio) {
    throw DomainError("step " + std::to_string(dt) + " is not a multiple of " +
                      std::to_string(dt_sim));
  }
  return k;
}

Moments density_moments(const FilterSetup& setup, const Eigen::Ref<const Vector>& p) {
  const auto& wg = setup.space();
  const Vector& x = setup.x();
  Moments m;
  m.mass = wg.integrate(p);
  m.mean = wg.integrate(p.cwiseProduct(x)) / m.mass;
  const Vector dx = x.array() - m.mean;
  m.var = wg.integrate(p.cwiseProduct(dx.cwiseAbs2())) / m.mass;
  return m;
}

namespace {

struct Schedule {
  Eigen::Index steps;      // filter steps
  Eigen::Index fine;       // simulation steps per filter step
  Eigen::Index out_every;  // filter steps per output
};

Schedule schedule(const SdePath& path, double dt, double out_dt) {
  Schedule s;
  s.fine = steps_per(dt, path.dt_sim);
  s.steps = path.steps() / s.fine;
  if (s.steps * s.fine != path.steps()) {
    throw DomainError("filter step does not divide the path horizon");
  }
  s.out_every = steps_per(out_dt, dt);
  return s;
}

}  // namespace

DenseTrajectory run_dense_filter(const FilterSetup& setup, const SdePath& path,
                                 const Eigen::Ref<const Vector>& pi0,
                                 const DenseOptions& opts) {
  const auto& wg = setup.space();
  wg.grid().check(pi0, "dense filter initial density");
  const double h = wg.grid().spacing();
  const double limit = 0.5 * h * h / setup.gamma().maxCoeff();
  if (opts.dt > limit * (1 + 1e-12)) {
    throw DomainError("dense filter: dt = " + std::to_string(opts.dt) +
                      " exceeds the explicit stability limit h^2/(2 max Gamma) = " +
                      std::to_string(limit));
  }
  if (!((pi0.array() > 0.0).all())) {
    throw DomainError("dense filter: initial density must be positive");
  }
  const Schedule sch = schedule(path, opts.dt, opts.out_dt);
  const Eigen::Index n = pi0.size(), edge = setup.boundary_layer();
  const Vector& hv = setup.h();

  DenseTrajectory out;
  Vector pi = pi0;
  auto record = [&](double t) {
    out.times.push_back(t);
    out.density.push_back(pi);
    out.moments.push_back(density_moments(setup, pi));
  };
  record(0.0);
  for (Eigen::Index s = 0; s < sch.steps; ++s) {
    const double dy = path.increment(s * sch.fine, sch.fine);
    const double hb = setup.hbar(pi);
    Vector api = setup.forward_operator(pi);
    api.head(edge).setZero();
    api.tail(edge).setZero();
    pi.array() += api.array() * opts.dt +
                  pi.array() * (hv.array() - hb) * (dy - hb * opts.dt);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(pi[i] > 0.0)) {
        pi[i] = 1e-300;
        ++out.floored;
      }
    }
    if (opts.renormalize) pi /= wg.integrate(pi);
    if ((s + 1) % sch.out_every == 0) record(static_cast<double>(s + 1) * opts.dt);
  }
  return out;
}

Vector prior_density(const FilterSetup& setup, const Prior& prior) {
  if (!(prior.var > 0.0)) throw DomainError("prior variance must be positive");
  Vector p = density_wrt_mu(setup.space(), {.kind = "gaussian",
                                            .mean = prior.mean,
                                            .scale = std::sqrt(prior.var)});
  return p / setup.space().integrate(p);
}

Vector prior_coefficients(const SubmanifoldBasis& basis, const Eigen::Ref<const Vector>& p0) {
  const Vector a = DeformedExp().log(p0);
  const Vector a0 = a.array() - basis.space().integrate(a);
  return basis.project(a0);
}

ProjectionTrajectory run_projection_filter(const FilterSetup& setup,
                                           const SubmanifoldBasis& basis,
                                           const SdePath& path,
                                           const Eigen::Ref<const Vector>& alpha0,
                                           const ProjectionOptions& opts) {
  if (&basis.space() != &setup.space()) {
    throw DomainError("projection filter: basis and setup use different grids");
  }
  if (alpha0.size() != basis.dim()) {
    throw DomainError("projection filter: coefficient vector has wrong length");
  }
  const Schedule sch = schedule(path, opts.dt, opts.out_dt);
  const DeformedExp fam;
  const Vector& hv = setup.h();
  const Matrix& d1 = basis.derivative(1);
  const Matrix& d2 = basis.derivative(2);

  ProjectionTrajectory out;
  Vector alpha = alpha0;
  std::optional<double> z;
  auto state = [&]() {
    return normalize(setup.space_ptr(), fam, basis.combine(alpha),
                     {.tol = 1e-12, .centre_tol = 1e-8, .warm_start = z});
  };
  auto record = [&](double t, const ManifoldPoint& pt) {
    out.times.push_back(t);
    out.alpha.push_back(alpha);
    out.density.push_back(pt.density());
    out.moments.push_back(density_moments(setup, pt.density()));
    out.normalizer.push_back(pt.normalizer());
  };

  ManifoldPoint pt = state();
  z = pt.normalizer();
  record(0.0, pt);
  for (Eigen::Index s = 0; s < sch.steps; ++s) {
    const double dy = path.increment(s * sch.fine, sch.fine);
    const Vector& p = pt.density();
    const double hb = setup.hbar(p);
    const Vector u = setup.drift_u(d1 * alpha, d2 * alpha, p, hb);
    const Vector v = ((1.0 + p.array()) * (hv.array() - hb)).matrix();
    alpha += basis.project(u) * opts.dt + basis.project(v) * (dy - hb * opts.dt);
    const double norm = alpha.norm();
    if (!(norm <= opts.blowup)) {
      throw FilterBlowUp("projection filter blew up at t = " +
                         std::to_string(static_cast<double>(s + 1) * opts.dt) +
                         ": |alpha| = " + std::to_string(norm) + " (basis " + basis.name() +
                         ", seed " + std::to_string(path.seed) + ")");
    }
    pt = state();
    z = pt.normalizer();
    if ((s + 1) % sch.out_every == 0) record(static_cast<double>(s + 1) * opts.dt, pt);
  }
  return out;
}

KalmanTrajectory kalman_bucy(const FilterModel& model, const Prior& prior,
                             const SdePath& path, double dt, double out_dt) {
  if (!model.is_linear()) throw DomainError("kalman_bucy: model is not linear");
  const double F = model.params().at("F"), s = model.params().at("sigma"),
               H = model.params().at("H");
  const Schedule sch = schedule(path, dt, out_dt);
  KalmanTrajectory out;
  double m = prior.mean, P = prior.var;
  out.times.push_back(0.0);
  out.mean.push_back(m);
  out.var.push_back(P);
  for (Eigen::Index k = 0; k < sch.steps; ++k) {
    const double dy = path.increment(k * sch.fine, sch.fine);
    const double dm = F * m * dt + P * H * (dy - H * m * dt);
    const double dP = (2 * F * P + s * s - P * P * H * H) * dt;
    m += dm;
    P += dP;
    if ((k + 1) % sch.out_every == 0) {
      out.times.push_back(static_cast<double>(k + 1) * dt);
      out.mean.push_back(m);
      out.var.push_back(P);
    }
  }
  return out;
}

std::vector<RunRow> evaluate_run(const FilterSetup& setup, const DenseTrajectory& dense,
                                 const ProjectionTrajectory& proj,
                                 const KalmanTrajectory* kb) {
  if (dense.times.size() != proj.times.size() ||
      (kb && kb->times.size() != dense.times.size())) {
    throw DomainError("evaluate_run: trajectories have different output grids");
  }
  const auto& space = setup.space_ptr();
  const DeformedExp fam;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<RunRow> rows;
  for (std::size_t i = 0; i < dense.times.size(); ++i) {
    if (std::abs(dense.times[i] - proj.times[i]) > 1e-9 ||
        (kb && std::abs(kb->times[i] - dense.times[i]) > 1e-9)) {
      throw DomainError("evaluate_run: output times do not line up");
    }
    // floor so that underflowed tails stay inside the chart domain
    const Vector pd = (dense.density[i] / dense.moments[i].mass).cwiseMax(1e-300);
    const Vector pp = proj.density[i].cwiseMax(1e-300);
    const auto D = ManifoldPoint::from_density(space, fam, pd);
    const auto P = ManifoldPoint::from_density(space, fam, pp);
    RunRow r{};
    r.t = dense.times[i];
    r.mass = proj.moments[i].mass;
    r.mean_proj = proj.moments[i].mean;
    r.var_proj = proj.moments[i].var;
    r.mean_dense = dense.moments[i].mean;
    r.var_dense = dense.moments[i].var;
    r.mean_kb = kb ? kb->mean[i] : nan;
    r.var_kb = kb ? kb->var[i] : nan;
    r.kl_dp = kl(D, P);
    r.kl_pd = kl(P, D);
    r.dmo = chi2_mo(P, D);
    rows.push_back(r);
  }
  return rows;
}

IncrementResidual increment_residual(const FilterSetup& setup,
                                     const Eigen::Ref<const Vector>& a, double dt) {
  const DeformedExp fam;
  const Vector p = fam.psi(a);
  const double hb = setup.hbar(p);
  const double di = std::sqrt(dt);
  const Vector u = setup.drift_u(a);
  const Vector v = setup.diffusion_v(a);
  const Vector chart = fam.psi((a + u * dt + v * di).eval()) - p;
  const Vector dens = setup.forward_operator(p) * dt +
                      (p.array() * (setup.h().array() - hb) * di).matrix();
  return {(chart - dens).cwiseAbs().maxCoeff(), setup.space().grid().spacing(), dt};
}

}  // namespace infogeo
