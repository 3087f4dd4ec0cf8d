#include "runner.hpp"

#include "log.hpp"

#include "infogeo/geometry.hpp"
#include "infogeo/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace infogeo::cli {

using nlohmann::json;

std::uint64_t trial_seed(std::uint64_t master, std::size_t index) {
  return numerics::splitmix64(master + static_cast<std::uint64_t>(index));
}

WeightedGridPtr make_space(const RunConfig& cfg) {
  return make_weighted_grid(build_grid(1, cfg.grid.L, cfg.grid.n),
                            make_reference(cfg.measure.t, parse_variant(cfg.measure.variant)));
}

SubmanifoldBasis make_basis(const RunConfig& cfg, WeightedGridPtr space) {
  return SubmanifoldBasis::from_registry(std::move(space), cfg.basis.name, cfg.basis.m,
                                         cfg.space.k - 2);
}

TrialResult run_trial(const RunConfig& cfg, const FilterSetup& setup,
                      const SubmanifoldBasis& basis, std::size_t index, std::uint64_t seed) {
  TrialResult out;
  out.index = index;
  out.seed = seed;
  const Prior prior{cfg.prior.mean, cfg.prior.var};
  try {
    const SdePath path = simulate_sde(setup.model(), prior, cfg.time.T, cfg.time.dt_sim, seed);
    const Vector exact = prior_density(setup, prior);
    const Vector alpha0 = prior_coefficients(basis, exact);
    Vector p0 = exact;
    if (cfg.prior.dense_init == "projected") {
      p0 = normalize(setup.space_ptr(), DeformedExp(), basis.combine(alpha0)).density();
    }
    const auto dense = run_dense_filter(setup, path, p0,
                                        {.dt = cfg.time.dt_dense, .out_dt = cfg.time.out_dt});
    out.floored = dense.floored;
    const auto proj = run_projection_filter(setup, basis, path, alpha0,
                                            {.dt = cfg.time.dt, .out_dt = cfg.time.out_dt});
    if (setup.model().is_linear()) {
      const auto kb = kalman_bucy(setup.model(), prior, path, cfg.time.dt_dense, cfg.time.out_dt);
      out.rows = evaluate_run(setup, dense, proj, &kb);
    } else {
      out.rows = evaluate_run(setup, dense, proj, nullptr);
    }
    out.ok = true;
  } catch (const NumericalError& e) {
    out.message = e.what();
    log(LogLevel::warn, "trial " + std::to_string(index) + " failed: " + out.message);
  }
  return out;
}

FilterExperiment run_filter_experiment(const RunConfig& cfg, std::uint64_t master_seed,
                                       int trials, int threads) {
  if (trials < 1) throw DomainError("need at least one trial");
  FilterExperiment ex;
  ex.config = cfg;
  ex.master_seed = master_seed;
  const auto space = make_space(cfg);
  const FilterSetup setup(
      FilterModel::from_registry(cfg.model.name, cfg.model.params), space);
  const SubmanifoldBasis basis = make_basis(cfg, space);
  ex.basis_name = basis.name();
  ex.basis_dim = basis.dim();
  ex.condition = basis.condition_number();
  ex.trials.resize(static_cast<std::size_t>(trials));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ex.trials.size(); i = next++) {
      log(LogLevel::info, "trial " + std::to_string(i) + " started");
      ex.trials[i] = run_trial(cfg, setup, basis, i, trial_seed(master_seed, i));
    }
  };
  const int nt = std::clamp(threads, 1, trials);
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return ex;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string rows_csv(const std::vector<RunRow>& rows) {
  std::ostringstream os;
  os << "t,mass,mean_proj,var_proj,mean_dense,var_dense,mean_kb,var_kb,kl_dp,kl_pd,dmo\n";
  for (const auto& r : rows) {
    const double cols[] = {r.t,          r.mass,      r.mean_proj, r.var_proj,
                           r.mean_dense, r.var_dense, r.mean_kb,   r.var_kb,
                           r.kl_dp,      r.kl_pd,     r.dmo};
    for (std::size_t c = 0; c < std::size(cols); ++c) {
      os << (c ? "," : "") << format_number(cols[c]);
    }
    os << '\n';
  }
  return os.str();
}

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

json filter_summary(const FilterExperiment& ex) {
  json trials = json::array();
  std::vector<double> kl_dp, kl_pd, dmo, mean_err, var_err, kl_avg;
  int failed = 0;
  for (const auto& t : ex.trials) {
    json jt = {{"index", t.index}, {"seed", t.seed}, {"status", t.ok ? "ok" : "failed"}};
    if (!t.ok) {
      ++failed;
      jt["message"] = t.message;
      trials.push_back(jt);
      continue;
    }
    const RunRow& last = t.rows.back();
    double avg = 0.0;
    for (const auto& r : t.rows) avg += r.kl_dp;
    avg /= static_cast<double>(t.rows.size());
    jt["floored_nodes"] = t.floored;
    jt["final"] = {{"t", last.t},
                   {"kl_dp", number(last.kl_dp)},
                   {"kl_pd", number(last.kl_pd)},
                   {"dmo", number(last.dmo)},
                   {"mean_proj", number(last.mean_proj)},
                   {"mean_dense", number(last.mean_dense)},
                   {"var_proj", number(last.var_proj)},
                   {"var_dense", number(last.var_dense)}};
    jt["kl_dp_time_average"] = number(avg);
    trials.push_back(jt);
    kl_dp.push_back(last.kl_dp);
    kl_pd.push_back(last.kl_pd);
    dmo.push_back(last.dmo);
    mean_err.push_back(std::abs(last.mean_proj - last.mean_dense));
    var_err.push_back(std::abs(last.var_proj - last.var_dense));
    kl_avg.push_back(avg);
  }
  return {{"version", ex.config.version},
          {"config", to_json(ex.config)},
          {"master_seed", ex.master_seed},
          {"seed_scheme", "splitmix64(master_seed + index)"},
          {"basis", {{"name", ex.basis_name}, {"dim", ex.basis_dim},
                     {"gram_condition", ex.condition}}},
          {"trials", trials},
          {"failed", failed},
          {"medians",
           {{"kl_dp_final", number(median(kl_dp))},
            {"kl_pd_final", number(median(kl_pd))},
            {"dmo_final", number(median(dmo))},
            {"abs_mean_error_final", number(median(mean_err))},
            {"abs_var_error_final", number(median(var_err))},
            {"kl_dp_time_average", number(median(kl_avg))}}}};
}

void write_filter_outputs(const FilterExperiment& ex, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& t : ex.trials) {
    if (!t.ok) continue;
    std::ofstream(dir / ("trial_" + std::to_string(t.index) + ".csv")) << rows_csv(t.rows);
  }
  std::ofstream(dir / "summary.json") << filter_summary(ex).dump(2) << '\n';
}

json geometry_report(const RunConfig& cfg) {
  const auto space = make_space(cfg);
  const DeformedExp fam(parse_family(cfg.family));
  std::vector<DensitySection> specs = cfg.geometry.densities;
  if (specs.empty()) {
    specs = {{"gaussian", 0.0, 1.0, 1.0}, {"gaussian", 0.5, 1.0, 1.0}};
  }
  std::vector<ManifoldPoint> pts;
  json inputs = json::array();
  for (const auto& s : specs) {
    const Vector p = density_wrt_mu(*space, {s.kind, s.mean, s.scale, s.value});
    pts.push_back(ManifoldPoint::from_density(space, fam, p.cwiseMax(1e-300)));
    inputs.push_back({{"kind", s.kind}, {"mean", s.mean}, {"scale", s.scale},
                      {"value", s.value}, {"mass", pts.back().mass()}});
  }
  const ManifoldPoint& P = pts[0];
  const ManifoldPoint& Q = pts[1];
  const Vector dphi = Q.chart() - P.chart();
  const auto sb = symmetric_bound(P, Q);
  const auto eg = eguchi_check(P, dphi, dphi, cfg.geometry.step);
  json report = {
      {"family", cfg.family},
      {"densities", inputs},
      {"kl_PQ", kl(P, Q)},
      {"kl_QP", kl(Q, P)},
      {"dmo_QP", chi2_mo(Q, P)},
      {"dmo_PQ", chi2_mo(P, Q)},
      {"symmetric_kl", sb.symmetric_kl},
      {"me_pairing", sb.pairing},
      {"half_l2_chart_distance", sb.half_l2},
      {"fisher_rao_P", fisher_rao(P, dphi, dphi)},
      {"amari_chentsov_P", amari_chentsov(P, dphi, dphi, dphi)},
      {"eguchi", {{"step", cfg.geometry.step}, {"fd", eg.fd}, {"metric", eg.metric}}},
  };
  if (pts.size() == 3) {
    const ManifoldPoint& R = pts[2];
    report["kl_PR"] = kl(P, R);
    report["kl_QR"] = kl(Q, R);
    report["cosine_defect"] = cosine_defect(P, Q, R);
  }
  return report;
}

CounterexampleConfig counterexample_config(const CounterexampleSection& s) {
  CounterexampleConfig c;
  c.k = s.k;
  c.lambda = s.lambda;
  c.t = s.t;
  c.variant = parse_variant(s.variant);
  c.m = s.m;
  c.terms = s.terms;
  c.zeta1 = s.zeta1;
  c.zeta2 = s.zeta2;
  c.nodes = s.nodes;
  c.alpha_order = s.alpha_order;
  return c;
}

std::string counterexample_csv(const DahlbergSeries& series) {
  std::ostringstream os;
  os << "n,A_n,B_n,ratio_A,ratio_B,compensated_A,compensated_B\n";
  for (const auto& t : series.terms) {
    os << t.n << ',' << format_number(t.A) << ',' << format_number(t.B) << ','
       << format_number(t.ratio_A) << ',' << format_number(t.ratio_B) << ','
       << format_number(t.compensated_A) << ',' << format_number(t.compensated_B) << '\n';
  }
  return os.str();
}

}  // namespace infogeo::cli
