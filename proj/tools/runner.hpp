#pragma once

#include "config.hpp"

#include "infogeo/diagnostics.hpp"
#include "infogeo/filter.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace infogeo::cli {

/// Per-trial seed: splitmix64(master + index), so a trial can be rerun alone.
std::uint64_t trial_seed(std::uint64_t master, std::size_t index);

WeightedGridPtr make_space(const RunConfig& cfg);
SubmanifoldBasis make_basis(const RunConfig& cfg, WeightedGridPtr space);

struct TrialResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string message;  ///< blow-up or numerical failure
  std::vector<RunRow> rows;
  long floored = 0;
};

/// Simulates one path and runs dense, projection and (linear models)
/// Kalman-Bucy filters on it.
TrialResult run_trial(const RunConfig& cfg, const FilterSetup& setup,
                      const SubmanifoldBasis& basis, std::size_t index, std::uint64_t seed);

struct FilterExperiment {
  RunConfig config;
  std::uint64_t master_seed = 0;
  std::string basis_name;
  int basis_dim = 0;
  double condition = 0.0;
  std::vector<TrialResult> trials;  ///< ordered by index
};

/// Trials run on `threads` workers; results do not depend on the thread count.
FilterExperiment run_filter_experiment(const RunConfig& cfg, std::uint64_t master_seed,
                                       int trials, int threads);

/// Header t,mass,mean_proj,var_proj,mean_dense,var_dense,mean_kb,var_kb,kl_dp,kl_pd,dmo.
std::string rows_csv(const std::vector<RunRow>& rows);
/// Config echo, seeds, per-trial final values and medians over successful trials.
nlohmann::json filter_summary(const FilterExperiment& ex);
/// Writes trial_<i>.csv for each trial and summary.json.
void write_filter_outputs(const FilterExperiment& ex, const std::filesystem::path& dir);

/// Divergences, metric and tensor values for the configured densities
/// (two or three; defaults to N(0,1) and N(0.5,1)).
nlohmann::json geometry_report(const RunConfig& cfg);

CounterexampleConfig counterexample_config(const CounterexampleSection& s);
/// Columns n,A_n,B_n,ratio_A,ratio_B,compensated_A,compensated_B.
std::string counterexample_csv(const DahlbergSeries& series);

/// Shortest round-trip formatting used in every CSV.
std::string format_number(double v);

}  // namespace infogeo::cli
