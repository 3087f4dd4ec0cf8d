#include "config.hpp"
#include "log.hpp"
#include "runner.hpp"
#include "verify.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace infogeo;
using namespace infogeo::cli;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kConfigError = 2;

struct Globals {
  std::string config;
  std::string out;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string filter;
};

RunConfig read_config(const Globals& g) {
  return g.config.empty() ? RunConfig{} : load_config(g.config);
}

// Writes `text` to <out>/<name>, or to stdout without --out.
void emit(const Globals& g, const std::string& name, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::filesystem::create_directories(g.out);
  const auto path = std::filesystem::path(g.out) / name;
  std::ofstream os(path);
  if (!os) throw ConfigError(path.string() + ": cannot write");
  os << text;
  log(LogLevel::info, "wrote " + path.string());
}

int cmd_verify(const Globals& g, const std::string& fault) {
  const VerifyContext ctx{parse_fault(fault), g.seed};
  const VerifyReport rep = run_verify(g.filter, ctx);
  for (const auto& r : rep.json["results"]) {
    std::cerr << (r["ok"].get<bool>() ? "PASS " : "FAIL ") << r["property"].get<std::string>()
              << "  " << r["detail"].get<std::string>() << '\n';
  }
  std::cerr << rep.passed << " passed, " << rep.failed << " failed\n";
  emit(g, "verify.json", rep.json.dump(2) + "\n");
  return rep.failed == 0 ? kOk : kFailure;
}

int cmd_geometry(const Globals& g) {
  emit(g, "geometry.json", geometry_report(read_config(g)).dump(2) + "\n");
  return kOk;
}

int cmd_filter(const Globals& g, int trials) {
  const RunConfig cfg = read_config(g);
  const auto ex = run_filter_experiment(cfg, g.seed, trials, g.threads);
  if (g.out.empty()) {
    std::cout << filter_summary(ex).dump(2) << '\n';
  } else {
    write_filter_outputs(ex, g.out);
  }
  int failed = 0;
  for (const auto& t : ex.trials) failed += t.ok ? 0 : 1;
  if (failed) log(LogLevel::error, std::to_string(failed) + " trial(s) failed");
  return failed ? kFailure : kOk;
}

struct CounterexampleFlags {
  std::optional<int> k, terms, alpha_order;
  std::optional<double> lambda;
};

int cmd_counterexample(const Globals& g, const CounterexampleFlags& f) {
  CounterexampleSection s = read_config(g).counterexample;
  if (f.k) s.k = *f.k;
  if (f.lambda) s.lambda = *f.lambda;
  if (f.terms) s.terms = *f.terms;
  if (f.alpha_order) s.alpha_order = *f.alpha_order;
  DahlbergSeries series;
  try {
    series = dahlberg_terms(counterexample_config(s));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("counterexample: ") + e.what());
  }
  emit(g, "counterexample.csv", counterexample_csv(series));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced-chart information geometry toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--config", g.config, "JSON run configuration");
  app.add_option("--out", g.out, "output directory (stdout when absent)");
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--filter", g.filter, "verify: run only this module's properties");

  auto* verify = app.add_subcommand("verify", "run the property suites");
  std::string fault = "none";
  verify->add_option("--inject-fault", fault, "deliberate defect: none | psi2");

  app.add_subcommand("geometry", "divergences and metric for configured densities");

  auto* filter = app.add_subcommand("filter", "dense, projection and Kalman-Bucy filters");
  int trials = 1;
  filter->add_option("--trials", trials, "number of seeded trials")->check(CLI::PositiveNumber);

  auto* counter = app.add_subcommand("counterexample", "Dahlberg series terms");
  CounterexampleFlags cf;
  counter->add_option("--k", cf.k, "derivative order");
  counter->add_option("--lambda", cf.lambda, "integrability exponent");
  counter->add_option("--terms", cf.terms, "number of terms");
  counter->add_option("--alpha-order", cf.alpha_order, "order used in alpha (defaults to k)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (verify->parsed()) return cmd_verify(g, fault);
    if (app.got_subcommand("geometry")) return cmd_geometry(g);
    if (filter->parsed()) return cmd_filter(g, trials);
    if (counter->parsed()) return cmd_counterexample(g, cf);
  } catch (const ConfigError& e) {
    log(LogLevel::error, e.what());
    return kConfigError;
  } catch (const DomainError& e) {
    log(LogLevel::error, e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    log(LogLevel::error, e.what());
    return kFailure;
  }
  return kConfigError;
}
