#include "config.hpp"

#include "infogeo/deformed.hpp"
#include "infogeo/filter.hpp"
#include "infogeo/measure.hpp"
#include "infogeo/sobolev.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace infogeo::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// Reads the keys of one JSON object and rejects anything it was not asked for.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    read(*it, join(path_, key), out);
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& object(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string child(const std::string& key) const { return join(path_, key); }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(join(path_, key) + ": unknown key");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "<root>" : path_; }

  static void read(const json& v, const std::string& path, double& out) {
    if (!v.is_number()) throw ConfigError(path + ": expected a number");
    out = v.get<double>();
    if (!std::isfinite(out)) throw ConfigError(path + ": must be finite");
  }
  static void read(const json& v, const std::string& path, int& out) {
    if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
    out = v.get<int>();
  }
  static void read(const json& v, const std::string& path, std::optional<int>& out) {
    if (v.is_null()) {
      out.reset();
      return;
    }
    int x = 0;
    read(v, path, x);
    out = x;
  }
  static void read(const json& v, const std::string& path, std::string& out) {
    if (!v.is_string()) throw ConfigError(path + ": expected a string");
    out = v.get<std::string>();
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
void guard(const std::string& path, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path + ": " + what);
}

void require_multiple(double big, double small, const std::string& path) {
  const double r = big / small;
  require(std::abs(r - std::round(r)) <= 1e-6 * r && std::round(r) >= 1, path,
          "must be an integer multiple of the finer step");
}

void parse_model(const json& j, ModelSection& m) {
  Reader r(j, "model");
  r.get("name", m.name);
  if (r.has("params")) {
    const json& p = r.object("params");
    require(p.is_object(), "model.params", "expected an object");
    m.params.clear();
    for (const auto& [key, value] : p.items()) {
      require(value.is_number(), "model.params." + key, "expected a number");
      m.params[key] = value.get<double>();
    }
  }
  r.finish();
  guard("model", [&] { FilterModel::from_registry(m.name, m.params); });
}

void parse_density(const json& j, const std::string& path, DensitySection& d) {
  Reader r(j, path);
  r.get("kind", d.kind);
  r.get("mean", d.mean);
  r.get("scale", d.scale);
  r.get("value", d.value);
  r.finish();
  require(d.kind == "gaussian" || d.kind == "laplace" || d.kind == "reference" ||
              d.kind == "constant",
          path + ".kind", "must be gaussian, laplace, reference or constant");
  require(d.scale > 0.0, path + ".scale", "must be positive");
  require(d.value > 0.0, path + ".value", "must be positive");
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig c;
  Reader root(j, "");
  root.get("version", c.version);
  require(c.version == "1", "version", "unsupported version '" + c.version + "'");
  root.get("family", c.family);
  guard("family", [&] { parse_family(c.family); });

  if (root.has("model")) parse_model(root.object("model"), c.model);

  if (root.has("measure")) {
    Reader r(root.object("measure"), "measure");
    r.get("t", c.measure.t);
    r.get("variant", c.measure.variant);
    r.finish();
  }
  guard("measure", [&] { make_reference(c.measure.t, parse_variant(c.measure.variant)); });

  if (root.has("grid")) {
    Reader r(root.object("grid"), "grid");
    r.get("L", c.grid.L);
    r.get("n", c.grid.n);
    r.finish();
  }
  require(c.grid.L > 0.0, "grid.L", "must be positive");
  require(c.grid.n >= 9 && c.grid.n % 2 == 1, "grid.n", "must be odd and >= 9");

  if (root.has("space")) {
    Reader r(root.object("space"), "space");
    r.get("kind", c.space.kind);
    r.get("k", c.space.k);
    r.get("lambda0", c.space.lambda0);
    r.get("lambda1", c.space.lambda1);
    r.finish();
  }
  guard("space", [&] {
    MixedNormSpec::from_kind(parse_space_kind(c.space.kind), c.space.k, c.space.lambda0,
                             c.space.lambda1)
        .validate();
  });
  require(c.space.k >= 2, "space.k", "projection order k - 2 needs k >= 2");

  if (root.has("basis")) {
    Reader r(root.object("basis"), "basis");
    r.get("name", c.basis.name);
    r.get("m", c.basis.m);
    r.finish();
  }
  require(c.basis.name == "polynomial" || c.basis.name == "poly_plus_bump" ||
              c.basis.name == "grid",
          "basis.name", "must be polynomial, poly_plus_bump or grid");
  require(c.basis.m >= 1, "basis.m", "must be >= 1");

  if (root.has("time")) {
    Reader r(root.object("time"), "time");
    r.get("T", c.time.T);
    r.get("dt", c.time.dt);
    r.get("dt_sim", c.time.dt_sim);
    r.get("dt_dense", c.time.dt_dense);
    r.get("out_dt", c.time.out_dt);
    r.finish();
  }
  for (auto [key, v] : {std::pair{"T", c.time.T}, {"dt", c.time.dt}, {"dt_sim", c.time.dt_sim},
                        {"dt_dense", c.time.dt_dense}, {"out_dt", c.time.out_dt}}) {
    require(v > 0.0, std::string("time.") + key, "must be positive");
  }
  require_multiple(c.time.dt, c.time.dt_sim, "time.dt");
  require_multiple(c.time.dt_dense, c.time.dt_sim, "time.dt_dense");
  require_multiple(c.time.out_dt, c.time.dt, "time.out_dt");
  require_multiple(c.time.out_dt, c.time.dt_dense, "time.out_dt");
  require_multiple(c.time.T, c.time.out_dt, "time.T");

  if (root.has("prior")) {
    Reader r(root.object("prior"), "prior");
    r.get("mean", c.prior.mean);
    r.get("var", c.prior.var);
    r.get("dense_init", c.prior.dense_init);
    r.finish();
  }
  require(c.prior.var > 0.0, "prior.var", "must be positive");
  require(c.prior.dense_init == "projected" || c.prior.dense_init == "exact",
          "prior.dense_init", "must be projected or exact");

  if (root.has("geometry")) {
    Reader r(root.object("geometry"), "geometry");
    r.get("step", c.geometry.step);
    if (r.has("densities")) {
      const json& arr = r.object("densities");
      require(arr.is_array(), "geometry.densities", "expected an array");
      c.geometry.densities.clear();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        DensitySection d;
        parse_density(arr[i], "geometry.densities[" + std::to_string(i) + "]", d);
        c.geometry.densities.push_back(d);
      }
    }
    r.finish();
  }
  require(c.geometry.densities.empty() ||
              (c.geometry.densities.size() >= 2 && c.geometry.densities.size() <= 3),
          "geometry.densities", "needs two or three entries");
  require(c.geometry.step >= 1e-4 && c.geometry.step <= 1e-2, "geometry.step",
          "must be in [1e-4, 1e-2]");

  if (root.has("counterexample")) {
    auto& ce = c.counterexample;
    Reader r(root.object("counterexample"), "counterexample");
    r.get("k", ce.k);
    r.get("lambda", ce.lambda);
    r.get("t", ce.t);
    r.get("variant", ce.variant);
    r.get("m", ce.m);
    r.get("terms", ce.terms);
    r.get("zeta1", ce.zeta1);
    r.get("zeta2", ce.zeta2);
    r.get("nodes", ce.nodes);
    r.get("alpha_order", ce.alpha_order);
    r.finish();
    guard("counterexample.variant", [&] { parse_variant(ce.variant); });
  }
  root.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json densities = json::array();
  for (const auto& d : c.geometry.densities) {
    densities.push_back(
        {{"kind", d.kind}, {"mean", d.mean}, {"scale", d.scale}, {"value", d.value}});
  }
  const auto& ce = c.counterexample;
  return {
      {"version", c.version},
      {"family", c.family},
      {"model", {{"name", c.model.name}, {"params", c.model.params}}},
      {"measure", {{"t", c.measure.t}, {"variant", c.measure.variant}}},
      {"grid", {{"L", c.grid.L}, {"n", c.grid.n}}},
      {"space",
       {{"kind", c.space.kind},
        {"k", c.space.k},
        {"lambda0", c.space.lambda0},
        {"lambda1", c.space.lambda1}}},
      {"basis", {{"name", c.basis.name}, {"m", c.basis.m}}},
      {"time",
       {{"T", c.time.T},
        {"dt", c.time.dt},
        {"dt_sim", c.time.dt_sim},
        {"dt_dense", c.time.dt_dense},
        {"out_dt", c.time.out_dt}}},
      {"prior",
       {{"mean", c.prior.mean}, {"var", c.prior.var}, {"dense_init", c.prior.dense_init}}},
      {"geometry", {{"densities", densities}, {"step", c.geometry.step}}},
      {"counterexample",
       {{"k", ce.k},
        {"lambda", ce.lambda},
        {"t", ce.t},
        {"variant", ce.variant},
        {"m", ce.m},
        {"terms", ce.terms},
        {"zeta1", ce.zeta1},
        {"zeta2", ce.zeta2},
        {"nodes", ce.nodes},
        {"alpha_order", ce.alpha_order ? json(*ce.alpha_order) : json(nullptr)}}},
  };
}

}  // namespace infogeo::cli
