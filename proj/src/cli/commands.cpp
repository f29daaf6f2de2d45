#include "asymshap/cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "asymshap/cli/config.hpp"
#include "asymshap/cli/io.hpp"
#include "asymshap/engine.hpp"
#include "asymshap/errors.hpp"
#include "asymshap/inference.hpp"
#include "asymshap/oracle.hpp"
#include "asymshap/parallel.hpp"
#include "asymshap/simulation.hpp"

namespace asymshap::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::string config;
  std::string order;
  std::string data;
  std::string outcome;
  std::string event;
  std::string mode;
  std::string metric;
  std::string output;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> blend_depth;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "JSON run configuration");
  cmd->add_option("--order", o.order, "partial-order JSON file");
  cmd->add_option("--data", o.data, "dataset CSV");
  cmd->add_option("--outcome", o.outcome, "outcome column of the dataset");
  cmd->add_option("--event", o.event, "event indicator column (C-index)");
  cmd->add_option("--metric", o.metric, "r2 | c-index");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--threads", o.threads, "worker threads (default ASYMSHAP_THREADS or 1)");
  cmd->add_option("-o,--out", o.output, "output directory");
}

RunConfig load(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (!o.order.empty()) c.order = json{{"path", o.order}};
  if (!o.data.empty()) c.data = o.data;
  if (!o.outcome.empty()) c.outcome = o.outcome;
  if (!o.event.empty()) c.event = o.event;
  if (!o.mode.empty()) c.mode = o.mode;
  if (!o.metric.empty()) c.metric = o.metric;
  if (!o.output.empty()) c.output = o.output;
  if (o.samples) c.samples = *o.samples;
  if (o.seed) c.seed = *o.seed;
  if (o.blend_depth) c.blend_depth = *o.blend_depth;
  if (o.threads) c.threads = *o.threads;
  c.validate();
  return c;
}

std::optional<Dataset> load_data(const RunConfig& c) {
  if (!c.data) return std::nullopt;
  return read_dataset_csv(*c.data, c.outcome, c.event);
}

PartialOrder load_order(const RunConfig& c, const std::optional<Dataset>& data) {
  if (c.order.is_null() && !data) throw Error(ErrorCode::ConfigError, "a partial order or a dataset is required");
  return order_from_json(c.order.is_null() ? json::object() : c.order, data ? &data->names : nullptr);
}

// Either a model-based value function or tabulated contributions per (row, coalition).
struct Problem {
  Dataset data;
  PartialOrder po;
  std::optional<ValueFunction> vf;
  std::optional<NuTable> table;
  std::vector<std::size_t> rows;

  double nu(std::size_t row, Coalition s) const {
    if (vf) return vf->local(s, data.x.row(static_cast<Eigen::Index>(row)).transpose(), row);
    const auto it = table->find({row, s.bits()});
    if (it == table->end())
      throw Error(ErrorCode::InvalidInput, "tabulated contributions lack row " + std::to_string(row) + " coalition " +
                                               s.pattern(po.size()));
    return it->second;
  }
};

Problem load_problem(const RunConfig& c) {
  std::optional<Dataset> data = load_data(c);
  Problem p;
  p.po = load_order(c, data);
  const json model = resolve_json(c.model);
  const std::string type = model.value("type", "linear");
  if (type == "tabulated") {
    if (!model.contains("path")) throw Error(ErrorCode::ConfigError, "tabulated model needs a path");
    p.table = read_nu_table(model["path"].get<std::string>(), p.po.size());
    std::set<std::size_t> ids;
    for (const auto& [key, v] : *p.table) ids.insert(key.first);
    p.rows.assign(ids.begin(), ids.end());
    if (data) p.data = std::move(*data);
    return p;
  }
  if (!data) throw Error(ErrorCode::ConfigError, "a dataset is required for model-based contributions");
  p.data = std::move(*data);
  PredictionModel pm;
  if (type == "linear") {
    pm = linear_model_from_json(model, p.data.names);
  } else if (type == "ols") {
    if (!p.data.y) throw Error(ErrorCode::ConfigError, "ols model needs an outcome column");
    std::vector<int> degrees(p.data.names.size(), 1);
    const json degree_spec = model.value("degrees", json::object());
    for (const auto& [name, d] : degree_spec.items()) {
      const auto it = std::find(p.data.names.begin(), p.data.names.end(), name);
      if (it == p.data.names.end()) throw Error(ErrorCode::ConfigError, "unknown column '" + name + "'");
      degrees[static_cast<std::size_t>(it - p.data.names.begin())] = d.get<int>();
    }
    pm = fit_ols(p.data.x, *p.data.y, degrees);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown model type '" + type + "'");
  }
  p.vf.emplace(p.po.features(), pm, dependency_from_json(c.dependency, p.data), c.seed);
  for (Eigen::Index i = 0; i < p.data.rows(); ++i) p.rows.push_back(static_cast<std::size_t>(i));
  return p;
}

class Outputs {
 public:
  explicit Outputs(std::string dir) : dir_(std::move(dir)) {}
  void write(const std::string& name, const std::string& content) {
    const fs::path path = fs::path(dir_) / name;
    write_file_atomic(path, content);
    written_.push_back(path.string());
  }
  void report(const std::string& command, std::ostream& out, json extra = json::object()) const {
    extra["command"] = command;
    extra["outputs"] = written_;
    out << extra.dump() << '\n';
  }

 private:
  std::string dir_;
  std::vector<std::string> written_;
};

json result_json(const ShapleyResult& r, const FeatureSet& features) {
  json j;
  j["mode"] = to_string(r.mode);
  j["base"] = r.base;
  j["total"] = r.total();
  j["features"] = json::array();
  for (int h = 0; h < features.size(); ++h) {
    json f{{"name", features[h].name}, {"value", r.values(h)}, {"plus", r.plus(h)}, {"minus", r.minus(h)}};
    if (r.std_errors.size() > 0) f["se"] = r.std_errors(h);
    j["features"].push_back(f);
  }
  if (r.mode == Mode::Sampled) {
    j["samples"] = r.samples;
    j["seed"] = r.seed;
  }
  return j;
}

std::string sage_csv(const ShapleyResult& r, const FeatureSet& features) {
  std::ostringstream out;
  out << "feature,value\n";
  out << "base," << format_double(r.base) << '\n';
  for (int h = 0; h < features.size(); ++h) out << features[h].name << ',' << format_double(r.values(h)) << '\n';
  out << "total," << format_double(r.total()) << '\n';
  return out.str();
}

void cmd_weights(const RunConfig& c, std::ostream& out) {
  const auto data = load_data(c);
  const PartialOrder po = load_order(c, data);
  const WeightMatrices w = build_weight_matrices(po);
  Outputs o(c.output);
  o.write("weights_plus.csv", weights_csv(w, po.features(), true));
  o.write("weights_minus.csv", weights_csv(w, po.features(), false));
  o.report("weights", out, {{"coalitions", w.cols()}});
}

void cmd_coalitions(const RunConfig& c, std::ostream& out) {
  const auto data = load_data(c);
  const PartialOrder po = load_order(c, data);
  const auto coalitions = enumerate_allowed_coalitions(po);
  Outputs o(c.output);
  o.write("coalitions.csv", coalitions_csv(coalitions, po.features()));
  o.report("coalitions", out, {{"coalitions", coalitions.size()}});
}

void cmd_local_exact(const RunConfig& c, std::ostream& out) {
  const Problem p = load_problem(c);
  const int threads = resolve_threads(c.threads);
  const WeightMatrices w = build_weight_matrices(p.po);
  std::vector<ShapleyResult> results;
  if (p.vf) {
    const Eigen::MatrixXd table = local_value_table(w.coalitions, *p.vf, p.data.x, threads);
    for (Eigen::Index i = 0; i < table.rows(); ++i) results.push_back(combine_exact(w, table.row(i).transpose()));
  } else {
    for (std::size_t row : p.rows)
      results.push_back(explain_exact(w, [&](Coalition s) { return p.nu(row, s); }, threads));
  }
  Outputs o(c.output);
  o.write("shapley_local.csv", results_csv(results, p.po.features(), p.rows));
  o.report("explain", out, {{"rows", results.size()}});
}

void cmd_sampled(const RunConfig& c, std::optional<double> constant_nu, std::ostream& out) {
  SamplingOptions opt;
  opt.samples = c.samples;
  opt.seed = c.seed;
  opt.blend_depth = c.blend_depth;
  opt.threads = resolve_threads(c.threads);
  std::vector<ShapleyResult> results;
  Outputs o(c.output);
  if (constant_nu) {
    const auto data = load_data(c);
    const PartialOrder po = load_order(c, data);
    const double v = *constant_nu;
    results.push_back(explain_sampled(po, [v](Coalition) { return v; }, opt));
    o.write("shapley_sampled.csv", results_csv(results, po.features(), {0}));
  } else {
    const Problem p = load_problem(c);
    for (std::size_t row : p.rows) results.push_back(explain_sampled(p.po, [&](Coalition s) { return p.nu(row, s); }, opt));
    o.write("shapley_sampled.csv", results_csv(results, p.po.features(), p.rows));
  }
  o.report("sample", out, {{"rows", results.size()}});
}

void cmd_sage(const RunConfig& c, std::ostream& out) {
  const Problem p = load_problem(c);
  const MetricKind metric = parse_metric(c.metric);
  const int threads = resolve_threads(c.threads);
  const WeightMatrices w = build_weight_matrices(p.po);
  if (p.data.rows() == 0) throw Error(ErrorCode::ConfigError, "SAGE needs a dataset with outcomes");
  Eigen::MatrixXd table;
  if (p.vf) {
    table = local_value_table(w.coalitions, *p.vf, p.data.x, threads);
  } else {
    table.resize(p.data.rows(), static_cast<Eigen::Index>(w.cols()));
    for (Eigen::Index i = 0; i < p.data.rows(); ++i)
      for (std::size_t j = 0; j < w.cols(); ++j)
        table(i, static_cast<Eigen::Index>(j)) = p.nu(static_cast<std::size_t>(i), w.coalitions[j]);
  }
  const ShapleyResult r = sage_from_table(w, table, p.data, metric);
  json j = result_json(r, p.po.features());
  j["metric"] = to_string(metric);
  Outputs o(c.output);
  o.write("sage.json", j.dump(2) + "\n");
  o.write("sage.csv", sage_csv(r, p.po.features()));
  o.report("sage", out, {{"total", r.total()}});
}

struct InferOptions {
  std::string table;
  std::string outcomes;
  std::string outcome = "y";
  std::string group;
  std::vector<std::string> features;
  int block_size = kDefaultBlockSize;
  std::size_t permutations = 999;
};

void cmd_infer(const RunConfig& c, const InferOptions& io, std::ostream& out) {
  if (io.table.empty() || io.outcomes.empty())
    throw Error(ErrorCode::ConfigError, "infer needs --table and --outcomes");
  const LocalShapleyTable t = read_local_table(io.table, io.outcomes, io.outcome,
                                               io.group.empty() ? std::nullopt : std::optional<std::string>(io.group));
  std::vector<int> targets;
  if (io.features.empty()) {
    for (int h = 0; h < static_cast<int>(t.features.size()); ++h) targets.push_back(h);
  } else {
    for (const auto& name : io.features) {
      const auto it = std::find(t.features.begin(), t.features.end(), name);
      if (it == t.features.end()) throw Error(ErrorCode::ConfigError, "unknown feature '" + name + "'");
      targets.push_back(static_cast<int>(it - t.features.begin()));
    }
  }
  const int threads = resolve_threads(c.threads);
  json report = json::array();
  for (int h : targets) {
    const LrtResult lrt = lrt_conditional(t, h);
    const PermutationResult perm = matched_permutation_test(t, h, io.block_size, io.permutations, c.seed, threads);
    json j{{"feature", t.features[static_cast<std::size_t>(h)]},
           {"llr", lrt.llr},
           {"df", lrt.df},
           {"p_lrt", lrt.p},
           {"stat_perm", perm.stat},
           {"p_perm", perm.p}};
    if (t.groups) {
      const KruskalWallisResult kw = kruskal_wallis(t.phi.col(h), *t.groups);
      j["h_kw"] = kw.h;
      j["p_kw"] = kw.p;
    }
    report.push_back(j);
  }
  Outputs o(c.output);
  o.write("infer.json", report.dump(2) + "\n");
  o.report("infer", out);
}

struct SimulateOptions {
  std::optional<int> n_train, n_test, k_poly;
  std::optional<double> alpha0, alpha1, alpha2, alpha3, alpha4, beta1;
};

void cmd_simulate(const RunConfig& c, const SimulateOptions& so, std::ostream& out) {
  LowDimConfig cfg;
  const json& j = c.simulation;
  int k_poly = j.value("k_poly", 2);
  cfg.n_train = j.value("n_train", cfg.n_train);
  cfg.n_test = j.value("n_test", cfg.n_test);
  cfg.alpha0 = j.value("alpha0", cfg.alpha0);
  cfg.alpha1 = j.value("alpha1", cfg.alpha1);
  cfg.alpha2 = j.value("alpha2", cfg.alpha2);
  cfg.alpha3 = j.value("alpha3", cfg.alpha3);
  cfg.alpha4 = j.value("alpha4", cfg.alpha4);
  cfg.beta1 = j.value("beta1", cfg.beta1);
  cfg.seed = c.seed;
  if (so.n_train) cfg.n_train = *so.n_train;
  if (so.n_test) cfg.n_test = *so.n_test;
  if (so.k_poly) k_poly = *so.k_poly;
  if (so.alpha0) cfg.alpha0 = *so.alpha0;
  if (so.alpha1) cfg.alpha1 = *so.alpha1;
  if (so.alpha2) cfg.alpha2 = *so.alpha2;
  if (so.alpha3) cfg.alpha3 = *so.alpha3;
  if (so.alpha4) cfg.alpha4 = *so.alpha4;
  if (so.beta1) cfg.beta1 = *so.beta1;

  const LowDimResult r = run_lowdim_experiment(cfg, k_poly, resolve_threads(c.threads));
  const FeatureSet features = lowdim_features();
  Outputs o(c.output);

  std::ostringstream table;
  table << "feature";
  for (Variant v : kVariants) table << ',' << to_string(v);
  table << '\n';
  for (int h = 0; h < features.size(); ++h) {
    table << features[h].name;
    for (const auto& s : r.sage) table << ',' << format_double(s.values(h));
    table << '\n';
  }
  table << "total";
  for (const auto& s : r.sage) table << ',' << format_double(s.total());
  table << '\n';
  o.write("sage_table.csv", table.str());

  for (std::size_t v = 0; v < kVariants.size(); ++v) {
    std::ostringstream local;
    local << "row,feature,x,value,base\n";
    for (std::size_t i = 0; i < r.local[v].size(); ++i) {
      for (int h = 0; h < features.size(); ++h) {
        local << i << ',' << features[h].name << ',' << format_double(r.test.x(static_cast<Eigen::Index>(i), h)) << ','
              << format_double(r.local[v][i].values(h)) << ',' << format_double(r.local[v][i].base) << '\n';
      }
    }
    o.write("local_" + std::string(to_string(kVariants[v])) + ".csv", local.str());
  }

  json echo{{"n_train", cfg.n_train}, {"n_test", cfg.n_test}, {"alpha0", cfg.alpha0}, {"alpha1", cfg.alpha1},
            {"alpha2", cfg.alpha2},   {"alpha3", cfg.alpha3}, {"alpha4", cfg.alpha4}, {"beta1", cfg.beta1},
            {"seed", cfg.seed},       {"k_poly", k_poly},     {"test_r2", r.test_r2}};
  o.write("config.json", echo.dump(2) + "\n");
  o.report("simulate", out, {{"test_r2", r.test_r2}});
}

struct OracleOptions {
  double beta1 = 1.0, beta2 = 1.0, beta3 = 5.0, gamma = 0.8;
  std::vector<double> rho{0.0, 0.3, 0.6};
  std::size_t points = 100;
};

void cmd_oracle(const RunConfig& c, const OracleOptions& oo, std::ostream& out) {
  std::ostringstream csv;
  csv << "setting,rho,point,feature,variant,oracle,engine,abs_diff\n";
  double max_diff = 0.0;
  std::mt19937_64 rng(c.seed);
  std::normal_distribution<double> normal;
  const std::vector<std::string> names3{"G", "D", "C"};

  auto compare = [&](const std::string& setting, double rho, std::size_t point, const std::string& variant,
                     std::span<const double> oracle, const ShapleyResult& engine) {
    for (std::size_t h = 0; h < oracle.size(); ++h) {
      const double diff = std::abs(oracle[h] - engine.values(static_cast<Eigen::Index>(h)));
      max_diff = std::max(max_diff, diff);
      csv << setting << ',' << format_double(rho) << ',' << point << ',' << names3[h] << ',' << variant << ','
          << format_double(oracle[h]) << ',' << format_double(engine.values(static_cast<Eigen::Index>(h))) << ','
          << format_double(diff) << '\n';
    }
  };
  auto engine_values = [](const FeatureSet& fs, const Eigen::VectorXd& beta, const Eigen::MatrixXd& cov,
                          bool asymmetric, const Eigen::VectorXd& x) {
    const PartialOrder po = asymmetric ? PartialOrder(fs, std::vector<PartialOrder::Constraint>{{0, 1}})
                                       : PartialOrder::unconstrained(fs);
    const ValueFunction vf(fs, LinearModel::linear(0.0, beta),
                           GaussianDependency::analytic(Eigen::VectorXd::Zero(beta.size()), cov));
    return explain_local_exact(po, vf, x);
  };

  const ToyParams2D p2{oo.beta1, oo.beta2, oo.gamma};
  p2.validate();
  const FeatureSet fs2 = FeatureSet::singletons({"G", "D"});
  const Eigen::Vector2d b2(oo.beta1, oo.beta2);
  for (std::size_t i = 0; i < oo.points; ++i) {
    const double g = normal(rng);
    const double d = oo.gamma * g + std::sqrt(std::max(0.0, 1.0 - oo.gamma * oo.gamma)) * normal(rng);
    const Oracle2D o = oracle_2d(p2, g, d);
    const Eigen::Vector2d x(g, d);
    compare("2d", 0.0, i, "asymmetric", o.asym, engine_values(fs2, b2, p2.covariance(), true, x));
    compare("2d", 0.0, i, "symmetric", o.sym, engine_values(fs2, b2, p2.covariance(), false, x));
    compare("2d", 0.0, i, "marginal", o.marginal, engine_values(fs2, b2, Eigen::Matrix2d::Identity(), false, x));
  }

  const FeatureSet fs3 = FeatureSet::singletons(names3);
  const Eigen::Vector3d b3(oo.beta1, oo.beta2, oo.beta3);
  for (double rho : oo.rho) {
    const ToyParams3D p3{oo.beta1, oo.beta2, oo.beta3, oo.gamma, rho};
    p3.validate();
    for (std::size_t i = 0; i < oo.points; ++i) {
      const double g = normal(rng);
      const double d = oo.gamma * g + std::sqrt(std::max(0.0, 1.0 - oo.gamma * oo.gamma)) * normal(rng);
      const double c3 = rho / (1.0 + oo.gamma) * (g + d) +
                        std::sqrt(std::max(0.0, 1.0 - 2.0 * rho * rho / (1.0 + oo.gamma))) * normal(rng);
      const Oracle3D o = oracle_3d(p3, g, d, c3);
      const Eigen::Vector3d x(g, d, c3);
      compare("3d", rho, i, "asymmetric", o.asym, engine_values(fs3, b3, p3.covariance(), true, x));
      compare("3d", rho, i, "symmetric", o.sym, engine_values(fs3, b3, p3.covariance(), false, x));
      compare("3d", rho, i, "marginal", o.marginal, engine_values(fs3, b3, Eigen::Matrix3d::Identity(), false, x));
    }
  }

  Outputs o(c.output);
  o.write("oracle.csv", csv.str());
  o.report("oracle", out, {{"max_abs_diff", max_diff}});
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Asymmetric Shapley values under partial orders"};
  app.require_subcommand(1);
  Overrides ov;

  auto* weights = app.add_subcommand("weights", "exact W+ and W- matrices");
  add_common(weights, ov);
  auto* coalitions = app.add_subcommand("coalitions", "allowed coalitions");
  add_common(coalitions, ov);

  auto* explain = app.add_subcommand("explain", "local Shapley values (mode from config)");
  add_common(explain, ov);
  explain->add_option("--mode", ov.mode, "local-exact | local-sampled | sage");
  explain->add_option("--samples", ov.samples, "sampled coalitions B");
  explain->add_option("--blend-depth", ov.blend_depth, "exact sizes at each end (0 = off)");

  auto* sage = app.add_subcommand("sage", "SAGE decomposition of a metric");
  add_common(sage, ov);

  std::optional<double> constant_nu;
  auto* sample = app.add_subcommand("sample", "importance-sampled local Shapley values");
  add_common(sample, ov);
  sample->add_option("--samples", ov.samples, "sampled coalitions B");
  sample->add_option("--blend-depth", ov.blend_depth, "exact sizes at each end (0 = off)");
  sample->add_option("--constant-nu", constant_nu, "use a constant contribution function");

  InferOptions io;
  auto* infer = app.add_subcommand("infer", "tests on a local Shapley table");
  add_common(infer, ov);
  infer->add_option("--table", io.table, "local Shapley CSV (long or wide)");
  infer->add_option("--outcomes", io.outcomes, "outcomes CSV");
  infer->add_option("--outcome-column", io.outcome, "outcome column in the outcomes CSV");
  infer->add_option("--group", io.group, "group column for the Kruskal-Wallis check");
  infer->add_option("--feature", io.features, "features to test (default all)");
  infer->add_option("--block-size", io.block_size, "matched block size");
  infer->add_option("--permutations", io.permutations, "permutation replicates");

  SimulateOptions so;
  auto* simulate = app.add_subcommand("simulate", "low-dimensional simulation experiment");
  add_common(simulate, ov);
  simulate->add_option("--n-train", so.n_train);
  simulate->add_option("--n-test", so.n_test);
  simulate->add_option("--k-poly", so.k_poly, "polynomial degree for D");
  simulate->add_option("--alpha0", so.alpha0);
  simulate->add_option("--alpha1", so.alpha1);
  simulate->add_option("--alpha2", so.alpha2);
  simulate->add_option("--alpha3", so.alpha3);
  simulate->add_option("--alpha4", so.alpha4);
  simulate->add_option("--beta1", so.beta1);

  OracleOptions oo;
  auto* oracle = app.add_subcommand("oracle", "closed-form vs engine comparison for the toy settings");
  add_common(oracle, ov);
  oracle->add_option("--beta1", oo.beta1);
  oracle->add_option("--beta2", oo.beta2);
  oracle->add_option("--beta3", oo.beta3);
  oracle->add_option("--gamma", oo.gamma);
  oracle->add_option("--rho", oo.rho)->delimiter(',');
  oracle->add_option("--points", oo.points, "random points per setting");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << json{{"error", "ConfigError"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }

  try {
    const RunConfig c = load(ov);
    if (*weights) {
      cmd_weights(c, out);
    } else if (*coalitions) {
      cmd_coalitions(c, out);
    } else if (*explain) {
      if (c.mode == "local-sampled") {
        cmd_sampled(c, std::nullopt, out);
      } else if (c.mode == "sage") {
        cmd_sage(c, out);
      } else {
        cmd_local_exact(c, out);
      }
    } else if (*sage) {
      cmd_sage(c, out);
    } else if (*sample) {
      cmd_sampled(c, constant_nu, out);
    } else if (*infer) {
      cmd_infer(c, io, out);
    } else if (*simulate) {
      cmd_simulate(c, so, out);
    } else if (*oracle) {
      cmd_oracle(c, oo, out);
    }
  } catch (const Error& e) {
    err << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << json{{"error", "IoError"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace asymshap::cli
