#include "asymshap/cli/config.hpp"

#include <fstream>

#include "asymshap/errors.hpp"

namespace asymshap::cli {

using nlohmann::json;

namespace {

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
}

std::string resolve_path(const std::string& p, const std::filesystem::path& base) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? p : (base / path).string();
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::ConfigError, std::string("config key '") + key + "' has the wrong type");
  }
}

int column_index(const json& v, const std::vector<std::string>* columns) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_string() && columns) {
    for (std::size_t c = 0; c < columns->size(); ++c)
      if ((*columns)[c] == v.get<std::string>()) return static_cast<int>(c);
    throw Error(ErrorCode::ConfigError, "unknown column '" + v.get<std::string>() + "'");
  }
  throw Error(ErrorCode::ConfigError, "variables must be column indices or names");
}

}  // namespace

void RunConfig::validate() const {
  if (mode != "local-exact" && mode != "local-sampled" && mode != "sage")
    throw Error(ErrorCode::ConfigError, "mode must be local-exact, local-sampled or sage");
  try {
    parse_metric(metric);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
}

RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigError, "run config must be a JSON object");
  RunConfig c;
  if (j.contains("order")) {
    c.order = j["order"];
    if (c.order.is_string()) c.order = json{{"path", c.order.get<std::string>()}};
    if (c.order.contains("path")) c.order["path"] = resolve_path(c.order["path"].get<std::string>(), base_dir);
  }
  if (j.contains("data")) c.data = resolve_path(get_or<std::string>(j, "data", ""), base_dir);
  if (j.contains("outcome")) c.outcome = get_or<std::string>(j, "outcome", "");
  if (j.contains("event")) c.event = get_or<std::string>(j, "event", "");
  c.model = j.value("model", json::object());
  if (c.model.contains("path")) c.model["path"] = resolve_path(c.model["path"].get<std::string>(), base_dir);
  c.dependency = j.value("dependency", json::object());
  if (c.dependency.contains("path"))
    c.dependency["path"] = resolve_path(c.dependency["path"].get<std::string>(), base_dir);
  c.mode = get_or<std::string>(j, "mode", c.mode);
  c.metric = get_or<std::string>(j, "metric", c.metric);
  c.samples = get_or<std::size_t>(j, "samples", c.samples);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  c.blend_depth = get_or<int>(j, "blend_depth", c.blend_depth);
  c.threads = get_or<int>(j, "threads", c.threads);
  c.output = resolve_path(get_or<std::string>(j, "output", c.output), base_dir);
  c.simulation = j.value("simulation", json::object());
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(read_json_file(path), path.parent_path());
}

json resolve_json(const json& spec) {
  if (spec.is_object() && spec.contains("path") && spec.size() == 1)
    return read_json_file(spec["path"].get<std::string>());
  return spec;
}

PartialOrder order_from_json(const json& raw, const std::vector<std::string>* columns) {
  const json spec = resolve_json(raw);
  try {
    std::vector<FeatureGroup> groups;
    if (spec.contains("features")) {
      int h = 0;
      for (const auto& f : spec.at("features")) {
        FeatureGroup g;
        g.name = f.is_string() ? f.get<std::string>() : f.at("name").get<std::string>();
        if (f.is_object() && f.contains("vars")) {
          for (const auto& v : f.at("vars")) g.vars.push_back(column_index(v, columns));
        } else if (columns) {
          g.vars.push_back(column_index(json(g.name), columns));
        } else {
          g.vars.push_back(h);
        }
        groups.push_back(std::move(g));
        ++h;
      }
    } else if (columns) {
      for (std::size_t c = 0; c < columns->size(); ++c) groups.push_back({(*columns)[c], {static_cast<int>(c)}});
    } else {
      throw Error(ErrorCode::ConfigError, "partial order needs a feature list");
    }
    FeatureSet fs = columns ? FeatureSet(std::move(groups), static_cast<int>(columns->size()))
                            : FeatureSet(std::move(groups));
    std::vector<std::pair<std::string, std::string>> named;
    if (spec.contains("constraints")) {
      for (const auto& c : spec.at("constraints")) {
        if (!c.is_array() || c.size() != 2) throw Error(ErrorCode::ConfigError, "constraints are [before, after] pairs");
        named.emplace_back(c[0].get<std::string>(), c[1].get<std::string>());
      }
    }
    return PartialOrder(std::move(fs), named);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad partial order: ") + e.what());
  }
}

LinearModel linear_model_from_json(const json& raw, const std::vector<std::string>& columns) {
  const json spec = resolve_json(raw);
  try {
    LinearModel m;
    m.intercept = spec.value("intercept", 0.0);
    m.coefficients.assign(columns.size(), Eigen::VectorXd::Zero(1));
    auto to_vec = [](const json& v) {
      if (v.is_number()) return Eigen::VectorXd::Constant(1, v.get<double>()).eval();
      const auto powers = v.get<std::vector<double>>();
      return Eigen::Map<const Eigen::VectorXd>(powers.data(), static_cast<Eigen::Index>(powers.size())).eval();
    };
    const json& coef = spec.at("coefficients");
    if (coef.is_array()) {
      if (coef.size() != columns.size())
        throw Error(ErrorCode::ConfigError, "one coefficient entry per column is required");
      for (std::size_t j = 0; j < columns.size(); ++j) m.coefficients[j] = to_vec(coef[j]);
    } else {
      for (const auto& [name, v] : coef.items())
        m.coefficients[static_cast<std::size_t>(column_index(json(name), &columns))] = to_vec(v);
    }
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad model spec: ") + e.what());
  }
}

DependencyModel dependency_from_json(const json& raw, const Dataset& data) {
  const json spec = resolve_json(raw);
  try {
    const std::string type = spec.value("type", "fitted-gaussian");
    const int draws = spec.value("draws", kDefaultDraws);
    if (type == "analytic") {
      const auto mean = spec.at("mean").get<std::vector<double>>();
      const auto cov = spec.at("cov").get<std::vector<std::vector<double>>>();
      const auto p = static_cast<Eigen::Index>(mean.size());
      Eigen::MatrixXd s(p, p);
      if (static_cast<Eigen::Index>(cov.size()) != p) throw Error(ErrorCode::ConfigError, "covariance must be p x p");
      for (Eigen::Index r = 0; r < p; ++r) {
        if (static_cast<Eigen::Index>(cov[static_cast<std::size_t>(r)].size()) != p)
          throw Error(ErrorCode::ConfigError, "covariance must be p x p");
        for (Eigen::Index c = 0; c < p; ++c) s(r, c) = cov[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      }
      return GaussianDependency::analytic(Eigen::Map<const Eigen::VectorXd>(mean.data(), p), s, draws);
    }
    if (type == "fitted-gaussian") return GaussianDependency::fit(data.x, draws);
    if (type == "independent") return GaussianDependency::independent(data.x, draws);
    if (type == "empirical-mc") {
      if (!spec.contains("summary")) return EmpiricalMC::fit(data.x, draws);
      const json& s = spec.at("summary");
      std::vector<int> vars;
      for (const auto& v : s.at("vars")) vars.push_back(column_index(v, &data.names));
      return EmpiricalMC::fit(data.x, vars, s.at("components").get<int>(), draws);
    }
    throw Error(ErrorCode::ConfigError, "unknown dependency type '" + type + "'");
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad dependency spec: ") + e.what());
  }
}

}  // namespace asymshap::cli
