#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "asymshap/dataset.hpp"
#include "asymshap/partial_order.hpp"
#include "asymshap/value_function.hpp"

namespace asymshap::cli {

/// JSON run configuration. Relative paths are resolved against the config file's directory;
/// command-line flags override individual keys after loading.
struct RunConfig {
  nlohmann::json order;                 // inline spec, or {"path": ...}
  std::optional<std::string> data;
  std::optional<std::string> outcome;
  std::optional<std::string> event;
  nlohmann::json model = nlohmann::json::object();
  nlohmann::json dependency = nlohmann::json::object();
  std::string mode = "local-exact";     // local-exact | local-sampled | sage
  std::string metric = "r2";
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  int blend_depth = 0;
  int threads = 0;
  std::string output = ".";
  nlohmann::json simulation = nlohmann::json::object();          // overrides for the simulate command

  /// Throws ConfigError on unknown mode or metric names.
  void validate() const;
};

RunConfig load_run_config(const std::filesystem::path& path);
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);

/// Partial order from {"features":[{"name":..,"vars":[..]}],"constraints":[["A","B"]]}.
/// Variables may be column indices or, when `columns` is given, column names. A feature
/// without "vars" owns the single column with its own name, or column h if there are none.
PartialOrder order_from_json(const nlohmann::json& spec, const std::vector<std::string>* columns);

/// Loads {"path": file} references; returns inline specs unchanged.
nlohmann::json resolve_json(const nlohmann::json& spec);

/// {"type":"linear","intercept":a,"coefficients":...} where coefficients is a list (one number
/// or list of powers per column) or an object keyed by column name.
LinearModel linear_model_from_json(const nlohmann::json& spec, const std::vector<std::string>& columns);

/// Builds the dependency model: analytic | fitted-gaussian | independent | empirical-mc.
DependencyModel dependency_from_json(const nlohmann::json& spec, const Dataset& data);

}  // namespace asymshap::cli
