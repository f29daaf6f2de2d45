#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asymshap/coalition.hpp"
#include "asymshap/engine.hpp"
#include "asymshap/inference.hpp"
#include "asymshap/partial_order.hpp"
#include "asymshap/weights.hpp"

namespace asymshap::cli {

/// Shortest decimal that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Inverse of Coalition::pattern. Throws InvalidInput on bad characters or length.
Coalition parse_pattern(std::string_view pattern, int q);

/// feature,<pattern>,<pattern>,... with one row of exact fractions per feature.
std::string weights_csv(const WeightMatrices& w, const FeatureSet& features, bool plus);

std::string coalitions_csv(const std::vector<Coalition>& coalitions, const FeatureSet& features);

/// row,feature,value,plus,minus,se,base,mode,samples,seed; one line per row and feature.
std::string results_csv(const std::vector<ShapleyResult>& results, const FeatureSet& features,
                        const std::vector<std::size_t>& row_ids);

/// Tabulated contributions keyed by (row, coalition bits), from a row,coalition,value CSV.
using NuTable = std::map<std::pair<std::size_t, std::uint64_t>, double>;
NuTable read_nu_table(const std::string& path, int q);

/// Local Shapley table in long (row,feature,value) or wide (one column per feature) layout,
/// joined with an outcomes CSV by its "row" column when both have one, else by position.
LocalShapleyTable read_local_table(const std::string& table_path, const std::string& outcomes_path,
                                   const std::string& outcome, const std::optional<std::string>& group);

}  // namespace asymshap::cli
