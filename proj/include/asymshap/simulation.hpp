#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "asymshap/dataset.hpp"
#include "asymshap/engine.hpp"
#include "asymshap/model.hpp"
#include "asymshap/partial_order.hpp"

namespace asymshap {

/// Y = a0 + a1 G + a2 C1 + a3 C2 + a4 D^2 + eps, D = (D0 + b1 G + U) / sqrt(6), C1 = (C0 + 2U) / sqrt(5).
struct LowDimConfig {
  int n_train = 800;
  int n_test = 200;
  double alpha0 = 0.0;
  double alpha1 = 1.0;
  double alpha2 = 0.0;
  double alpha3 = 1.0;
  double alpha4 = 2.0;
  double beta1 = 2.0;
  std::uint64_t seed = 1;

  /// Throws InvalidInput unless both splits have at least 10 rows.
  void validate() const;
};

/// Columns G, D, C1, C2 and outcome Y; n_train + n_test rows, training rows first.
Dataset generate_lowdim(const LowDimConfig& cfg);

enum class Variant { Marginal, SymmetricConditional, Asymmetric };
inline constexpr std::array<Variant, 3> kVariants = {Variant::Marginal, Variant::SymmetricConditional,
                                                     Variant::Asymmetric};
std::string_view to_string(Variant v);

struct LowDimResult {
  Dataset train;
  Dataset test;
  LinearModel model;   // degree k_poly in D, linear elsewhere
  double test_r2 = 0.0;
  std::array<ShapleyResult, 3> sage;               // indexed like kVariants
  std::array<std::vector<ShapleyResult>, 3> local;  // one result per test row
};

FeatureSet lowdim_features();

/// Fits OLS on the training rows and computes marginal, symmetric conditional and
/// asymmetric (G -> D) local values and SAGE-R^2 on the test rows.
LowDimResult run_lowdim_experiment(const LowDimConfig& cfg, int k_poly = 2, int threads = 1);

}  // namespace asymshap
