#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "asymshap/coalition.hpp"
#include "asymshap/rational.hpp"

namespace asymshap {

struct FeatureGroup {
  std::string name;
  std::vector<int> vars;
};

/// Named feature groups partitioning the model's variable columns 0..p-1.
class FeatureSet {
 public:
  FeatureSet() = default;
  /// Throws InvalidInput unless the groups are non-empty, disjoint and cover 0..num_vars-1.
  FeatureSet(std::vector<FeatureGroup> groups, int num_vars);
  /// num_vars is inferred as max index + 1; coverage is still required.
  explicit FeatureSet(std::vector<FeatureGroup> groups);

  /// One single-variable group per name, variable h belongs to feature h.
  static FeatureSet singletons(const std::vector<std::string>& names);

  int size() const { return static_cast<int>(groups_.size()); }
  int num_vars() const { return num_vars_; }
  const FeatureGroup& operator[](int h) const { return groups_[static_cast<std::size_t>(h)]; }
  const std::vector<FeatureGroup>& groups() const { return groups_; }
  int index_of(std::string_view name) const;
  /// Feature owning variable column j.
  int owner(int var) const { return owner_[static_cast<std::size_t>(var)]; }

  /// Sorted variable indices of every feature in s.
  std::vector<int> variables_of(Coalition s) const;

 private:
  std::vector<FeatureGroup> groups_;
  std::vector<int> owner_;
  int num_vars_ = 0;
};

/// Directed precedence constraints (before -> after) over a FeatureSet.
/// A coalition is allowed iff it contains every predecessor of each member.
class PartialOrder {
 public:
  using Constraint = std::pair<int, int>;

  PartialOrder() = default;
  /// Throws InvalidInput on bad indices, CyclicConstraints if the graph has a cycle.
  PartialOrder(FeatureSet features, std::vector<Constraint> constraints);
  PartialOrder(FeatureSet features, const std::vector<std::pair<std::string, std::string>>& named);

  static PartialOrder unconstrained(FeatureSet features) { return PartialOrder(std::move(features), std::vector<Constraint>{}); }

  const FeatureSet& features() const { return features_; }
  int size() const { return features_.size(); }
  Coalition all() const { return Coalition::full(size()); }
  std::span<const Constraint> constraints() const { return constraints_; }

  std::uint64_t direct_predecessors(int h) const { return preds_[static_cast<std::size_t>(h)]; }
  std::uint64_t ancestors(int h) const { return ancestors_[static_cast<std::size_t>(h)]; }
  std::uint64_t descendants(int h) const { return descendants_[static_cast<std::size_t>(h)]; }
  bool comparable(int a, int b) const {
    return ((ancestors(a) | descendants(a)) >> b) & 1U;
  }
  /// Features taking part in at least one constraint.
  Coalition constrained() const { return constrained_; }

 private:
  FeatureSet features_;
  std::vector<Constraint> constraints_;
  std::vector<std::uint64_t> preds_;
  std::vector<std::uint64_t> ancestors_;
  std::vector<std::uint64_t> descendants_;
  Coalition constrained_;
};

bool is_allowed(const PartialOrder& po, Coalition s);

inline constexpr int kDefaultEnumerationCap = 25;

/// All allowed coalitions in CoalitionOrder, including the empty and the full set.
/// Throws CapExceeded when q exceeds max_features.
std::vector<Coalition> enumerate_allowed_coalitions(const PartialOrder& po, int max_features = kDefaultEnumerationCap);

inline constexpr int kBruteForceCap = 10;

/// Number of orderings of subset's features respecting the (transitively closed) constraints,
/// by filtering all permutations. Test oracle for the faster routes.
std::uint64_t count_extensions_bruteforce(const PartialOrder& po, Coalition subset);

/// Exact number of constraint-respecting orderings of subset's features. Unconstrained members
/// contribute a falling factorial; the constrained remainder is counted by dynamic programming
/// over its down-sets. Throws CapExceeded on 128-bit overflow or too many DP states.
UInt128 count_extensions(const PartialOrder& po, Coalition subset);

/// Natural log of count_extensions, valid far beyond the 128-bit range.
double log_count_extensions(const PartialOrder& po, Coalition subset);

enum class ModuleKind { Symmetric, FullyOrdered };

struct Module {
  int size = 0;
  ModuleKind kind = ModuleKind::Symmetric;
};

/// Module layouts with closed-form ordering counts.
enum class ModularCase {
  SingleSymmetric,       // (i)   M1 symmetric
  SingleOrdered,         // (ii)  M1 completely ordered
  PairSymmetric,         // (iii) {M1, M2} without constraints
  PairChain,             // (iv)  M1 -> M2
  TripleChain,           // (v)   M1 -> M2 -> M3
  TripleFork,            // (vi)  M1 -> M2, M1 -> M3
  PairChainPlusFree,     // (vii) M1 -> M2, M3 unconstrained
};

struct ModularStructure {
  std::vector<Module> modules;
  ModularCase pattern = ModularCase::SingleSymmetric;
};

/// Closed-form count. Throws UnsupportedStructure if the module list does not fit the case.
UInt128 count_extensions_modular(const ModularStructure& ms);

/// Recognizes subset's induced order as one of the modular cases, if it is one.
std::optional<ModularStructure> decompose_modular(const PartialOrder& po, Coalition subset);

/// Draws uniformly from the orderings allowed by a partial order.
///
/// A uniform permutation fixes where the constrained features sit; those slots are then
/// refilled with a uniform linear extension of the constrained features, drawn one element
/// at a time with probability proportional to the number of completions.
class OrderingSampler {
 public:
  explicit OrderingSampler(const PartialOrder& po);

  std::vector<int> operator()(std::mt19937_64& rng) const;

 private:
  long double completions(std::uint64_t remaining) const;

  int q_ = 0;
  std::vector<std::uint64_t> ancestors_;
  std::uint64_t constrained_ = 0;
  std::unordered_map<std::uint64_t, long double> counts_;
};

std::vector<int> sample_allowed_ordering(const PartialOrder& po, std::mt19937_64& rng);

}  // namespace asymshap
