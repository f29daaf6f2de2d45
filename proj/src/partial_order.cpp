#include "asymshap/partial_order.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "asymshap/errors.hpp"

namespace asymshap {

namespace {

constexpr std::size_t kMaxDpStates = std::size_t{1} << 22;

std::uint64_t bit(int h) { return std::uint64_t{1} << h; }

UInt128 checked_mul(UInt128 a, UInt128 b) {
  UInt128 out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw Error(ErrorCode::CapExceeded, "ordering count exceeds 128-bit range");
  }
  return out;
}

UInt128 checked_add(UInt128 a, UInt128 b) {
  UInt128 out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(ErrorCode::CapExceeded, "ordering count exceeds 128-bit range");
  }
  return out;
}

UInt128 factorial(int n) {
  UInt128 out = 1;
  for (int i = 2; i <= n; ++i) out = checked_mul(out, static_cast<UInt128>(i));
  return out;
}

UInt128 binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  UInt128 out = 1;
  for (int i = 1; i <= k; ++i) {
    out = checked_mul(out, static_cast<UInt128>(n - k + i));
    out /= static_cast<UInt128>(i);
  }
  return out;
}

// Orderings of `mask` that respect `ancestors`, counted by peeling minimal elements.
template <class Count>
class DownsetCounter {
 public:
  DownsetCounter(const std::vector<std::uint64_t>& ancestors, Count (*add)(Count, Count))
      : ancestors_(ancestors), add_(add) {}

  Count count(std::uint64_t mask) {
    if (std::popcount(mask) <= 1) return Count(1);
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    if (memo_.size() >= kMaxDpStates) {
      throw Error(ErrorCode::CapExceeded, "linear-extension counting exceeded the state cap");
    }
    Count total(0);
    for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
      int x = std::countr_zero(rest);
      if ((ancestors_[static_cast<std::size_t>(x)] & mask) == 0) total = add_(total, count(mask & ~bit(x)));
    }
    memo_.emplace(mask, total);
    return total;
  }

 private:
  const std::vector<std::uint64_t>& ancestors_;
  Count (*add_)(Count, Count);
  std::unordered_map<std::uint64_t, Count> memo_;
};

struct SplitSubset {
  std::uint64_t free = 0;
  std::uint64_t constrained = 0;
};

SplitSubset split(const PartialOrder& po, Coalition subset) {
  SplitSubset out;
  for (int x : subset.members()) {
    if (((po.ancestors(x) | po.descendants(x)) & subset.bits()) == 0) {
      out.free |= bit(x);
    } else {
      out.constrained |= bit(x);
    }
  }
  return out;
}

std::vector<std::uint64_t> all_ancestors(const PartialOrder& po) {
  std::vector<std::uint64_t> anc(static_cast<std::size_t>(po.size()));
  for (int h = 0; h < po.size(); ++h) anc[static_cast<std::size_t>(h)] = po.ancestors(h);
  return anc;
}

}  // namespace

FeatureSet::FeatureSet(std::vector<FeatureGroup> groups, int num_vars)
    : groups_(std::move(groups)), num_vars_(num_vars) {
  if (groups_.empty()) throw Error(ErrorCode::InvalidInput, "feature set needs at least one feature");
  if (static_cast<int>(groups_.size()) > kMaxFeatures) {
    throw Error(ErrorCode::CapExceeded, "at most 64 features are supported");
  }
  owner_.assign(static_cast<std::size_t>(num_vars_), -1);
  for (std::size_t h = 0; h < groups_.size(); ++h) {
    const auto& g = groups_[h];
    if (g.vars.empty()) throw Error(ErrorCode::InvalidInput, "feature '" + g.name + "' has no variables");
    for (std::size_t k = 0; k < h; ++k) {
      if (groups_[k].name == g.name) throw Error(ErrorCode::InvalidInput, "duplicate feature name '" + g.name + "'");
    }
    for (int v : g.vars) {
      if (v < 0 || v >= num_vars_) {
        throw Error(ErrorCode::InvalidInput, "feature '" + g.name + "' references variable " + std::to_string(v) +
                                                 " outside 0.." + std::to_string(num_vars_ - 1));
      }
      if (owner_[static_cast<std::size_t>(v)] != -1) {
        throw Error(ErrorCode::InvalidInput, "variable " + std::to_string(v) + " belongs to two features");
      }
      owner_[static_cast<std::size_t>(v)] = static_cast<int>(h);
    }
  }
  for (int v = 0; v < num_vars_; ++v) {
    if (owner_[static_cast<std::size_t>(v)] == -1) {
      throw Error(ErrorCode::InvalidInput, "variable " + std::to_string(v) + " is not assigned to a feature");
    }
  }
}

FeatureSet::FeatureSet(std::vector<FeatureGroup> groups)
    : FeatureSet(groups, [&] {
        int top = -1;
        for (const auto& g : groups)
          for (int v : g.vars) top = std::max(top, v);
        return top + 1;
      }()) {}

FeatureSet FeatureSet::singletons(const std::vector<std::string>& names) {
  std::vector<FeatureGroup> groups;
  for (std::size_t i = 0; i < names.size(); ++i) groups.push_back({names[i], {static_cast<int>(i)}});
  return FeatureSet(std::move(groups), static_cast<int>(names.size()));
}

int FeatureSet::index_of(std::string_view name) const {
  for (std::size_t h = 0; h < groups_.size(); ++h)
    if (groups_[h].name == name) return static_cast<int>(h);
  throw Error(ErrorCode::InvalidInput, "unknown feature '" + std::string(name) + "'");
}

std::vector<int> FeatureSet::variables_of(Coalition s) const {
  std::vector<int> out;
  for (int h : s.members()) {
    const auto& v = groups_[static_cast<std::size_t>(h)].vars;
    out.insert(out.end(), v.begin(), v.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

PartialOrder::PartialOrder(FeatureSet features, std::vector<Constraint> constraints)
    : features_(std::move(features)), constraints_(std::move(constraints)) {
  const int q = features_.size();
  preds_.assign(static_cast<std::size_t>(q), 0);
  for (auto [before, after] : constraints_) {
    if (before < 0 || before >= q || after < 0 || after >= q) {
      throw Error(ErrorCode::InvalidInput, "constraint references an unknown feature index");
    }
    if (before == after) throw Error(ErrorCode::CyclicConstraints, "feature constrained to precede itself");
    preds_[static_cast<std::size_t>(after)] |= bit(before);
    constrained_ = constrained_.with(before).with(after);
  }

  // Kahn's algorithm gives a topological order, or detects a cycle.
  std::vector<int> order;
  std::uint64_t placed = 0;
  while (static_cast<int>(order.size()) < q) {
    bool progressed = false;
    for (int h = 0; h < q; ++h) {
      if (((placed >> h) & 1U) == 0 && (preds_[static_cast<std::size_t>(h)] & ~placed) == 0) {
        order.push_back(h);
        placed |= bit(h);
        progressed = true;
      }
    }
    if (!progressed) throw Error(ErrorCode::CyclicConstraints, "precedence constraints contain a cycle");
  }

  ancestors_.assign(static_cast<std::size_t>(q), 0);
  descendants_.assign(static_cast<std::size_t>(q), 0);
  for (int h : order) {
    std::uint64_t anc = preds_[static_cast<std::size_t>(h)];
    for (std::uint64_t p = preds_[static_cast<std::size_t>(h)]; p != 0; p &= p - 1) {
      anc |= ancestors_[static_cast<std::size_t>(std::countr_zero(p))];
    }
    ancestors_[static_cast<std::size_t>(h)] = anc;
    for (std::uint64_t a = anc; a != 0; a &= a - 1) {
      descendants_[static_cast<std::size_t>(std::countr_zero(a))] |= bit(h);
    }
  }
}

PartialOrder::PartialOrder(FeatureSet features, const std::vector<std::pair<std::string, std::string>>& named)
    : PartialOrder(features, [&] {
        std::vector<Constraint> out;
        for (const auto& [a, b] : named) out.emplace_back(features.index_of(a), features.index_of(b));
        return out;
      }()) {}

bool is_allowed(const PartialOrder& po, Coalition s) {
  for (std::uint64_t rest = s.bits(); rest != 0; rest &= rest - 1) {
    if ((po.direct_predecessors(std::countr_zero(rest)) & ~s.bits()) != 0) return false;
  }
  return true;
}

std::vector<Coalition> enumerate_allowed_coalitions(const PartialOrder& po, int max_features) {
  const int q = po.size();
  if (q > max_features) {
    throw Error(ErrorCode::CapExceeded, "enumeration of 2^" + std::to_string(q) + " coalitions exceeds the cap of 2^" +
                                            std::to_string(max_features));
  }
  // Topological order so that a feature is decided after all its predecessors.
  std::vector<int> order(static_cast<std::size_t>(q));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::popcount(po.ancestors(a)) < std::popcount(po.ancestors(b));
  });

  std::vector<Coalition> out;
  auto recurse = [&](auto&& self, std::size_t depth, std::uint64_t mask) -> void {
    if (depth == order.size()) {
      out.emplace_back(mask);
      return;
    }
    int h = order[depth];
    self(self, depth + 1, mask);
    if ((po.direct_predecessors(h) & ~mask) == 0) self(self, depth + 1, mask | bit(h));
  };
  recurse(recurse, 0, 0);
  std::sort(out.begin(), out.end(), CoalitionOrder{});
  return out;
}

std::uint64_t count_extensions_bruteforce(const PartialOrder& po, Coalition subset) {
  if (subset.size() > kBruteForceCap) {
    throw Error(ErrorCode::CapExceeded, "brute-force counting is limited to 10 features");
  }
  std::vector<int> perm = subset.members();
  std::uint64_t count = 0;
  do {
    bool ok = true;
    std::uint64_t seen = 0;
    for (int x : perm) {
      if ((po.ancestors(x) & subset.bits() & ~seen) != 0) {
        ok = false;
        break;
      }
      seen |= bit(x);
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

UInt128 count_extensions(const PartialOrder& po, Coalition subset) {
  const auto parts = split(po, subset);
  const int n = subset.size();
  const int c = std::popcount(parts.constrained);
  UInt128 out = 1;
  for (int i = c + 1; i <= n; ++i) out = checked_mul(out, static_cast<UInt128>(i));
  if (c > 0) {
    auto anc = all_ancestors(po);
    DownsetCounter<UInt128> dp(anc, checked_add);
    out = checked_mul(out, dp.count(parts.constrained));
  }
  return out;
}

double log_count_extensions(const PartialOrder& po, Coalition subset) {
  const auto parts = split(po, subset);
  const int n = subset.size();
  const int c = std::popcount(parts.constrained);
  double out = std::lgamma(n + 1.0) - std::lgamma(c + 1.0);
  if (c > 0) {
    auto anc = all_ancestors(po);
    DownsetCounter<long double> dp(anc, [](long double a, long double b) { return a + b; });
    out += static_cast<double>(std::log(dp.count(parts.constrained)));
  }
  return out;
}

namespace {

UInt128 module_count(const Module& m) {
  if (m.size < 0) throw Error(ErrorCode::UnsupportedStructure, "negative module size");
  return m.kind == ModuleKind::Symmetric ? factorial(m.size) : UInt128{1};
}

}  // namespace

UInt128 count_extensions_modular(const ModularStructure& ms) {
  const auto& m = ms.modules;
  auto expect = [&](std::size_t k) {
    if (m.size() != k) throw Error(ErrorCode::UnsupportedStructure, "module count does not match the case");
  };
  switch (ms.pattern) {
    case ModularCase::SingleSymmetric:
      expect(1);
      if (m[0].kind != ModuleKind::Symmetric && m[0].size > 1) {
        throw Error(ErrorCode::UnsupportedStructure, "case (i) requires a symmetric module");
      }
      return factorial(m[0].size);
    case ModularCase::SingleOrdered:
      expect(1);
      if (m[0].kind != ModuleKind::FullyOrdered && m[0].size > 1) {
        throw Error(ErrorCode::UnsupportedStructure, "case (ii) requires a completely ordered module");
      }
      return 1;
    case ModularCase::PairSymmetric:
      expect(2);
      for (const auto& mod : m) {
        if (mod.kind != ModuleKind::Symmetric && mod.size > 1) {
          throw Error(ErrorCode::UnsupportedStructure, "case (iii) requires symmetric modules");
        }
      }
      return factorial(m[0].size + m[1].size);
    case ModularCase::PairChain:
      expect(2);
      return checked_mul(module_count(m[0]), module_count(m[1]));
    case ModularCase::TripleChain:
      expect(3);
      return checked_mul(checked_mul(module_count(m[0]), module_count(m[1])), module_count(m[2]));
    case ModularCase::TripleFork:
      expect(3);
      return checked_mul(checked_mul(checked_mul(module_count(m[0]), module_count(m[1])), module_count(m[2])),
                         binomial(m[1].size + m[2].size, m[1].size));
    case ModularCase::PairChainPlusFree:
      expect(3);
      return checked_mul(checked_mul(checked_mul(module_count(m[0]), module_count(m[1])), module_count(m[2])),
                         binomial(m[0].size + m[1].size + m[2].size, m[2].size));
  }
  throw Error(ErrorCode::UnsupportedStructure, "unknown modular case");
}

std::optional<ModularStructure> decompose_modular(const PartialOrder& po, Coalition subset) {
  const auto parts = split(po, subset);
  const std::uint64_t c_mask = parts.constrained;
  const int n_free = std::popcount(parts.free);
  if (c_mask == 0) return ModularStructure{{{n_free, ModuleKind::Symmetric}}, ModularCase::SingleSymmetric};

  // Series decomposition: components of the incomparability graph on the constrained part
  // are totally ordered with complete precedence between them.
  std::vector<int> elems = Coalition(c_mask).members();
  std::vector<int> parent(static_cast<std::size_t>(kMaxFeatures));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
    return x;
  };
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = i + 1; j < elems.size(); ++j)
      if (!po.comparable(elems[i], elems[j])) parent[static_cast<std::size_t>(find(elems[i]))] = find(elems[j]);

  std::vector<std::uint64_t> comps;
  for (int x : elems) {
    std::uint64_t comp = 0;
    for (int y : elems)
      if (find(y) == find(x)) comp |= bit(y);
    if (std::find(comps.begin(), comps.end(), comp) == comps.end()) comps.push_back(comp);
  }
  auto rank_of = [&](std::uint64_t comp) { return std::popcount(po.ancestors(std::countr_zero(comp)) & c_mask); };
  std::sort(comps.begin(), comps.end(), [&](auto a, auto b) { return rank_of(a) < rank_of(b); });

  auto is_antichain = [&](std::uint64_t comp) {
    for (std::uint64_t r = comp; r != 0; r &= r - 1)
      if ((po.ancestors(std::countr_zero(r)) & comp) != 0) return false;
    return true;
  };

  // Runs of singleton components form one completely ordered module.
  std::vector<Module> series;
  std::optional<std::uint64_t> parallel_tail;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::uint64_t comp = comps[i];
    const int size = std::popcount(comp);
    if (size == 1) {
      if (!series.empty() && series.back().kind == ModuleKind::FullyOrdered && i > 0 && std::popcount(comps[i - 1]) == 1) {
        ++series.back().size;
      } else {
        series.push_back({1, ModuleKind::FullyOrdered});
      }
    } else if (is_antichain(comp)) {
      series.push_back({size, ModuleKind::Symmetric});
    } else if (i + 1 == comps.size() && !parallel_tail) {
      parallel_tail = comp;
    } else {
      return std::nullopt;
    }
  }

  if (parallel_tail) {
    if (n_free != 0 || series.size() != 1) return std::nullopt;
    // The tail must split into a chain and a symmetric block, or two chains.
    const std::uint64_t tail = *parallel_tail;
    std::vector<Module> branches;
    int loose = 0;
    std::uint64_t seen = 0;
    for (int x : Coalition(tail).members()) {
      if ((seen >> x) & 1U) continue;
      std::uint64_t comp = bit(x);
      for (bool grew = true; grew;) {
        grew = false;
        for (int y : Coalition(tail & ~comp).members()) {
          for (int z : Coalition(comp).members()) {
            if (po.comparable(y, z)) {
              comp |= bit(y);
              grew = true;
              break;
            }
          }
        }
      }
      seen |= comp;
      const int size = std::popcount(comp);
      if (size == 1) {
        ++loose;
        continue;
      }
      for (int y : Coalition(comp).members())
        for (int z : Coalition(comp).members())
          if (y != z && !po.comparable(y, z)) return std::nullopt;
      branches.push_back({size, ModuleKind::FullyOrdered});
    }
    if (loose > 0) branches.push_back({loose, ModuleKind::Symmetric});
    if (branches.size() != 2) return std::nullopt;
    return ModularStructure{{series[0], branches[0], branches[1]}, ModularCase::TripleFork};
  }

  if (n_free == 0) {
    switch (series.size()) {
      case 1: return ModularStructure{{series[0]}, ModularCase::SingleOrdered};
      case 2: return ModularStructure{{series[0], series[1]}, ModularCase::PairChain};
      case 3: return ModularStructure{{series[0], series[1], series[2]}, ModularCase::TripleChain};
      default: return std::nullopt;
    }
  }
  const Module free_module{n_free, ModuleKind::Symmetric};
  if (series.size() == 2) return ModularStructure{{series[0], series[1], free_module}, ModularCase::PairChainPlusFree};
  if (series.size() == 1 && series[0].kind == ModuleKind::FullyOrdered && series[0].size >= 2) {
    Module head{series[0].size - 1, ModuleKind::FullyOrdered};
    Module last{1, ModuleKind::FullyOrdered};
    return ModularStructure{{head, last, free_module}, ModularCase::PairChainPlusFree};
  }
  return std::nullopt;
}

OrderingSampler::OrderingSampler(const PartialOrder& po)
    : q_(po.size()), ancestors_(all_ancestors(po)), constrained_(po.constrained().bits()) {
  if (constrained_ != 0) {
    DownsetCounter<long double> dp(ancestors_, [](long double a, long double b) { return a + b; });
    // Remaining sets during the draw are up-sets; record their counts by walking the same recursion.
    auto fill = [&](auto&& self, std::uint64_t remaining) -> void {
      if (counts_.contains(remaining)) return;
      if (counts_.size() >= kMaxDpStates) throw Error(ErrorCode::CapExceeded, "ordering sampler state cap exceeded");
      counts_.emplace(remaining, dp.count(remaining));
      for (std::uint64_t r = remaining; r != 0; r &= r - 1) {
        int x = std::countr_zero(r);
        if ((ancestors_[static_cast<std::size_t>(x)] & remaining) == 0) self(self, remaining & ~bit(x));
      }
    };
    fill(fill, constrained_);
  }
}

long double OrderingSampler::completions(std::uint64_t remaining) const {
  if (std::popcount(remaining) <= 1) return 1.0L;
  return counts_.at(remaining);
}

std::vector<int> OrderingSampler::operator()(std::mt19937_64& rng) const {
  std::vector<int> perm(static_cast<std::size_t>(q_));
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = q_ - 1; i > 0; --i) {
    std::uniform_int_distribution<int> pick(0, i);
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(pick(rng))]);
  }
  if (constrained_ == 0) return perm;

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uint64_t remaining = constrained_;
  for (auto& slot : perm) {
    if (((constrained_ >> slot) & 1U) == 0) continue;
    const long double total = completions(remaining);
    const long double target = static_cast<long double>(unit(rng)) * total;
    long double acc = 0;
    int chosen = -1;
    for (std::uint64_t r = remaining; r != 0; r &= r - 1) {
      int x = std::countr_zero(r);
      if ((ancestors_[static_cast<std::size_t>(x)] & remaining) != 0) continue;
      chosen = x;
      acc += completions(remaining & ~bit(x));
      if (target < acc) break;
    }
    slot = chosen;
    remaining &= ~bit(chosen);
  }
  return perm;
}

std::vector<int> sample_allowed_ordering(const PartialOrder& po, std::mt19937_64& rng) {
  return OrderingSampler(po)(rng);
}

}  // namespace asymshap
