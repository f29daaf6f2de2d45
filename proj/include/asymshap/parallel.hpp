#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace asymshap {

/// Worker count: `requested` if positive, else ASYMSHAP_THREADS, else 1.
int resolve_threads(int requested);

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is visited exactly once;
/// callers write results into per-index slots so the outcome does not depend on scheduling.
/// The first exception thrown by any worker is rethrown on the calling thread.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

/// SplitMix64 finalizer applied to a combination of two words; used to derive independent
/// per-task seed streams from one user seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace asymshap
