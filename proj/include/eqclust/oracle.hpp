#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "eqclust/core.hpp"
#include "eqclust/kernel.hpp"

namespace eqclust {

/// Enumeration limit for exhaustive searches.
inline constexpr std::uint64_t kPartitionGuard = 10'000'000;

/// n! / ((s!)^k k!), saturating at UINT64_MAX.
std::uint64_t count_equal_partitions(std::size_t n, std::size_t k);

/// Calls `visit` once per unordered equal partition of {0..n-1} into k parts.
/// Parts are numbered by their smallest element, which is always the smallest
/// element not yet placed. Throws GuardExceeded above `guard` partitions.
/// Returning false from `visit` stops the enumeration.
void for_each_equal_partition(std::size_t n, std::size_t k, const std::function<bool(const Clustering&)>& visit,
                              std::uint64_t guard = kPartitionGuard);

/// Global optimum by exhaustive search (exact for p in {0, 1}).
Solution brute_force_opt(const Instance& inst, std::uint64_t guard = kPartitionGuard);

/// min over equal clusterings of the total distance to fixed medians, by
/// trying every partition and every matching of parts to medians.
CostValue exhaustive_assignment_cost(const Instance& inst, std::span<const Median> medians);

struct Report {
  bool ok = true;
  std::vector<std::string> violations;

  void fail(std::string what) {
    ok = false;
    violations.push_back(std::move(what));
  }
};

struct RatioReport : Report {
  std::string branch;
  CostValue opt_truncated;
  CostValue lifted_truncated;
  /// lifted / opt over truncated costs; 1 when Opt = 0.
  double ratio = 1.0;
};

/// Lossy kernel, oracle-optimal kernel solution, lifting, and comparison of
/// truncated costs against the brute-force optimum: Opt_B <= lifted <= 2 Opt_B.
RatioReport check_lossy_ratio(const Instance& inst);

/// Structural facts about a clustering (normally an optimal one):
///  - if its cost is <= B, every cluster holds >= s - 2B identical points;
///  - in the large regime with cost <= B, every cluster has a data point
///    repeated >= B + 1 times as an optimum median;
///  - forcing any full identical block into one cluster by exchange raises
///    the cost (w.r.t. the old medians) by at most s times the median shift.
Report check_structure(const Instance& inst, const Clustering& clustering);

/// Generic-branch size limits: s k' <= 8B^2, k' <= 2B, and the dimension and
/// magnitude bounds of a reduction with k' clusters and budget 2B.
/// Other branches must emit one of the two trivial instances.
Report check_kernel_size(const Instance& inst, const LossyKernel& kernel);

/// Opt(Y, k - t) <= 2 Opt(X, k), where Y is X minus the full identical blocks.
Report check_block_removal_bound(const Instance& inst);

/// Every oracle check that applies to `inst`: exact-solver agreement in the
/// large regime, structure of an optimal clustering, block-removal bound,
/// lossy ratio and kernel size, exact-kernel equivalence, and (for n <= 8)
/// flow assignment against exhaustive assignment.
Report verify_instance(const Instance& inst);

/// Exchange step: makes `block` (s identical positions) the whole of cluster
/// `target`, swapping displaced members into the clusters the block left.
Clustering exchange_block(const Clustering& c, const std::vector<std::size_t>& block, std::size_t target);

}  // namespace eqclust
