#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "eqclust/core.hpp"
#include "eqclust/dimreduce.hpp"

namespace eqclust {

enum class KernelBranch {
  LargeYes,          // s >= 4B+1 and solvable within B; optimum stashed
  LargeNo,           // s >= 4B+1 and Opt > B
  DimreduceNo,       // a dimension reduction certified Opt > B
  EmptyAfterGreedy,  // every point sits in a full identical block
  Generic,           // real kernel emitted
  KPrimeTooBig,      // more than 2B clusters survive block removal
};

std::string_view to_string(KernelBranch branch);
std::optional<KernelBranch> parse_branch(std::string_view text);

/// Everything needed to turn a kernel clustering into a clustering of the
/// original instance. Immutable once built.
struct LiftContext {
  KernelBranch branch = KernelBranch::Generic;

  std::size_t original_n = 0;
  std::size_t original_k = 0;
  NormIndex p = 1;
  std::int64_t budget = 0;

  /// Removed identical blocks, as original positions.
  std::vector<std::vector<std::size_t>> blocks;
  /// kernel position -> original position (Generic branch).
  std::vector<std::size_t> kernel_positions;
  std::optional<ReduceMap> first_map;
  std::optional<ReduceMap> second_map;
  std::optional<Clustering> stashed;

  friend bool operator==(const LiftContext&, const LiftContext&) = default;
};

struct LossyKernel {
  Instance kernel;
  LiftContext context;
};

/// Constant-size instance with Opt > B: {(0), (1)}, k = 1, B = 0.
Instance trivial_no_instance(NormIndex p);
/// Constant-size instance with Opt = 0: {(0)}, k = 1, B = 0.
Instance trivial_yes_instance(NormIndex p);

/// Reduction half of the 2-approximate lossy kernel.
///
/// Large regime: solved exactly and replaced by a trivial instance. Otherwise
/// the instance is dimension-reduced, full identical blocks are removed
/// (k' = k - t), and the survivor is reduced again with budget B' = 2B.
/// More than 2B surviving clusters certify Opt > B.
LossyKernel lossy_kernelize(const Instance& inst);

/// Solution-lifting half. If the kernel clustering is c-approximate for the
/// kernel, the lifted clustering is 2c-approximate for cost truncated at B.
Clustering lift_solution(const LiftContext& ctx, const Clustering& kernel_clustering);

/// Polynomial kernel for the decision problem parameterized by k + B:
/// Opt(X, k) <= B iff Opt(kernel) <= kernel budget.
Instance exact_kernelize(const Instance& inst);

/// Sorted positions chunked into k groups of s.
Clustering chunked_clustering(std::size_t n, std::size_t k);

void write_lift_context(std::ostream& out, const LiftContext& ctx);
LiftContext read_lift_context(std::istream& in);

}  // namespace eqclust
