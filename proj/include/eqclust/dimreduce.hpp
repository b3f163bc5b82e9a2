#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include "eqclust/core.hpp"

namespace eqclust {

/// How selected coordinates are re-encoded inside a part.
enum class CoordinateEncoding {
  /// Subtract the per-part minimum (p >= 1).
  Shift,
  /// Replace each value by its rank among the part's distinct values of that
  /// coordinate. Hamming costs only see equality, so this is exact for p = 0.
  Rank,
};

struct ReducePart {
  std::vector<std::size_t> members;   // positions, ascending
  std::vector<std::size_t> selected;  // kept coordinate indices, ascending
  std::vector<Coord> shift;           // per selected coordinate; Shift encoding only

  friend bool operator==(const ReducePart&, const ReducePart&) = default;
};

/// Index-preserving description of a dimension reduction: output point i is
/// the image of input point i.
struct ReduceMap {
  std::vector<ReducePart> parts;  // numbered in seed order
  std::vector<std::size_t> part_of;
  std::size_t width = 0;             // number of kept coordinates
  std::size_t sentinel_columns = 1;  // B + 1 columns for p = 0, else 1
  std::int64_t sentinel_step = 1;    // B + 1
  CoordinateEncoding encoding = CoordinateEncoding::Shift;

  std::size_t output_dim() const { return width + sentinel_columns; }

  friend bool operator==(const ReduceMap&, const ReduceMap&) = default;
};

struct Reduction {
  Instance reduced;
  ReduceMap map;
};

using ReduceOutcome = std::variant<NoBudget, Reduction>;

/// Closure of "within distance B" seeded from the lowest unassigned
/// position. Points in different parts are more than B apart.
std::vector<std::vector<std::size_t>> greedy_partition(const Instance& inst);

/// Compresses dimension and coordinate magnitudes while keeping the cost of
/// every equal clustering of cost <= B exact (and every other one > B).
/// Returns NoBudget when there are more than k parts or some part has more
/// than k(2B+1) distinct points.
ReduceOutcome reduce_dimension(const Instance& inst);

/// Nonuniform-coordinate growth per greedy step: B for p <= 1, B^p otherwise.
std::int64_t coordinate_spread(NormIndex p, std::int64_t budget);

/// k * beta(p, B) * (2B + 1) + 1.
std::int64_t reduced_dimension_bound(std::size_t k, NormIndex p, std::int64_t budget);

/// max(B(k(2B+1) - 1), (k - 1)(B + 1)).
std::int64_t reduced_magnitude_bound(std::size_t k, std::int64_t budget);

}  // namespace eqclust
