#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqclust/errors.hpp"

namespace eqclust {

using Coord = std::int64_t;
using PointId = std::size_t;

/// Index of the l_p norm. Zero selects the Hamming norm (number of
/// differing coordinates).
using NormIndex = unsigned;

/// An integer point. Identity is carried by `id`, so two points with equal
/// coordinates are still distinct members of an instance.
struct Point {
  std::vector<Coord> coords;
  PointId id = 0;

  std::size_t dimension() const { return coords.size(); }
  bool same_value(const Point& other) const { return coords == other.coords; }
};

/// A multiset of points together with the norm, the cluster count and the
/// cost budget.
///
/// Point ids are unique and increase with position. Clusterings refer to
/// points by position, which coincides with the id for instances read from
/// disk or built with `from_rows`. The empty instance with k = 0 is valid and
/// appears as the remainder of block extraction.
struct Instance {
  std::size_t dim = 1;
  std::vector<Point> points;
  NormIndex p = 1;
  std::size_t k = 1;
  std::int64_t budget = 0;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  /// s = n / k, or 0 for the empty instance.
  std::size_t cluster_size() const;

  /// s >= 4B + 1: every cheap clustering has medians at heavy data points.
  bool large_regime() const;

  /// Throws InvalidInstance when a structural invariant is broken.
  void validate() const;

  /// Builds a validated instance with ids 0..n-1.
  static Instance from_rows(std::vector<std::vector<Coord>> rows, NormIndex p, std::size_t k,
                            std::int64_t budget);

  /// Sub-instance holding the points at `positions` (ids kept) with `k` clusters.
  Instance subset(std::span<const std::size_t> positions, std::size_t new_k) const;
};

/// A cost that is exact whenever the norm and medians allow it.
struct CostValue {
  std::optional<std::int64_t> exact;
  double real = 0.0;

  static CostValue integer(std::int64_t v) { return CostValue{v, static_cast<double>(v)}; }
  static CostValue approximate(double v) { return CostValue{std::nullopt, v}; }

  bool is_exact() const { return exact.has_value(); }

  /// cost <= budget; exact comparison when possible, 1e-9 slack otherwise.
  bool within(std::int64_t budget) const;

  CostValue& operator+=(const CostValue& other);
  friend CostValue operator+(CostValue a, const CostValue& b) { return a += b; }
  friend bool operator<(const CostValue& a, const CostValue& b);
  friend bool operator==(const CostValue& a, const CostValue& b);

  std::string to_string() const;
};

enum class MedianSource { DataPoint, CoordinatewiseExact, IterativeApproximate };

struct Median {
  std::vector<double> coords;
  MedianSource source = MedianSource::CoordinatewiseExact;

  static Median from_point(const Point& x);

  /// Integer coordinates when every coordinate is integral.
  std::optional<std::vector<Coord>> integral() const;
};

struct MedianFit {
  Median median;
  CostValue cost;
};

/// A (possibly partial) view of some instance points.
using PointRefs = std::vector<const Point*>;

PointRefs refs_of(std::span<const Point> points);
PointRefs refs_of(const Instance& inst, std::span<const std::size_t> positions);

CostValue lp_distance(std::span<const Coord> x, std::span<const Coord> y, NormIndex p);
CostValue lp_distance(const Point& x, const Point& y, NormIndex p);

/// Distance from a real-valued center to an integer point.
CostValue lp_distance(const Median& c, const Point& x, NormIndex p);

/// ||x - y||_p <= budget, decided in integer arithmetic (p-th powers for p >= 2).
bool distance_leq_budget(const Point& x, const Point& y, NormIndex p, std::int64_t budget);

CostValue cluster_cost(const PointRefs& points, const Median& center, NormIndex p);
CostValue cluster_cost(std::span<const Point> points, const Median& center, NormIndex p);

/// Optimum median of a nonempty multiset.
///
/// p = 0 takes the per-coordinate mode (smallest value on ties), p = 1 the
/// per-coordinate lower median. For p >= 2 an iteratively reweighted
/// Fermat-Weber iteration is run (relative tolerance 1e-9, at most 10000
/// steps) and compared against every data point.
MedianFit optimum_median(const PointRefs& points, NormIndex p);
MedianFit optimum_median(std::span<const Point> points, NormIndex p);

/// Assignment of instance positions to clusters 0..k-1.
struct Clustering {
  std::size_t k = 0;
  std::vector<std::size_t> assignment;

  std::size_t size() const { return assignment.size(); }
  std::vector<std::vector<std::size_t>> members() const;
  bool is_equal() const;

  /// Throws InvalidClustering if the clustering does not cover `inst`, uses
  /// a cluster index out of range, or (when `require_equal`) has unequal sizes.
  void validate_for(const Instance& inst, bool require_equal = true) const;

  static Clustering from_members(std::size_t n, const std::vector<std::vector<std::size_t>>& parts);

  friend bool operator==(const Clustering&, const Clustering&) = default;
};

/// Sum over clusters of the cost at each cluster's optimum median.
CostValue clustering_cost(const Instance& inst, const Clustering& c);

/// cost if cost <= B, else B + 1.
CostValue truncate(const CostValue& cost, std::int64_t budget);
CostValue truncated_cost(const Instance& inst, const Clustering& c);

/// Result of exhaustively removing blocks of s identical points.
struct BlockExtraction {
  /// Positions (in the input) of each removed block.
  std::vector<std::vector<std::size_t>> blocks;
  /// Input minus the blocks, k reduced by the block count; ids preserved.
  Instance remainder;
  /// remainder position -> input position.
  std::vector<std::size_t> remainder_positions;
};

BlockExtraction extract_full_blocks(const Instance& inst);

/// Certifies Opt(X, k) > B.
struct NoBudget {
  friend bool operator==(NoBudget, NoBudget) = default;
};

struct Solution {
  Clustering clustering;
  CostValue cost;
};

/// Groups positions by coordinate value, in order of first occurrence.
std::vector<std::vector<std::size_t>> group_identical(const Instance& inst);

}  // namespace eqclust
