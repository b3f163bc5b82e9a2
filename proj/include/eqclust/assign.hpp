#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eqclust/core.hpp"

namespace eqclust {

struct Arc {
  std::size_t tail;
  std::size_t head;
  std::int64_t capacity;
};

/// Directed network with integral capacities and nonnegative arc costs.
/// `Cost` is std::int64_t for exact objectives and double otherwise.
template <typename Cost>
class FlowNetwork {
 public:
  FlowNetwork(std::size_t nodes, std::size_t source, std::size_t target);

  std::size_t add_arc(std::size_t tail, std::size_t head, std::int64_t capacity, Cost cost);

  std::size_t node_count() const { return nodes_; }
  std::size_t source() const { return source_; }
  std::size_t target() const { return target_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const std::vector<Cost>& costs() const { return costs_; }

 private:
  std::size_t nodes_;
  std::size_t source_;
  std::size_t target_;
  std::vector<Arc> arcs_;
  std::vector<Cost> costs_;
};

template <typename Cost>
struct FlowResult {
  std::vector<std::int64_t> flow;  // per arc, in insertion order
  Cost total_cost{};
  std::int64_t volume = 0;
};

/// Integral flow of exactly `volume` units at minimum cost, by successive
/// shortest paths with node potentials. Among equal-length paths the one
/// reaching lower-index nodes first is preferred. Throws Infeasible if the
/// maximum flow is below `volume`.
template <typename Cost>
FlowResult<Cost> min_cost_flow(const FlowNetwork<Cost>& net, std::int64_t volume);

/// Conservation, capacity bounds and volume hold for `result` on `net`.
template <typename Cost>
bool is_feasible_flow(const FlowNetwork<Cost>& net, const FlowResult<Cost>& result);

extern template class FlowNetwork<std::int64_t>;
extern template class FlowNetwork<double>;

struct Assignment {
  Clustering clustering;
  /// Cost with respect to the supplied medians (not re-optimized).
  CostValue cost;
};

/// Equal k-clustering minimizing the total distance to the given medians.
/// Solved as a transportation problem: every point supplies one unit and
/// every median absorbs exactly s units.
Assignment assign_to_medians(const Instance& inst, std::span<const Median> medians);

/// Minimum of sum ||x - c_j||_p over allocations of the block members to
/// medians where every median receives at most `cap` points.
CostValue capacitated_assignment_cost(std::span<const std::vector<Point>> blocks, std::span<const Median> medians,
                                      std::size_t cap, NormIndex p);

}  // namespace eqclust
