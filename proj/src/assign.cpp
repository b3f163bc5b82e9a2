#include "eqclust/assign.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace eqclust {

template <typename Cost>
FlowNetwork<Cost>::FlowNetwork(std::size_t nodes, std::size_t source, std::size_t target)
    : nodes_(nodes), source_(source), target_(target) {
  if (source >= nodes || target >= nodes) throw std::invalid_argument("source/target out of range");
  if (source == target) throw std::invalid_argument("source and target must differ");
}

template <typename Cost>
std::size_t FlowNetwork<Cost>::add_arc(std::size_t tail, std::size_t head, std::int64_t capacity, Cost cost) {
  if (tail >= nodes_ || head >= nodes_) throw std::invalid_argument("arc endpoint out of range");
  if (capacity < 0) throw std::invalid_argument("negative arc capacity");
  if (cost < Cost{0}) throw std::invalid_argument("negative arc cost");
  arcs_.push_back(Arc{tail, head, capacity});
  costs_.push_back(cost);
  return arcs_.size() - 1;
}

template class FlowNetwork<std::int64_t>;
template class FlowNetwork<double>;

namespace {

template <typename Cost>
struct Residual {
  struct Edge {
    std::size_t to;
    std::int64_t cap;
    Cost cost;
  };
  std::vector<Edge> edges;  // edge 2a is arc a, edge 2a+1 its reverse
  std::vector<std::vector<std::size_t>> out;

  explicit Residual(const FlowNetwork<Cost>& net) : out(net.node_count()) {
    edges.reserve(2 * net.arcs().size());
    for (std::size_t a = 0; a < net.arcs().size(); ++a) {
      const Arc& arc = net.arcs()[a];
      out[arc.tail].push_back(edges.size());
      edges.push_back(Edge{arc.head, arc.capacity, net.costs()[a]});
      out[arc.head].push_back(edges.size());
      edges.push_back(Edge{arc.tail, 0, -net.costs()[a]});
    }
  }
};

template <typename Cost>
constexpr Cost infinite_cost() {
  if constexpr (std::is_floating_point_v<Cost>) {
    return std::numeric_limits<Cost>::infinity();
  } else {
    return std::numeric_limits<Cost>::max() / 4;
  }
}

template <typename Cost>
bool strictly_less(Cost a, Cost b) {
  if constexpr (std::is_floating_point_v<Cost>) {
    if (std::isinf(b)) return a < b;
    return a < b - 1e-12 * std::max<Cost>(1, std::abs(b));
  } else {
    return a < b;
  }
}

}  // namespace

template <typename Cost>
FlowResult<Cost> min_cost_flow(const FlowNetwork<Cost>& net, std::int64_t volume) {
  if (volume < 0) throw std::invalid_argument("negative flow volume");
  Residual<Cost> g(net);
  const std::size_t n = net.node_count();
  const Cost inf = infinite_cost<Cost>();
  std::vector<Cost> potential(n, Cost{0});
  std::vector<Cost> dist(n);
  std::vector<std::size_t> via(n);
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  std::int64_t sent = 0;
  Cost total{0};
  using Entry = std::pair<Cost, std::size_t>;
  while (sent < volume) {
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(via.begin(), via.end(), kNone);
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[net.source()] = Cost{0};
    heap.emplace(Cost{0}, net.source());
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (du != dist[u]) continue;
      for (std::size_t e : g.out[u]) {
        const auto& edge = g.edges[e];
        if (edge.cap <= 0) continue;
        Cost reduced = edge.cost + potential[u] - potential[edge.to];
        if constexpr (std::is_floating_point_v<Cost>) reduced = std::max<Cost>(reduced, 0);
        const Cost cand = du + reduced;
        if (strictly_less(cand, dist[edge.to])) {
          dist[edge.to] = cand;
          via[edge.to] = e;
          heap.emplace(cand, edge.to);
        }
      }
    }
    if (via[net.target()] == kNone) {
      throw Infeasible("maximum flow " + std::to_string(sent) + " is below requested volume " +
                       std::to_string(volume));
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (dist[v] != inf) potential[v] += dist[v];
    }
    std::int64_t push = volume - sent;
    for (std::size_t v = net.target(); v != net.source(); v = g.edges[via[v] ^ 1].to) {
      push = std::min(push, g.edges[via[v]].cap);
    }
    for (std::size_t v = net.target(); v != net.source(); v = g.edges[via[v] ^ 1].to) {
      g.edges[via[v]].cap -= push;
      g.edges[via[v] ^ 1].cap += push;
      total += g.edges[via[v]].cost * static_cast<Cost>(push);
    }
    sent += push;
  }

  FlowResult<Cost> result;
  result.volume = sent;
  result.flow.resize(net.arcs().size());
  result.total_cost = Cost{0};
  for (std::size_t a = 0; a < net.arcs().size(); ++a) {
    result.flow[a] = g.edges[2 * a + 1].cap;
    result.total_cost += net.costs()[a] * static_cast<Cost>(result.flow[a]);
  }
  return result;
}

template <typename Cost>
bool is_feasible_flow(const FlowNetwork<Cost>& net, const FlowResult<Cost>& result) {
  if (result.flow.size() != net.arcs().size()) return false;
  std::vector<std::int64_t> balance(net.node_count(), 0);
  for (std::size_t a = 0; a < net.arcs().size(); ++a) {
    const Arc& arc = net.arcs()[a];
    if (result.flow[a] < 0 || result.flow[a] > arc.capacity) return false;
    balance[arc.tail] -= result.flow[a];
    balance[arc.head] += result.flow[a];
  }
  for (std::size_t v = 0; v < net.node_count(); ++v) {
    if (v == net.source() || v == net.target()) continue;
    if (balance[v] != 0) return false;
  }
  return balance[net.source()] == -result.volume && balance[net.target()] == result.volume;
}

template FlowResult<std::int64_t> min_cost_flow(const FlowNetwork<std::int64_t>&, std::int64_t);
template FlowResult<double> min_cost_flow(const FlowNetwork<double>&, std::int64_t);
template bool is_feasible_flow(const FlowNetwork<std::int64_t>&, const FlowResult<std::int64_t>&);
template bool is_feasible_flow(const FlowNetwork<double>&, const FlowResult<double>&);

namespace {

void check_medians(std::span<const Median> medians, std::size_t dim) {
  for (const Median& m : medians) {
    if (m.coords.size() != dim) throw DimensionMismatch("median dimension does not match the points");
  }
}

bool exact_medians(std::span<const Median> medians, NormIndex p) {
  if (p > 1) return false;
  return std::all_of(medians.begin(), medians.end(), [](const Median& m) { return m.integral().has_value(); });
}

// Nodes: 0 = source, 1..n = points, n+1..n+k = medians, n+k+1 = target.
template <typename Cost>
Assignment assign_with(const Instance& inst, std::span<const Median> medians) {
  const std::size_t n = inst.size();
  const std::size_t k = medians.size();
  const std::size_t s = inst.cluster_size();
  FlowNetwork<Cost> net(n + k + 2, 0, n + k + 1);
  for (std::size_t i = 0; i < n; ++i) net.add_arc(0, 1 + i, 1, Cost{0});
  std::vector<std::size_t> first_choice(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const CostValue d = lp_distance(medians[j], inst.points[i], inst.p);
      Cost c;
      if constexpr (std::is_floating_point_v<Cost>) {
        c = d.real;
      } else {
        c = *d.exact;
      }
      const std::size_t a = net.add_arc(1 + i, 1 + n + j, 1, c);
      if (j == 0) first_choice[i] = a;
    }
  }
  for (std::size_t j = 0; j < k; ++j) net.add_arc(1 + n + j, n + k + 1, static_cast<std::int64_t>(s), Cost{0});

  const auto flow = min_cost_flow(net, static_cast<std::int64_t>(n));
  Assignment out;
  out.clustering.k = k;
  out.clustering.assignment.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (flow.flow[first_choice[i] + j] == 1) out.clustering.assignment[i] = j;
    }
  }
  if constexpr (std::is_floating_point_v<Cost>) {
    out.cost = CostValue::approximate(flow.total_cost);
  } else {
    out.cost = CostValue::integer(flow.total_cost);
  }
  return out;
}

}  // namespace

Assignment assign_to_medians(const Instance& inst, std::span<const Median> medians) {
  if (medians.size() != inst.k) {
    throw std::invalid_argument("expected " + std::to_string(inst.k) + " medians, got " +
                                std::to_string(medians.size()));
  }
  check_medians(medians, inst.dim);
  if (inst.empty()) return Assignment{Clustering{inst.k, {}}, CostValue::integer(0)};
  if (exact_medians(medians, inst.p)) return assign_with<std::int64_t>(inst, medians);
  return assign_with<double>(inst, medians);
}

CostValue capacitated_assignment_cost(std::span<const std::vector<Point>> blocks, std::span<const Median> medians,
                                      std::size_t cap, NormIndex p) {
  const std::size_t t = blocks.size();
  const std::size_t k = medians.size();
  std::int64_t volume = 0;
  for (const auto& block : blocks) {
    if (block.empty()) continue;
    if (block.size() > cap) throw std::invalid_argument("block larger than the cluster capacity");
    for (const Point& x : block) {
      if (!x.same_value(block.front())) throw std::invalid_argument("block members are not identical");
    }
    check_medians(medians, block.front().dimension());
    volume += static_cast<std::int64_t>(block.size());
  }

  auto solve = [&]<typename Cost>(Cost) -> CostValue {
    // 0 = source, 1..t = blocks, t+1..t+k = medians, t+k+1 = target
    FlowNetwork<Cost> net(t + k + 2, 0, t + k + 1);
    for (std::size_t h = 0; h < t; ++h) {
      net.add_arc(0, 1 + h, static_cast<std::int64_t>(blocks[h].size()), Cost{0});
      if (blocks[h].empty()) continue;
      for (std::size_t j = 0; j < k; ++j) {
        const CostValue d = lp_distance(medians[j], blocks[h].front(), p);
        Cost c;
        if constexpr (std::is_floating_point_v<Cost>) {
          c = d.real;
        } else {
          c = *d.exact;
        }
        net.add_arc(1 + h, 1 + t + j, static_cast<std::int64_t>(cap), c);
      }
    }
    for (std::size_t j = 0; j < k; ++j) net.add_arc(1 + t + j, t + k + 1, static_cast<std::int64_t>(cap), Cost{0});
    const auto flow = min_cost_flow(net, volume);
    if constexpr (std::is_floating_point_v<Cost>) {
      return CostValue::approximate(flow.total_cost);
    } else {
      return CostValue::integer(flow.total_cost);
    }
  };
  if (exact_medians(medians, p)) return solve(std::int64_t{0});
  return solve(0.0);
}

}  // namespace eqclust
