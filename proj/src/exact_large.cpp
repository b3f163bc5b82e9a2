#include "eqclust/exact_large.hpp"

#include <string>

#include "eqclust/assign.hpp"

namespace eqclust {

LargeOutcome solve_large(const Instance& inst) {
  inst.validate();
  if (!inst.large_regime()) {
    throw PreconditionViolation("solve_large needs n/k >= 4B+1 (s = " + std::to_string(inst.cluster_size()) +
                                ", B = " + std::to_string(inst.budget) + ")");
  }

  const BlockExtraction ext = extract_full_blocks(inst);
  std::vector<std::vector<std::size_t>> clusters = ext.blocks;
  CostValue cost = CostValue::integer(0);

  if (!ext.remainder.empty()) {
    const Instance& rest = ext.remainder;
    std::vector<Median> medians;
    for (const auto& group : group_identical(rest)) {
      if (static_cast<std::int64_t>(group.size()) >= rest.budget + 1) {
        medians.push_back(Median::from_point(rest.points[group.front()]));
      }
    }
    if (medians.size() != rest.k) return NoBudget{};

    const Assignment assigned = assign_to_medians(rest, medians);
    if (!assigned.cost.within(rest.budget)) return NoBudget{};
    for (const auto& part : assigned.clustering.members()) {
      std::vector<std::size_t> original;
      original.reserve(part.size());
      for (std::size_t pos : part) original.push_back(ext.remainder_positions[pos]);
      clusters.push_back(std::move(original));
    }
    cost = assigned.cost;
  }

  return Solution{Clustering::from_members(inst.size(), clusters), cost};
}

}  // namespace eqclust
