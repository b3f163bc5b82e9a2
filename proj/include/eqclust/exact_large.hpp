#pragma once

#include <variant>

#include "eqclust/core.hpp"

namespace eqclust {

using LargeOutcome = std::variant<NoBudget, Solution>;

/// Exact solver for cluster sizes s >= 4B + 1.
///
/// Full blocks of s identical points become zero-cost clusters. Among the
/// rest, every group of at least B + 1 identical points must host a median;
/// if that does not produce exactly the remaining k medians, or the optimal
/// assignment to them costs more than B, the answer is NoBudget. Throws
/// PreconditionViolation when s < 4B + 1.
LargeOutcome solve_large(const Instance& inst);

}  // namespace eqclust
