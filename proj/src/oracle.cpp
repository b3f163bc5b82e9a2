#include "eqclust/oracle.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "eqclust/assign.hpp"
#include "eqclust/dimreduce.hpp"
#include "eqclust/exact_large.hpp"

namespace eqclust {

namespace {

CostValue times(CostValue c, std::int64_t factor) {
  if (c.exact) *c.exact *= factor;
  c.real *= static_cast<double>(factor);
  return c;
}

bool leq(const CostValue& a, const CostValue& b) { return !(b < a); }

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    // out * (n - r + i) / i stays integral at every step
    const std::uint64_t num = n - r + i;
    const std::uint64_t g = std::gcd(out, i);
    const std::uint64_t a = out / g;
    const std::uint64_t b = num / (i / g);
    out = sat_mul(a, b);
    if (out == std::numeric_limits<std::uint64_t>::max()) return out;
  }
  return out;
}

void check_guard(std::size_t n, std::size_t k, std::uint64_t guard) {
  if (k == 0 || n % k != 0) throw InvalidInstance("equal partitions need k | n");
  const std::uint64_t count = count_equal_partitions(n, k);
  if (count > guard) {
    throw GuardExceeded("equal partition count " +
                        (count == std::numeric_limits<std::uint64_t>::max() ? std::string("overflows")
                                                                            : std::to_string(count)) +
                        " exceeds the guard " + std::to_string(guard));
  }
}

// Recursive canonical enumeration. `part` is the index of the part being
// filled; each part opens with the smallest free element.
class Enumerator {
 public:
  Enumerator(std::size_t n, std::size_t k, const std::function<bool(const Clustering&)>& visit)
      : n_(n), s_(n / k), visit_(visit), used_(n, false) {
    current_.k = k;
    current_.assignment.assign(n, 0);
  }

  void run() { open_part(0); }

 private:
  bool open_part(std::size_t part) {
    const auto first = std::find(used_.begin(), used_.end(), false);
    if (first == used_.end()) return visit_(current_);
    const auto lead = static_cast<std::size_t>(first - used_.begin());
    used_[lead] = true;
    current_.assignment[lead] = part;
    const bool more = extend(part, lead + 1, s_ - 1);
    used_[lead] = false;
    return more;
  }

  bool extend(std::size_t part, std::size_t from, std::size_t missing) {
    if (missing == 0) return open_part(part + 1);
    for (std::size_t v = from; v < n_; ++v) {
      if (used_[v]) continue;
      used_[v] = true;
      current_.assignment[v] = part;
      const bool more = extend(part, v + 1, missing - 1);
      used_[v] = false;
      if (!more) return false;
    }
    return true;
  }

  std::size_t n_;
  std::size_t s_;
  const std::function<bool(const Clustering&)>& visit_;
  std::vector<bool> used_;
  Clustering current_;
};

// Exhaustive search with a per-subset cost memo and branch-and-bound on the
// partial cost.
class BruteForce {
 public:
  explicit BruteForce(const Instance& inst) : inst_(inst), s_(inst.cluster_size()), used_(inst.size(), false) {
    current_.k = inst.k;
    current_.assignment.assign(inst.size(), 0);
  }

  Solution run() {
    members_.reserve(s_);
    open_part(0, CostValue::integer(0));
    return Solution{best_, *best_cost_};
  }

 private:
  CostValue part_cost() {
    std::uint64_t mask = 0;
    for (std::size_t pos : members_) mask |= std::uint64_t{1} << pos;
    if (auto it = memo_.find(mask); it != memo_.end()) return it->second;
    const CostValue c = optimum_median(refs_of(inst_, members_), inst_.p).cost;
    memo_.emplace(mask, c);
    return c;
  }

  bool pruned(const CostValue& partial) const { return best_cost_ && !(partial < *best_cost_); }

  void open_part(std::size_t part, const CostValue& partial) {
    const auto first = std::find(used_.begin(), used_.end(), false);
    if (first == used_.end()) {
      if (!best_cost_ || partial < *best_cost_) {
        best_cost_ = partial;
        best_ = current_;
      }
      return;
    }
    const auto lead = static_cast<std::size_t>(first - used_.begin());
    used_[lead] = true;
    current_.assignment[lead] = part;
    members_.push_back(lead);
    extend(part, lead + 1, s_ - 1, partial);
    members_.pop_back();
    used_[lead] = false;
  }

  void extend(std::size_t part, std::size_t from, std::size_t missing, const CostValue& partial) {
    if (missing == 0) {
      const CostValue next = partial + part_cost();
      if (pruned(next)) return;
      std::vector<std::size_t> finished;
      finished.swap(members_);
      open_part(part + 1, next);
      members_.swap(finished);
      return;
    }
    for (std::size_t v = from; v < inst_.size(); ++v) {
      if (used_[v]) continue;
      used_[v] = true;
      current_.assignment[v] = part;
      members_.push_back(v);
      extend(part, v + 1, missing - 1, partial);
      members_.pop_back();
      used_[v] = false;
    }
  }

  const Instance& inst_;
  std::size_t s_;
  std::vector<bool> used_;
  std::vector<std::size_t> members_;
  Clustering current_;
  Clustering best_;
  std::optional<CostValue> best_cost_;
  std::unordered_map<std::uint64_t, CostValue> memo_;
};

CostValue cost_with_medians(const Instance& inst, const Clustering& c, std::span<const Median> medians) {
  CostValue total = CostValue::integer(0);
  const auto parts = c.members();
  for (std::size_t j = 0; j < parts.size(); ++j) {
    if (!parts[j].empty()) total += cluster_cost(refs_of(inst, parts[j]), medians[j], inst.p);
  }
  return total;
}

}  // namespace

std::uint64_t count_equal_partitions(std::size_t n, std::size_t k) {
  if (k == 0) return n == 0 ? 1 : 0;
  if (n % k != 0) return 0;
  const std::size_t s = n / k;
  // prod_{j=0}^{k-1} C(n - j s - 1, s - 1): the lead of each part is forced.
  std::uint64_t out = 1;
  for (std::size_t j = 0; j < k; ++j) out = sat_mul(out, binomial(n - j * s - 1, s - 1));
  return out;
}

void for_each_equal_partition(std::size_t n, std::size_t k, const std::function<bool(const Clustering&)>& visit,
                              std::uint64_t guard) {
  check_guard(n, k, guard);
  Enumerator(n, k, visit).run();
}

Solution brute_force_opt(const Instance& inst, std::uint64_t guard) {
  inst.validate();
  if (inst.empty()) return Solution{Clustering{inst.k, {}}, CostValue::integer(0)};
  if (inst.size() > 64) throw GuardExceeded("brute force is limited to 64 points");
  check_guard(inst.size(), inst.k, guard);
  return BruteForce(inst).run();
}

CostValue exhaustive_assignment_cost(const Instance& inst, std::span<const Median> medians) {
  inst.validate();
  if (medians.size() != inst.k) throw InvalidInstance("need exactly k medians");
  std::optional<CostValue> best;
  std::vector<std::size_t> order(inst.k);
  for_each_equal_partition(inst.size(), inst.k, [&](const Clustering& c) {
    const auto parts = c.members();
    std::vector<std::vector<CostValue>> table(inst.k);
    for (std::size_t a = 0; a < inst.k; ++a) {
      for (std::size_t b = 0; b < inst.k; ++b) {
        table[a].push_back(cluster_cost(refs_of(inst, parts[a]), medians[b], inst.p));
      }
    }
    std::iota(order.begin(), order.end(), 0);
    do {
      CostValue total = CostValue::integer(0);
      for (std::size_t a = 0; a < inst.k; ++a) total += table[a][order[a]];
      if (!best || total < *best) best = total;
    } while (std::next_permutation(order.begin(), order.end()));
    return true;
  });
  return best.value_or(CostValue::integer(0));
}

RatioReport check_lossy_ratio(const Instance& inst) {
  RatioReport report;
  const Solution opt = brute_force_opt(inst);
  report.opt_truncated = truncate(opt.cost, inst.budget);

  const LossyKernel lk = lossy_kernelize(inst);
  report.branch = std::string(to_string(lk.context.branch));
  const Solution kernel_opt = brute_force_opt(lk.kernel);
  const Clustering lifted = lift_solution(lk.context, kernel_opt.clustering);
  try {
    lifted.validate_for(inst);
  } catch (const InvalidClustering& e) {
    report.fail(std::string("lifted clustering invalid: ") + e.what());
    return report;
  }
  report.lifted_truncated = truncated_cost(inst, lifted);

  if (report.opt_truncated.real > 0) report.ratio = report.lifted_truncated.real / report.opt_truncated.real;
  else report.ratio = report.lifted_truncated.real > 0 ? std::numeric_limits<double>::infinity() : 1.0;

  if (report.lifted_truncated < report.opt_truncated) {
    report.fail("lifted cost " + report.lifted_truncated.to_string() + " below optimum " +
                report.opt_truncated.to_string());
  }
  if (!leq(report.lifted_truncated, times(report.opt_truncated, 2))) {
    report.fail("lifted cost " + report.lifted_truncated.to_string() + " exceeds twice the optimum " +
                report.opt_truncated.to_string() + " (branch " + report.branch + ")");
  }
  return report;
}

Clustering exchange_block(const Clustering& c, const std::vector<std::size_t>& block, std::size_t target) {
  Clustering out = c;
  std::vector<bool> in_block(c.size(), false);
  for (std::size_t pos : block) in_block[pos] = true;

  std::vector<std::size_t> incoming;  // block members outside the target
  for (std::size_t pos : block) {
    if (c.assignment[pos] != target) incoming.push_back(pos);
  }
  std::vector<std::size_t> outgoing;  // target members outside the block
  for (std::size_t pos = 0; pos < c.size(); ++pos) {
    if (c.assignment[pos] == target && !in_block[pos]) outgoing.push_back(pos);
  }
  if (outgoing.size() != incoming.size()) {
    throw InvalidClustering("exchange needs a block as large as the target cluster");
  }
  for (std::size_t h = 0; h < incoming.size(); ++h) {
    out.assignment[outgoing[h]] = c.assignment[incoming[h]];
    out.assignment[incoming[h]] = target;
  }
  return out;
}

Report check_structure(const Instance& inst, const Clustering& clustering) {
  Report report;
  clustering.validate_for(inst);
  const auto s = static_cast<std::int64_t>(inst.cluster_size());
  const std::int64_t B = inst.budget;
  const auto parts = clustering.members();

  std::vector<Median> medians;
  CostValue total = CostValue::integer(0);
  for (const auto& part : parts) {
    MedianFit fit = optimum_median(refs_of(inst, part), inst.p);
    total += fit.cost;
    medians.push_back(std::move(fit.median));
  }
  const bool cheap = total.within(B);

  auto heaviest = [&](const std::vector<std::size_t>& part) {
    std::map<std::vector<Coord>, std::int64_t> count;
    std::pair<std::int64_t, std::vector<Coord>> best{0, {}};
    for (std::size_t pos : part) {
      const std::int64_t c = ++count[inst.points[pos].coords];
      if (c > best.first) best = {c, inst.points[pos].coords};
    }
    return best;
  };

  if (cheap) {
    for (std::size_t j = 0; j < parts.size(); ++j) {
      const auto [mult, value] = heaviest(parts[j]);
      if (mult < s - 2 * B) {
        report.fail("cluster " + std::to_string(j) + " has only " + std::to_string(mult) +
                    " identical points, need s - 2B = " + std::to_string(s - 2 * B));
      }
    }
  }

  if (cheap && inst.large_regime()) {
    for (std::size_t j = 0; j < parts.size(); ++j) {
      const auto [mult, value] = heaviest(parts[j]);
      const auto center = medians[j].integral();
      if (mult < s - 2 * B || !center || *center != value) {
        report.fail("cluster " + std::to_string(j) + " median is not its heavy data point");
      }
    }
    for (const auto& group : group_identical(inst)) {
      if (static_cast<std::int64_t>(group.size()) < B + 1) continue;
      const auto& value = inst.points[group.front()].coords;
      const bool hit = std::any_of(medians.begin(), medians.end(), [&](const Median& m) {
        const auto center = m.integral();
        return center && *center == value;
      });
      if (!hit) report.fail("a group of " + std::to_string(group.size()) + " identical points is nobody's median");
    }
  }

  const CostValue base = cost_with_medians(inst, clustering, medians);
  for (const auto& block : extract_full_blocks(inst).blocks) {
    const Point& x = inst.points[block.front()];
    for (std::size_t target = 0; target < inst.k; ++target) {
      const Clustering moved = exchange_block(clustering, block, target);
      std::vector<Median> shifted = medians;
      shifted[target] = Median::from_point(x);
      const CostValue after = cost_with_medians(inst, moved, shifted);
      const CostValue allowance = base + times(lp_distance(medians[target], x, inst.p), s);
      if (!leq(after, allowance)) {
        report.fail("exchange into cluster " + std::to_string(target) + " costs " + after.to_string() +
                    " > " + allowance.to_string());
      }
    }
  }
  return report;
}

Report check_kernel_size(const Instance& inst, const LossyKernel& kernel) {
  Report report;
  const Instance& out = kernel.kernel;
  if (kernel.context.branch != KernelBranch::Generic) {
    const bool no = kernel.context.branch == KernelBranch::LargeNo ||
                    kernel.context.branch == KernelBranch::DimreduceNo ||
                    kernel.context.branch == KernelBranch::KPrimeTooBig;
    const Instance expect = no ? trivial_no_instance(inst.p) : trivial_yes_instance(inst.p);
    if (out.size() != expect.size() || out.k != expect.k || out.budget != expect.budget) {
      report.fail("trivial branch emitted a nontrivial instance");
    }
    return report;
  }

  const std::int64_t B = inst.budget;
  const std::int64_t B2 = 2 * B;
  const auto kp = static_cast<std::int64_t>(out.k);
  const auto n = static_cast<std::int64_t>(out.size());
  if (n > 8 * B * B) report.fail("kernel has " + std::to_string(n) + " points > 8B^2");
  if (kp > B2) report.fail("kernel k' = " + std::to_string(kp) + " > 2B");
  if (out.budget != B2) report.fail("kernel budget is not 2B");
  const std::int64_t dim_cap = reduced_dimension_bound(out.k, inst.p, B2);
  if (static_cast<std::int64_t>(out.dim) > dim_cap) {
    report.fail("kernel dimension " + std::to_string(out.dim) + " > " + std::to_string(dim_cap));
  }
  const std::int64_t mag_cap = reduced_magnitude_bound(out.k, B2);
  Coord mag = 0;
  for (const Point& x : out.points) {
    for (Coord v : x.coords) mag = std::max(mag, v < 0 ? -v : v);
  }
  if (mag > mag_cap) report.fail("kernel coordinate " + std::to_string(mag) + " > " + std::to_string(mag_cap));
  return report;
}

Report check_block_removal_bound(const Instance& inst) {
  Report report;
  const CostValue opt = brute_force_opt(inst).cost;
  const auto blocks = extract_full_blocks(inst).blocks;
  // every prefix S_1..S_t of the removable blocks
  std::vector<bool> removed(inst.size(), false);
  for (std::size_t t = 1; t <= blocks.size(); ++t) {
    for (std::size_t pos : blocks[t - 1]) removed[pos] = true;
    std::vector<std::size_t> keep;
    for (std::size_t pos = 0; pos < inst.size(); ++pos) {
      if (!removed[pos]) keep.push_back(pos);
    }
    const Instance rest = inst.subset(keep, inst.k - t);
    const CostValue rest_opt = brute_force_opt(rest).cost;
    if (!leq(rest_opt, times(opt, 2))) {
      report.fail("Opt after removing " + std::to_string(t) + " blocks is " + rest_opt.to_string() +
                  " > 2 * " + opt.to_string());
    }
  }
  return report;
}

namespace {

void absorb(Report& into, const Report& from, const std::string& tag) {
  for (const auto& v : from.violations) into.fail(tag + ": " + v);
}

}  // namespace

Report verify_instance(const Instance& inst) {
  Report report;
  const Solution opt = brute_force_opt(inst);
  const bool yes = opt.cost.within(inst.budget);

  if (inst.large_regime()) {
    const LargeOutcome large = solve_large(inst);
    if (std::holds_alternative<NoBudget>(large)) {
      if (yes) report.fail("large: solver says no, optimum is " + opt.cost.to_string());
    } else {
      const Solution& sol = std::get<Solution>(large);
      const CostValue actual = clustering_cost(inst, sol.clustering);
      if (!yes) report.fail("large: solver says yes, optimum is " + opt.cost.to_string());
      else if (!(actual == opt.cost)) {
        report.fail("large: solver cost " + actual.to_string() + " vs optimum " + opt.cost.to_string());
      }
    }
  }

  absorb(report, check_structure(inst, opt.clustering), "structure");
  absorb(report, check_block_removal_bound(inst), "block removal");
  absorb(report, check_lossy_ratio(inst), "lossy ratio");
  absorb(report, check_kernel_size(inst, lossy_kernelize(inst)), "kernel size");

  const Instance exact = exact_kernelize(inst);
  const bool kernel_yes = brute_force_opt(exact).cost.within(exact.budget);
  if (kernel_yes != yes) {
    report.fail(std::string("exact kernel: original ") + (yes ? "yes" : "no") + ", kernel " +
                (kernel_yes ? "yes" : "no"));
  }

  if (inst.size() <= 8) {
    std::vector<Median> medians;
    for (const auto& part : opt.clustering.members()) {
      medians.push_back(optimum_median(refs_of(inst, part), inst.p).median);
    }
    std::vector<Median> data;
    for (std::size_t j = 0; j < inst.k; ++j) data.push_back(Median::from_point(inst.points[j]));
    for (const auto* set : {&medians, &data}) {
      const CostValue flow = assign_to_medians(inst, *set).cost;
      const CostValue exhaustive = exhaustive_assignment_cost(inst, *set);
      if (!(flow == exhaustive)) {
        report.fail("assignment: flow " + flow.to_string() + " vs exhaustive " + exhaustive.to_string());
      }
    }
  }
  return report;
}

}  // namespace eqclust
