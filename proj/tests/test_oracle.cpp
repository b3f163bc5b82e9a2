#include <doctest.h>

#include <set>

#include "eqclust/generators.hpp"
#include "eqclust/oracle.hpp"
#include "support.hpp"

using namespace eqclust;
using namespace testing_support;

namespace {

std::size_t enumerate(std::size_t n, std::size_t k) {
  std::set<std::vector<std::vector<std::size_t>>> seen;
  std::size_t visits = 0;
  for_each_equal_partition(n, k, [&](const Clustering& c) {
    ++visits;
    CHECK(c.is_equal());
    const auto parts = c.members();
    for (std::size_t j = 1; j < parts.size(); ++j) CHECK(parts[j - 1].front() < parts[j].front());
    seen.insert(parts);
    return true;
  });
  CHECK(seen.size() == visits);
  return visits;
}

}  // namespace

TEST_CASE("equal partition counts") {
  CHECK(count_equal_partitions(4, 2) == 3);
  CHECK(count_equal_partitions(6, 2) == 10);
  CHECK(count_equal_partitions(3, 3) == 1);
  CHECK(count_equal_partitions(12, 3) == 5775);
  CHECK(count_equal_partitions(12, 6) == 10395);
  CHECK(enumerate(4, 2) == 3);
  CHECK(enumerate(6, 2) == 10);
  CHECK(enumerate(3, 3) == 1);
  CHECK(enumerate(9, 3) == 280);
}

TEST_CASE("enumeration guard") {
  CHECK(count_equal_partitions(30, 2) == 77558760);
  CHECK_THROWS_AS(for_each_equal_partition(30, 2, [](const Clustering&) { return true; }), GuardExceeded);
  CHECK_THROWS_AS(brute_force_opt(line(repeat(0, 30), 1, 2, 0)), GuardExceeded);
  std::size_t visits = 0;
  for_each_equal_partition(6, 2, [&](const Clustering&) { return ++visits < 4; });
  CHECK(visits == 4);
}

TEST_CASE("brute force examples") {
  const Solution a = brute_force_opt(line({0, 1, 2, 9}, 1, 2, 0));
  CHECK(a.cost.exact == 8);
  CHECK(a.clustering.members() == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}});
  CHECK(brute_force_opt(line(repeat(5, 6), 1, 3, 0)).cost.exact == 0);
  CHECK(brute_force_opt(Instance::from_rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, 0, 2, 0)).cost.exact == 2);
}

TEST_CASE("brute force is a lower bound and deterministic") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance inst = gen_oracle_sized(seed, 10);
    const Solution opt = brute_force_opt(inst);
    CHECK(clustering_cost(inst, opt.clustering) == opt.cost);
    CHECK(brute_force_opt(inst).cost == opt.cost);
    CHECK_FALSE(clustering_cost(inst, chunked_clustering(inst.size(), inst.k)) < opt.cost);
    const LossyKernel lk = lossy_kernelize(inst);
    const Clustering lifted = lift_solution(lk.context, brute_force_opt(lk.kernel).clustering);
    CHECK_FALSE(clustering_cost(inst, lifted) < opt.cost);
  }
}

TEST_CASE("lossy ratio checker") {
  const RatioReport zero = check_lossy_ratio(line(repeat(1, 4), 1, 2, 1));
  CHECK(zero.ok);
  CHECK(zero.ratio == 1.0);
  int checked = 0;
  for (std::uint64_t seed = 50; checked < 100; ++seed, ++checked) {
    const RatioReport r = check_lossy_ratio(gen_oracle_sized(seed, 12));
    CHECK(r.ok);
    CHECK(r.ratio <= 2.0);
  }
}

TEST_CASE("exchange_block") {
  // clusters {0,2},{1,3}; block {0,1} of identical points moved into cluster 1
  const Clustering c{2, {0, 1, 0, 1}};
  const Clustering moved = exchange_block(c, {0, 1}, 1);
  CHECK(moved.assignment == std::vector<std::size_t>{1, 1, 0, 0});
  CHECK(exchange_block(c, {0, 2}, 0) == c);
}

TEST_CASE("structure checks on optima") {
  const Instance inst = line(concat({repeat(0, 5), repeat(5, 4), {6}}), 1, 2, 1);
  CHECK(check_structure(inst, brute_force_opt(inst).clustering).ok);
  int cheap = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance x = gen_oracle_sized(seed, 12);
    const Solution opt = brute_force_opt(x);
    const Report r = check_structure(x, opt.clustering);
    CHECK_MESSAGE(r.ok, "seed " << seed);
    cheap += opt.cost.within(x.budget);
    CHECK(check_block_removal_bound(x).ok);
  }
  CHECK(cheap > 50);
}

TEST_CASE("verify_instance on a batch") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Report r = verify_instance(gen_oracle_sized(seed, 9));
    CHECK_MESSAGE(r.ok, "seed " << seed << ": " << (r.violations.empty() ? "" : r.violations.front()));
  }
}
