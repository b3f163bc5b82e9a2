// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "eqclust/assign.hpp"
#include "eqclust/dimreduce.hpp"
#include "eqclust/exact_large.hpp"
#include "eqclust/generators.hpp"
#include "eqclust/kernel.hpp"
#include "eqclust/oracle.hpp"

using namespace eqclust;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string first_failure;

  void fail(const std::string& why) {
    if (pass) first_failure = why;
    pass = false;
  }
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o, double seconds) {
  std::printf("%s criterion %d: %s [%s; %.2fs]%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str(), seconds, o.pass ? "" : " first failure: ", o.first_failure.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::int64_t exact(const CostValue& c) { return c.exact.value(); }

std::int64_t truncated(std::int64_t cost, std::int64_t budget) { return cost <= budget ? cost : budget + 1; }

// Largest multiplicity of one value inside a cluster.
std::size_t heaviest(const Instance& inst, const std::vector<std::size_t>& part) {
  std::map<std::vector<Coord>, std::size_t> count;
  std::size_t best = 0;
  for (std::size_t pos : part) best = std::max(best, ++count[inst.points[pos].coords]);
  return best;
}

// ------------------------------------------------------------------ 1

void criterion_exact_solver() {
  const auto t0 = Clock::now();
  Outcome o;
  int total = 0, yes = 0, positive_budget = 0;
  for (std::uint64_t seed = 1; total < 150; ++seed) {
    const Instance inst = gen_oracle_sized(seed, 12);
    if (!inst.large_regime()) continue;
    ++total;
    positive_budget += inst.budget > 0;
    const std::int64_t opt = exact(brute_force_opt(inst).cost);
    const LargeOutcome out = solve_large(inst);
    const bool solver_yes = std::holds_alternative<Solution>(out);
    if (solver_yes != (opt <= inst.budget)) {
      o.fail("seed " + std::to_string(seed) + ": verdict differs (Opt " + std::to_string(opt) + ")");
      continue;
    }
    if (solver_yes) {
      ++yes;
      const Solution& sol = std::get<Solution>(out);
      const std::int64_t got = exact(clustering_cost(inst, sol.clustering));
      if (got != opt || exact(sol.cost) != opt) {
        o.fail("seed " + std::to_string(seed) + ": cost " + std::to_string(got) + " vs Opt " + std::to_string(opt));
      }
    }
  }
  const double secs = since(t0);
  if (secs >= 60) o.fail("took " + std::to_string(secs) + "s");
  o.detail = std::to_string(total) + " instances, " + std::to_string(yes) + " yes, " +
             std::to_string(positive_budget) + " with B > 0";
  report(1, "large-regime solver matches brute force", o, secs);
}

// ------------------------------------------------------------------ 2

void criterion_dimreduce() {
  const auto t0 = Clock::now();
  Outcome o;
  int total = 0;
  std::uint64_t partitions = 0, cheap = 0;
  int largest = 0;
  for (std::uint64_t seed = 1; total < 80; ++seed) {
    // n in 6..8 with clumped data, so the reduction usually succeeds on nontrivial inputs
    std::mt19937_64 rng(seed * 7919);
    PaletteSpec spec;
    spec.n = std::array<std::size_t, 3>{6, 8, 8}[seed % 3];
    spec.k = std::array<std::size_t, 2>{2, spec.n == 6 ? 3u : 4u}[(seed / 3) % 2];
    spec.d = 1 + rng() % 3;
    spec.palette = spec.k + rng() % 2;
    spec.range = 6;
    spec.jitter = 0.4;
    spec.p = static_cast<NormIndex>(rng() % 2);
    spec.budget = 1 + static_cast<std::int64_t>(rng() % 3);
    spec.seed = rng();
    const Instance inst = gen_palette(spec);
    const ReduceOutcome out = reduce_dimension(inst);
    if (std::holds_alternative<NoBudget>(out)) continue;
    ++total;
    largest = std::max(largest, static_cast<int>(inst.size()));
    const Instance& y = std::get<Reduction>(out).reduced;
    const std::int64_t B = inst.budget;
    for_each_equal_partition(inst.size(), inst.k, [&](const Clustering& c) {
      ++partitions;
      const std::int64_t cx = exact(clustering_cost(inst, c));
      const std::int64_t cy = exact(clustering_cost(y, c));
      if (cx <= B || cy <= B) {
        ++cheap;
        if (cx != cy) o.fail("seed " + std::to_string(seed) + ": " + std::to_string(cx) + " vs " + std::to_string(cy));
      }
      return true;
    });
  }
  o.detail = std::to_string(total) + " instances, " + std::to_string(partitions) + " partitions, " +
             std::to_string(cheap) + " within budget, largest n " + std::to_string(largest);
  report(2, "dimension reduction keeps every cheap cost exactly", o, since(t0));
}

// ------------------------------------------------------------------ 3 + 4

void criterion_lossy_kernel() {
  const auto t0 = Clock::now();
  Outcome ratio, size;
  int total = 0, generic = 0;
  std::map<std::string, int> branches;
  for (std::uint64_t seed = 1; total < 300; ++seed) {
    const Instance inst = gen_oracle_sized(seed * 104729, 12);
    const auto s = static_cast<std::int64_t>(inst.cluster_size());
    if (s > 4 * inst.budget) continue;
    ++total;
    const std::int64_t B = inst.budget;
    const std::int64_t opt_b = truncated(exact(brute_force_opt(inst).cost), B);

    const LossyKernel lk = lossy_kernelize(inst);
    ++branches[std::string(to_string(lk.context.branch))];
    const Clustering lifted = lift_solution(lk.context, brute_force_opt(lk.kernel).clustering);
    const std::int64_t got = truncated(exact(clustering_cost(inst, lifted)), B);
    if (got < opt_b || got > 2 * opt_b) {
      ratio.fail("seed " + std::to_string(seed) + ": lifted " + std::to_string(got) + ", Opt_B " +
                 std::to_string(opt_b));
    }

    if (lk.context.branch != KernelBranch::Generic) continue;
    ++generic;
    const Instance& kern = lk.kernel;
    const auto kp = static_cast<std::int64_t>(kern.k);
    const auto points = static_cast<std::int64_t>(kern.size());
    const std::int64_t beta = inst.p <= 1 ? 2 * B : [&] {
      std::int64_t v = 1;
      for (NormIndex i = 0; i < inst.p; ++i) v *= 2 * B;
      return v;
    }();
    const std::int64_t dim_cap = kp * beta * (4 * B + 1) + 1;
    const std::int64_t mag_cap = std::max(2 * B * (kp * (4 * B + 1) - 1), (kp - 1) * (2 * B + 1));
    Coord mag = 0;
    for (const Point& x : kern.points) {
      for (Coord v : x.coords) mag = std::max<Coord>(mag, v < 0 ? -v : v);
    }
    const std::string tag = "seed " + std::to_string(seed) + ": ";
    if (points > 8 * B * B) size.fail(tag + std::to_string(points) + " points");
    if (kp > 2 * B) size.fail(tag + "k' = " + std::to_string(kp));
    if (static_cast<std::int64_t>(kern.dim) > dim_cap) size.fail(tag + "dimension " + std::to_string(kern.dim));
    if (mag > mag_cap) size.fail(tag + "magnitude " + std::to_string(mag));
  }
  const double secs = since(t0);
  if (secs >= 300) ratio.fail("took " + std::to_string(secs) + "s");
  std::string mix;
  for (const auto& [name, count] : branches) mix += (mix.empty() ? "" : ", ") + name + " " + std::to_string(count);
  ratio.detail = std::to_string(total) + " instances; " + mix;
  report(3, "lifted kernel optimum within [Opt_B, 2 Opt_B]", ratio, secs);
  if (generic < 30) size.fail("only " + std::to_string(generic) + " generic kernels");
  size.detail = std::to_string(generic) + " generic kernels";
  report(4, "generic kernels obey the size bounds", size, secs);
}

// ------------------------------------------------------------------ 5

void criterion_exact_kernel() {
  const auto t0 = Clock::now();
  Outcome o;
  int total = 0, yes = 0, shrunk = 0;
  for (std::uint64_t seed = 1; total < 200; ++seed, ++total) {
    const Instance inst = gen_oracle_sized(seed * 31337, 12);
    const bool original = exact(brute_force_opt(inst).cost) <= inst.budget;
    const Instance kernel = exact_kernelize(inst);
    const bool reduced = exact(brute_force_opt(kernel).cost) <= kernel.budget;
    yes += original;
    shrunk += kernel.dim < inst.dim || kernel.size() < inst.size();
    if (original != reduced) o.fail("seed " + std::to_string(seed));
  }
  o.detail = std::to_string(total) + " instances, " + std::to_string(yes) + " yes, " + std::to_string(shrunk) +
             " strictly smaller kernels";
  report(5, "exact kernel preserves the decision", o, since(t0));
}

// ------------------------------------------------------------------ 6

void criterion_rsm() {
  const auto t0 = Clock::now();
  Outcome o;
  Hypergraph h;
  h.r = 3;
  h.n = 6;
  h.edges = {{0, 1, 2}, {3, 4, 5}, {0, 2, 4}, {1, 3, 4}};
  const Instance inst = reduce_rsm(h);
  if (inst.size() != 24) o.fail("points " + std::to_string(inst.size()));
  if (inst.dim != 36) o.fail("d " + std::to_string(inst.dim));
  if (inst.k != 8) o.fail("k " + std::to_string(inst.k));
  if (inst.budget != 42) o.fail("B " + std::to_string(inst.budget));
  const std::int64_t planted = exact(clustering_cost(inst, planted_rsm_clustering(h, {0, 1})));
  if (planted != 42) o.fail("planted cost " + std::to_string(planted));

  // hand-written distance oracle on the vectors themselves
  const std::int64_t r = 3;
  std::size_t pairs = 0;
  const std::size_t edge_base = 2 * h.n;
  for (std::size_t i = 0; i < h.n; ++i) {
    for (std::size_t copy = 0; copy < 2; ++copy) {
      const Point& v = inst.points[2 * i + copy];
      for (std::size_t j = 0; j < h.edges.size(); ++j) {
        for (std::size_t fc = 0; fc < 3; ++fc) {
          const Point& f = inst.points[edge_base + 3 * j + fc];
          const bool member = std::find(h.edges[j].begin(), h.edges[j].end(), i) != h.edges[j].end();
          std::int64_t diff = 0;
          for (std::size_t c = 0; c < inst.dim; ++c) diff += v.coords[c] != f.coords[c];
          ++pairs;
          if (diff != (member ? 3 * r - 2 : 3 * r)) o.fail("vertex/edge distance " + std::to_string(diff));
        }
      }
      for (std::size_t i2 = 0; i2 < h.n; ++i2) {
        if (i2 == i) continue;
        std::int64_t diff = 0;
        for (std::size_t c = 0; c < inst.dim; ++c) diff += v.coords[c] != inst.points[2 * i2].coords[c];
        ++pairs;
        if (diff != 4 * r) o.fail("vertex/vertex distance " + std::to_string(diff));
      }
    }
  }
  const double secs = since(t0);
  if (secs >= 1) o.fail("took " + std::to_string(secs) + "s");
  o.detail = "24 points, d=36, k=8, B=42, planted " + std::to_string(planted) + ", " + std::to_string(pairs) +
             " pairs checked";
  report(6, "r-set matching construction numbers", o, secs);
}

// ------------------------------------------------------------------ 7

TdmInstance random_tdm(std::size_t n, std::size_t extra, std::mt19937_64& rng, std::vector<std::size_t>& matching) {
  TdmInstance t;
  t.n = n;
  std::vector<std::size_t> ys(n), zs(n);
  std::iota(ys.begin(), ys.end(), 0);
  std::iota(zs.begin(), zs.end(), 0);
  std::shuffle(ys.begin(), ys.end(), rng);
  std::shuffle(zs.begin(), zs.end(), rng);
  for (std::size_t i = 0; i < n; ++i) t.triples.push_back({i, ys[i], zs[i]});
  std::vector<std::size_t> uses(3 * n, 1);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t tries = 0; t.triples.size() < n + extra && tries < 1000; ++tries) {
    const std::array<std::size_t, 3> tr{pick(rng), pick(rng), pick(rng)};
    if (uses[tr[0]] >= 3 || uses[n + tr[1]] >= 3 || uses[2 * n + tr[2]] >= 3) continue;
    ++uses[tr[0]];
    ++uses[n + tr[1]];
    ++uses[2 * n + tr[2]];
    t.triples.push_back(tr);
  }
  // put the matching at random positions so occurrence ranks vary
  std::vector<std::size_t> order(t.triples.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::array<std::size_t, 3>> shuffled(order.size());
  matching.clear();
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    shuffled[pos] = t.triples[order[pos]];
    if (order[pos] < n) matching.push_back(pos);
  }
  t.triples = std::move(shuffled);
  return t;
}

void criterion_3dm() {
  const auto t0 = Clock::now();
  Outcome o;
  std::mt19937_64 rng(2024);
  std::size_t instances = 0, pairs = 0;
  double slowest = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto t1 = Clock::now();
      std::vector<std::size_t> matching;
      const TdmInstance t = random_tdm(n, 2 * n, rng, matching);
      const Instance inst = reduce_3dm(t);
      const std::size_t N = 3 * n;
      const std::size_t m = t.triples.size();
      auto hamming = [&](std::size_t a, std::size_t b) {
        std::int64_t diff = 0;
        for (std::size_t c = 0; c < inst.dim; ++c) diff += inst.points[a].coords[c] != inst.points[b].coords[c];
        ++pairs;
        return diff;
      };
      for (std::size_t s = 0; s < m; ++s) {
        for (std::size_t u = s + 1; u < m; ++u) {
          if (hamming(2 * N + 3 * s, 2 * N + 3 * u) != 6) o.fail("triple/triple distance");
        }
        const auto elems = t.elements(s);
        for (std::size_t e = 0; e < N; ++e) {
          const bool member = std::find(elems.begin(), elems.end(), e) != elems.end();
          const std::int64_t d = hamming(2 * e + 1, 2 * N + 3 * s + 2);
          if (d != (member ? 7 : 9)) o.fail("element/triple distance " + std::to_string(d));
        }
      }
      for (std::size_t e = 0; e < N; ++e) {
        for (std::size_t f = e + 1; f < N; ++f) {
          if (hamming(2 * e, 2 * f) != 12) o.fail("element/element distance");
        }
      }
      const std::int64_t cost = exact(clustering_cost(inst, planted_3dm_clustering(t, matching)));
      if (cost != static_cast<std::int64_t>(7 * N)) {
        o.fail("planted cost " + std::to_string(cost) + " != 7N = " + std::to_string(7 * N));
      }
      slowest = std::max(slowest, since(t1));
      ++instances;
    }
  }
  if (slowest >= 1) o.fail("slowest instance took " + std::to_string(slowest) + "s");
  o.detail = std::to_string(instances) + " instances, " + std::to_string(pairs) + " pairs";
  report(7, "3DM construction numbers", o, since(t0));
}

// ------------------------------------------------------------------ 8

void criterion_structure() {
  const auto t0 = Clock::now();
  Outcome o;
  int heavy = 0, removal = 0, assign = 0;
  for (std::uint64_t seed = 1; heavy < 80 || removal < 80 || assign < 80; ++seed) {
    const Instance inst = gen_oracle_sized(seed * 65537, 12);
    const Solution opt = brute_force_opt(inst);
    const std::int64_t opt_cost = exact(opt.cost);
    const auto s = static_cast<std::int64_t>(inst.cluster_size());
    const std::string tag = "seed " + std::to_string(seed) + ": ";

    if (opt_cost <= inst.budget && heavy < 80) {
      ++heavy;
      for (const auto& part : opt.clustering.members()) {
        if (static_cast<std::int64_t>(heaviest(inst, part)) < s - 2 * inst.budget) {
          o.fail(tag + "cluster without s - 2B identical points");
        }
      }
    }

    const BlockExtraction ext = extract_full_blocks(inst);
    if (!ext.blocks.empty() && removal < 80) {
      ++removal;
      const std::int64_t rest = exact(brute_force_opt(ext.remainder).cost);
      if (rest > 2 * opt_cost) {
        o.fail(tag + "Opt(Y, k - t) = " + std::to_string(rest) + " > 2 Opt = " + std::to_string(2 * opt_cost));
      }
    }

    if (inst.size() <= 8 && assign < 80) {
      ++assign;
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<Coord> coord(-3, 3);
      std::vector<Median> medians;
      for (std::size_t j = 0; j < inst.k; ++j) {
        std::vector<double> c(inst.dim);
        for (auto& v : c) v = static_cast<double>(coord(rng));
        medians.push_back(Median{c, MedianSource::CoordinatewiseExact});
      }
      const std::int64_t flow = exact(assign_to_medians(inst, medians).cost);
      // exhaustive: every equal partition against every matching of parts to medians
      std::int64_t best = -1;
      for_each_equal_partition(inst.size(), inst.k, [&](const Clustering& c) {
        const auto parts = c.members();
        std::vector<std::size_t> perm(inst.k);
        std::iota(perm.begin(), perm.end(), 0);
        do {
          std::int64_t total = 0;
          for (std::size_t a = 0; a < inst.k; ++a) {
            for (std::size_t pos : parts[a]) total += exact(lp_distance(medians[perm[a]], inst.points[pos], inst.p));
          }
          if (best < 0 || total < best) best = total;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return true;
      });
      if (flow != best) o.fail(tag + "flow " + std::to_string(flow) + " vs exhaustive " + std::to_string(best));
    }
  }
  o.detail = std::to_string(heavy) + " heavy-point, " + std::to_string(removal) + " block-removal, " +
             std::to_string(assign) + " assignment instances";
  report(8, "structural properties of optimal clusterings", o, since(t0));
}

}  // namespace

int main() {
  criterion_exact_solver();
  criterion_dimreduce();
  criterion_lossy_kernel();
  criterion_exact_kernel();
  criterion_rsm();
  criterion_3dm();
  criterion_structure();
  std::printf("%s: %d criterion failure(s)\n", failures == 0 ? "ALL PASS" : "FAILED", failures);
  return failures == 0 ? 0 : 1;
}
