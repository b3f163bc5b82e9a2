#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "eqclust/core.hpp"

namespace eqclust {

struct RandomSpec {
  std::size_t n = 4;
  std::size_t k = 2;
  std::size_t d = 1;
  Coord coord_bound = 3;  // coordinates drawn from [-bound, bound]
  NormIndex p = 1;
  std::int64_t budget = 1;
  std::uint64_t seed = 0;
};

Instance gen_random(const RandomSpec& spec);

struct PlantedSpec {
  std::size_t k = 2;
  std::size_t s = 2;
  std::size_t d = 1;
  Coord spread = 10;  // l_inf gap between centers; l_p distance is at least this
  Coord noise = 0;    // per-coordinate offset bound around each center
  NormIndex p = 1;
  std::int64_t budget = 0;
  std::uint64_t seed = 0;
};

struct Planted {
  Instance instance;
  Clustering clustering;
};

/// k centers on a lattice of step `spread` (first coordinate), each with s
/// points offset by at most `noise` per coordinate. Points are shuffled.
Planted gen_planted(const PlantedSpec& spec);

struct PaletteSpec {
  std::size_t n = 6;
  std::size_t k = 2;
  std::size_t d = 1;
  std::size_t palette = 3;  // distinct base values
  Coord range = 4;          // base coordinates drawn from [-range, range]
  double jitter = 0.2;      // chance that a point moves one coordinate by +-1
  NormIndex p = 1;
  std::int64_t budget = 1;
  std::uint64_t seed = 0;
};

/// Duplicate-heavy instance: each point copies a palette value (earlier
/// values are more likely) and is occasionally nudged by one unit.
Instance gen_palette(const PaletteSpec& spec);

/// Small instance for oracle checks: n <= max_n, p in {0, 1}, B in 0..3, and
/// a mix of random and duplicate-heavy data, all derived from `seed`.
Instance gen_oracle_sized(std::uint64_t seed, std::size_t max_n = 12);

/// r-uniform hypergraph on vertices 0..n-1.
struct Hypergraph {
  std::size_t r = 3;
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> edges;

  void validate() const;
};

/// Binary instance whose optimum is (3r-2)n iff the hypergraph has a perfect
/// matching. Points: r-1 copies of each vertex vector, then r copies of each
/// edge vector.
Instance reduce_rsm(const Hypergraph& h);

/// Yes-certificate for a perfect matching given as edge indices: each vertex
/// cluster takes its r-1 copies plus one copy of the matched edge; every other
/// edge's copies form their own clusters.
Clustering planted_rsm_clustering(const Hypergraph& h, const std::vector<std::size_t>& matching);

/// 3-dimensional matching with n elements per side. Elements are numbered
/// 0..3n-1: X then Y then Z.
struct TdmInstance {
  std::size_t n = 0;
  std::vector<std::array<std::size_t, 3>> triples;  // (x, y, z), each 0..n-1

  void validate() const;
  std::size_t element_count() const { return 3 * n; }
  /// Global element ids of triple t.
  std::array<std::size_t, 3> elements(std::size_t t) const;
  /// Occurrence rank (1..3) of each element of triple t, by order of appearance.
  std::array<std::size_t, 3> ranks(std::size_t t) const;
};

/// Binary instance in dimension 6N: two copies of each element vector, then
/// three copies of each triple vector. Cluster size 3, B = 7N.
Instance reduce_3dm(const TdmInstance& t);

/// Certificate for a perfect matching given as triple indices: element e gets
/// the cluster {a_e, a_e, b_t} with t its matched triple; the copies of every
/// unmatched triple form their own cluster. Costs exactly 7N.
Clustering planted_3dm_clustering(const TdmInstance& t, const std::vector<std::size_t>& matching);

}  // namespace eqclust
