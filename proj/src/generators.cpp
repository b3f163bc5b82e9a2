#include "eqclust/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>

namespace eqclust {

namespace {

Instance make_instance(std::size_t dim, std::vector<std::vector<Coord>> rows, NormIndex p, std::size_t k,
                       std::int64_t budget) {
  Instance inst;
  inst.dim = dim;
  inst.p = p;
  inst.k = k;
  inst.budget = budget;
  inst.points.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) inst.points.push_back(Point{std::move(rows[i]), i});
  inst.validate();
  return inst;
}

}  // namespace

Instance gen_random(const RandomSpec& spec) {
  if (spec.k == 0 || spec.n == 0 || spec.n % spec.k != 0) {
    throw InvalidInstance("gen_random needs k > 0 dividing n > 0");
  }
  if (spec.d == 0) throw InvalidInstance("gen_random needs d >= 1");
  if (spec.coord_bound < 0 || spec.budget < 0) throw InvalidInstance("gen_random needs nonnegative bounds");
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<Coord> coord(-spec.coord_bound, spec.coord_bound);
  std::vector<std::vector<Coord>> rows(spec.n, std::vector<Coord>(spec.d));
  for (auto& row : rows) {
    for (auto& v : row) v = coord(rng);
  }
  return make_instance(spec.d, std::move(rows), spec.p, spec.k, spec.budget);
}

Planted gen_planted(const PlantedSpec& spec) {
  if (spec.k == 0 || spec.s == 0 || spec.d == 0) throw InvalidInstance("gen_planted needs k, s, d >= 1");
  if (spec.noise < 0 || spec.budget < 0) throw InvalidInstance("gen_planted needs nonnegative noise and budget");
  if (spec.k > 1 && spec.spread <= 0) throw InvalidInstance("gen_planted needs spread > 0 for k > 1");

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<Coord> offset(-spec.noise, spec.noise);
  const std::size_t n = spec.k * spec.s;
  std::vector<std::vector<Coord>> rows;
  std::vector<std::size_t> label;
  rows.reserve(n);
  for (std::size_t j = 0; j < spec.k; ++j) {
    for (std::size_t i = 0; i < spec.s; ++i) {
      std::vector<Coord> x(spec.d, 0);
      x[0] = static_cast<Coord>(j) * spec.spread;
      for (auto& v : x) v += offset(rng);
      rows.push_back(std::move(x));
      label.push_back(j);
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::vector<Coord>> shuffled;
  Clustering c;
  c.k = spec.k;
  shuffled.reserve(n);
  for (std::size_t pos : order) {
    shuffled.push_back(std::move(rows[pos]));
    c.assignment.push_back(label[pos]);
  }
  return Planted{make_instance(spec.d, std::move(shuffled), spec.p, spec.k, spec.budget), std::move(c)};
}

Instance gen_palette(const PaletteSpec& spec) {
  if (spec.k == 0 || spec.n == 0 || spec.n % spec.k != 0) {
    throw InvalidInstance("gen_palette needs k > 0 dividing n > 0");
  }
  if (spec.d == 0 || spec.palette == 0) throw InvalidInstance("gen_palette needs d, palette >= 1");
  if (spec.range < 0 || spec.budget < 0) throw InvalidInstance("gen_palette needs nonnegative bounds");
  if (!(spec.jitter >= 0.0 && spec.jitter <= 1.0)) throw InvalidInstance("jitter must lie in [0, 1]");

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<Coord> coord(-spec.range, spec.range);
  std::vector<std::vector<Coord>> palette(spec.palette, std::vector<Coord>(spec.d));
  for (auto& v : palette) {
    for (auto& c : v) c = coord(rng);
  }
  std::vector<double> weight(spec.palette);
  for (std::size_t i = 0; i < spec.palette; ++i) weight[i] = 1.0 / static_cast<double>(i + 1);
  std::discrete_distribution<std::size_t> pick(weight.begin(), weight.end());
  std::bernoulli_distribution nudge(spec.jitter);
  std::uniform_int_distribution<std::size_t> axis(0, spec.d - 1);
  std::bernoulli_distribution up(0.5);

  std::vector<std::vector<Coord>> rows;
  rows.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    std::vector<Coord> x = palette[pick(rng)];
    if (nudge(rng)) x[axis(rng)] += up(rng) ? 1 : -1;
    rows.push_back(std::move(x));
  }
  return make_instance(spec.d, std::move(rows), spec.p, spec.k, spec.budget);
}

Instance gen_oracle_sized(std::uint64_t seed, std::size_t max_n) {
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> sizes;
  for (std::size_t n = 2; n <= max_n; ++n) sizes.push_back(n);
  if (sizes.empty()) throw InvalidInstance("gen_oracle_sized needs max_n >= 2");
  const std::size_t n = sizes[std::uniform_int_distribution<std::size_t>(0, sizes.size() - 1)(rng)];
  std::vector<std::size_t> divisors;
  for (std::size_t k = 1; k <= n; ++k) {
    if (n % k == 0) divisors.push_back(k);
  }
  const std::size_t k = divisors[std::uniform_int_distribution<std::size_t>(0, divisors.size() - 1)(rng)];
  const auto p = static_cast<NormIndex>(std::uniform_int_distribution<int>(0, 1)(rng));
  const std::int64_t budget = std::uniform_int_distribution<std::int64_t>(0, 3)(rng);
  const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  const std::uint64_t inner = rng();
  if (std::bernoulli_distribution(0.3)(rng)) {
    return gen_random(RandomSpec{n, k, d, 2, p, budget, inner});
  }
  PaletteSpec spec;
  spec.n = n;
  spec.k = k;
  spec.d = d;
  spec.palette = std::uniform_int_distribution<std::size_t>(1, k + 2)(rng);
  spec.range = 3;
  spec.jitter = std::uniform_real_distribution<double>(0.0, 0.4)(rng);
  spec.p = p;
  spec.budget = budget;
  spec.seed = inner;
  return gen_palette(spec);
}

// ------------------------------------------------------------ r-set matching

void Hypergraph::validate() const {
  if (r < 3) throw InvalidInstance("hypergraph uniformity must be at least 3");
  if (n % r != 0) throw InvalidInstance("vertex count " + std::to_string(n) + " is not divisible by r = " +
                                        std::to_string(r) + "; no perfect matching exists");
  for (std::size_t j = 0; j < edges.size(); ++j) {
    const auto& e = edges[j];
    if (e.size() != r) throw InvalidInstance("edge " + std::to_string(j + 1) + " does not have r vertices");
    if (std::set<std::size_t>(e.begin(), e.end()).size() != r) {
      throw InvalidInstance("edge " + std::to_string(j + 1) + " repeats a vertex");
    }
    for (std::size_t v : e) {
      if (v >= n) throw InvalidInstance("edge " + std::to_string(j + 1) + " names an unknown vertex");
    }
  }
}

Instance reduce_rsm(const Hypergraph& h) {
  h.validate();
  const std::size_t dim = 2 * h.r * h.n;
  std::vector<std::vector<Coord>> rows;
  for (std::size_t i = 0; i < h.n; ++i) {
    std::vector<Coord> v(dim, 0);
    std::fill(v.begin() + static_cast<std::ptrdiff_t>(2 * h.r * i),
              v.begin() + static_cast<std::ptrdiff_t>(2 * h.r * (i + 1)), 1);
    for (std::size_t c = 0; c + 1 < h.r; ++c) rows.push_back(v);
  }
  for (const auto& e : h.edges) {
    std::vector<Coord> f(dim, 0);
    for (std::size_t v : e) f[2 * h.r * v] = 1;
    for (std::size_t c = 0; c < h.r; ++c) rows.push_back(f);
  }
  const std::size_t k = h.n + h.edges.size() - h.n / h.r;
  const auto budget = static_cast<std::int64_t>((3 * h.r - 2) * h.n);
  return make_instance(dim, std::move(rows), 0, k, budget);
}

Clustering planted_rsm_clustering(const Hypergraph& h, const std::vector<std::size_t>& matching) {
  h.validate();
  std::vector<int> cover(h.n, -1);
  std::vector<bool> matched(h.edges.size(), false);
  for (std::size_t j : matching) {
    if (j >= h.edges.size()) throw InvalidInstance("matching names an unknown edge");
    if (matched[j]) throw InvalidInstance("matching repeats an edge");
    matched[j] = true;
    for (std::size_t v : h.edges[j]) {
      if (cover[v] != -1) throw InvalidInstance("matching edges overlap");
      cover[v] = static_cast<int>(j);
    }
  }
  if (std::count(cover.begin(), cover.end(), -1) != 0) throw InvalidInstance("matching is not perfect");

  const std::size_t vertex_copies = h.r - 1;
  const std::size_t edge_base = vertex_copies * h.n;
  std::vector<std::vector<std::size_t>> parts(h.n);
  std::vector<std::size_t> next_copy(h.edges.size(), 0);
  for (std::size_t i = 0; i < h.n; ++i) {
    for (std::size_t c = 0; c < vertex_copies; ++c) parts[i].push_back(vertex_copies * i + c);
    const auto j = static_cast<std::size_t>(cover[i]);
    parts[i].push_back(edge_base + h.r * j + next_copy[j]++);
  }
  for (std::size_t j = 0; j < h.edges.size(); ++j) {
    if (matched[j]) continue;
    std::vector<std::size_t> own;
    for (std::size_t c = 0; c < h.r; ++c) own.push_back(edge_base + h.r * j + c);
    parts.push_back(std::move(own));
  }
  return Clustering::from_members(edge_base + h.r * h.edges.size(), parts);
}

// ---------------------------------------------------------------------- 3DM

void TdmInstance::validate() const {
  std::vector<std::size_t> occurrences(element_count(), 0);
  for (std::size_t t = 0; t < triples.size(); ++t) {
    for (std::size_t side = 0; side < 3; ++side) {
      if (triples[t][side] >= n) throw InvalidInstance("triple " + std::to_string(t + 1) + " is out of range");
    }
    for (std::size_t e : elements(t)) {
      if (++occurrences[e] > 3) {
        throw InvalidInstance("element " + std::to_string(e) + " occurs in more than three triples");
      }
    }
  }
}

std::array<std::size_t, 3> TdmInstance::elements(std::size_t t) const {
  const auto& tr = triples.at(t);
  return {tr[0], n + tr[1], 2 * n + tr[2]};
}

std::array<std::size_t, 3> TdmInstance::ranks(std::size_t t) const {
  const auto mine = elements(t);
  std::array<std::size_t, 3> out{1, 1, 1};
  for (std::size_t u = 0; u < t; ++u) {
    const auto other = elements(u);
    for (std::size_t side = 0; side < 3; ++side) {
      if (other[side] == mine[side]) ++out[side];
    }
  }
  return out;
}

Instance reduce_3dm(const TdmInstance& t) {
  t.validate();
  const std::size_t N = t.element_count();
  const std::size_t dim = 6 * N;
  std::vector<std::vector<Coord>> rows;
  for (std::size_t e = 0; e < N; ++e) {
    std::vector<Coord> a(dim, 0);
    std::fill(a.begin() + static_cast<std::ptrdiff_t>(6 * e), a.begin() + static_cast<std::ptrdiff_t>(6 * e + 6), 1);
    rows.push_back(a);
    rows.push_back(std::move(a));
  }
  for (std::size_t j = 0; j < t.triples.size(); ++j) {
    std::vector<Coord> b(dim, 0);
    const auto elems = t.elements(j);
    const auto rank = t.ranks(j);
    for (std::size_t side = 0; side < 3; ++side) b[6 * elems[side] + rank[side] - 1] = 1;
    for (int c = 0; c < 3; ++c) rows.push_back(b);
  }
  const std::size_t k = 2 * N / 3 + t.triples.size();
  return make_instance(dim, std::move(rows), 0, k, static_cast<std::int64_t>(7 * N));
}

Clustering planted_3dm_clustering(const TdmInstance& t, const std::vector<std::size_t>& matching) {
  t.validate();
  const std::size_t N = t.element_count();
  std::vector<int> cover(N, -1);
  std::vector<bool> matched(t.triples.size(), false);
  for (std::size_t j : matching) {
    if (j >= t.triples.size()) throw InvalidInstance("matching names an unknown triple");
    if (matched[j]) throw InvalidInstance("matching repeats a triple");
    matched[j] = true;
    for (std::size_t e : t.elements(j)) {
      if (cover[e] != -1) throw InvalidInstance("matching triples overlap");
      cover[e] = static_cast<int>(j);
    }
  }
  if (std::count(cover.begin(), cover.end(), -1) != 0) throw InvalidInstance("matching is not perfect");

  const std::size_t triple_base = 2 * N;
  std::vector<std::vector<std::size_t>> parts;
  for (std::size_t e = 0; e < N; ++e) {
    const auto j = static_cast<std::size_t>(cover[e]);
    const auto elems = t.elements(j);
    const auto side = static_cast<std::size_t>(std::find(elems.begin(), elems.end(), e) - elems.begin());
    parts.push_back({2 * e, 2 * e + 1, triple_base + 3 * j + side});
  }
  for (std::size_t j = 0; j < t.triples.size(); ++j) {
    if (!matched[j]) parts.push_back({triple_base + 3 * j, triple_base + 3 * j + 1, triple_base + 3 * j + 2});
  }
  return Clustering::from_members(triple_base + 3 * t.triples.size(), parts);
}

}  // namespace eqclust
