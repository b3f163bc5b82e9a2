#include "eqclust/dimreduce.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace eqclust {

std::vector<std::vector<std::size_t>> greedy_partition(const Instance& inst) {
  const std::size_t n = inst.size();
  std::vector<bool> assigned(n, false);
  std::vector<std::vector<std::size_t>> parts;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (assigned[seed]) continue;
    std::vector<std::size_t> part{seed};
    assigned[seed] = true;
    std::deque<std::size_t> frontier{seed};
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop_front();
      for (std::size_t v = 0; v < n; ++v) {
        if (assigned[v]) continue;
        if (distance_leq_budget(inst.points[u], inst.points[v], inst.p, inst.budget)) {
          assigned[v] = true;
          part.push_back(v);
          frontier.push_back(v);
        }
      }
    }
    std::sort(part.begin(), part.end());
    parts.push_back(std::move(part));
  }
  return parts;
}

ReduceOutcome reduce_dimension(const Instance& inst) {
  inst.validate();
  const std::int64_t B = inst.budget;
  const auto groups = greedy_partition(inst);
  if (groups.size() > inst.k) return NoBudget{};

  const std::size_t distinct_cap = inst.k * static_cast<std::size_t>(2 * B + 1);
  for (const auto& part : groups) {
    std::set<std::vector<Coord>> distinct;
    for (std::size_t pos : part) distinct.insert(inst.points[pos].coords);
    if (distinct.size() > distinct_cap) return NoBudget{};
  }

  ReduceMap map;
  map.encoding = inst.p == 0 ? CoordinateEncoding::Rank : CoordinateEncoding::Shift;
  map.sentinel_columns = inst.p == 0 ? static_cast<std::size_t>(B + 1) : 1;
  map.sentinel_step = B + 1;
  map.part_of.assign(inst.size(), 0);

  std::vector<std::vector<bool>> nonuniform(groups.size(), std::vector<bool>(inst.dim, false));
  for (std::size_t j = 0; j < groups.size(); ++j) {
    const Point& first = inst.points[groups[j].front()];
    std::size_t count = 0;
    for (std::size_t h = 0; h < inst.dim; ++h) {
      for (std::size_t pos : groups[j]) {
        if (inst.points[pos].coords[h] != first.coords[h]) {
          nonuniform[j][h] = true;
          ++count;
          break;
        }
      }
    }
    map.width = std::max(map.width, count);
  }

  for (std::size_t j = 0; j < groups.size(); ++j) {
    ReducePart part;
    part.members = groups[j];
    for (std::size_t h = 0; h < inst.dim; ++h) {
      if (nonuniform[j][h]) part.selected.push_back(h);
    }
    // pad with the smallest-index uniform coordinates
    for (std::size_t h = 0; h < inst.dim && part.selected.size() < map.width; ++h) {
      if (!nonuniform[j][h]) part.selected.push_back(h);
    }
    std::sort(part.selected.begin(), part.selected.end());
    if (map.encoding == CoordinateEncoding::Shift) {
      for (std::size_t h : part.selected) {
        Coord lo = inst.points[part.members.front()].coords[h];
        for (std::size_t pos : part.members) lo = std::min(lo, inst.points[pos].coords[h]);
        part.shift.push_back(lo);
      }
    }
    for (std::size_t pos : part.members) map.part_of[pos] = j;
    map.parts.push_back(std::move(part));
  }

  Instance out;
  out.dim = map.output_dim();
  out.p = inst.p;
  out.k = inst.k;
  out.budget = B;
  out.points.resize(inst.size());
  for (std::size_t j = 0; j < map.parts.size(); ++j) {
    const ReducePart& part = map.parts[j];
    std::vector<std::map<Coord, Coord>> rank(part.selected.size());
    if (map.encoding == CoordinateEncoding::Rank) {
      for (std::size_t c = 0; c < part.selected.size(); ++c) {
        for (std::size_t pos : part.members) rank[c].emplace(inst.points[pos].coords[part.selected[c]], 0);
        Coord next = 0;
        for (auto& entry : rank[c]) entry.second = next++;
      }
    }
    const Coord sentinel = static_cast<Coord>(j) * map.sentinel_step;
    for (std::size_t pos : part.members) {
      const Point& x = inst.points[pos];
      Point y;
      y.id = x.id;
      y.coords.reserve(out.dim);
      for (std::size_t c = 0; c < part.selected.size(); ++c) {
        const Coord v = x.coords[part.selected[c]];
        y.coords.push_back(map.encoding == CoordinateEncoding::Rank ? rank[c].at(v) : v - part.shift[c]);
      }
      y.coords.insert(y.coords.end(), map.sentinel_columns, sentinel);
      out.points[pos] = std::move(y);
    }
  }
  return Reduction{std::move(out), std::move(map)};
}

std::int64_t coordinate_spread(NormIndex p, std::int64_t budget) {
  if (p <= 1) return budget;
  std::int64_t r = 1;
  for (NormIndex i = 0; i < p; ++i) {
    if (budget != 0 && r > INT64_MAX / budget) throw std::overflow_error("B^p exceeds 64-bit range");
    r *= budget;
  }
  return r;
}

std::int64_t reduced_dimension_bound(std::size_t k, NormIndex p, std::int64_t budget) {
  return static_cast<std::int64_t>(k) * coordinate_spread(p, budget) * (2 * budget + 1) + 1;
}

std::int64_t reduced_magnitude_bound(std::size_t k, std::int64_t budget) {
  const auto kk = static_cast<std::int64_t>(k);
  return std::max(budget * (kk * (2 * budget + 1) - 1), (kk - 1) * (budget + 1));
}

}  // namespace eqclust
